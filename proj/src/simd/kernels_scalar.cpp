// Copyright 2026 The memprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "memprobe/simd/kernels.hpp"

namespace memprobe::simd {

namespace detail {

double finish_sum(const double lane_sum[4], const double lane_comp[4],
                  std::span<const double> tail) {
  double total = 0.0;
  double comp = 0.0;
  for (int j = 0; j < 4; ++j) neumaier_add(total, comp, lane_sum[j]);
  for (int j = 0; j < 4; ++j) comp += lane_comp[j];
  for (double x : tail) neumaier_add(total, comp, x);
  return total + comp;
}

}  // namespace detail

namespace scalar {

double sum(std::span<const double> values) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  double c[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocks = values.size() / 4 * 4;
  for (std::size_t i = 0; i < blocks; i += 4) {
    for (int j = 0; j < 4; ++j) detail::neumaier_add(s[j], c[j], values[i + j]);
  }
  return detail::finish_sum(s, c, values.subspan(blocks));
}

void normalize(std::span<const double> logprob, std::span<const double> mean,
               std::span<const double> stddev, double floor, std::span<double> out) {
  for (std::size_t i = 0; i < logprob.size(); ++i) {
    const double sd = stddev[i] > floor ? stddev[i] : floor;
    out[i] = (logprob[i] - mean[i]) / sd;
  }
}

}  // namespace scalar
}  // namespace memprobe::simd
