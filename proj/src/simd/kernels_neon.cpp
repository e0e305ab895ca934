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

#if defined(__aarch64__)
#include <arm_neon.h>

namespace memprobe::simd::neon {

namespace {

// One Neumaier step on two lanes.
inline void step(float64x2_t& s, float64x2_t& c, float64x2_t x) {
  const float64x2_t t = vaddq_f64(s, x);
  const uint64x2_t s_dominant = vcgeq_f64(vabsq_f64(s), vabsq_f64(x));
  const float64x2_t from_s = vaddq_f64(vsubq_f64(s, t), x);
  const float64x2_t from_x = vaddq_f64(vsubq_f64(x, t), s);
  c = vaddq_f64(c, vbslq_f64(s_dominant, from_s, from_x));
  s = t;
}

}  // namespace

double sum(std::span<const double> values) {
  float64x2_t s_lo = vdupq_n_f64(0.0), s_hi = vdupq_n_f64(0.0);
  float64x2_t c_lo = vdupq_n_f64(0.0), c_hi = vdupq_n_f64(0.0);
  const std::size_t blocks = values.size() / 4 * 4;
  for (std::size_t i = 0; i < blocks; i += 4) {
    step(s_lo, c_lo, vld1q_f64(values.data() + i));
    step(s_hi, c_hi, vld1q_f64(values.data() + i + 2));
  }
  double lane_sum[4];
  double lane_comp[4];
  vst1q_f64(lane_sum, s_lo);
  vst1q_f64(lane_sum + 2, s_hi);
  vst1q_f64(lane_comp, c_lo);
  vst1q_f64(lane_comp + 2, c_hi);
  return detail::finish_sum(lane_sum, lane_comp, values.subspan(blocks));
}

void normalize(std::span<const double> logprob, std::span<const double> mean,
               std::span<const double> stddev, double floor, std::span<double> out) {
  const std::size_t n = logprob.size();
  const std::size_t blocks = n / 2 * 2;
  const float64x2_t floor_v = vdupq_n_f64(floor);
  for (std::size_t i = 0; i < blocks; i += 2) {
    const float64x2_t sd_raw = vld1q_f64(stddev.data() + i);
    const float64x2_t sd = vbslq_f64(vcgtq_f64(sd_raw, floor_v), sd_raw, floor_v);
    const float64x2_t diff = vsubq_f64(vld1q_f64(logprob.data() + i), vld1q_f64(mean.data() + i));
    vst1q_f64(out.data() + i, vdivq_f64(diff, sd));
  }
  scalar::normalize(logprob.subspan(blocks), mean.subspan(blocks), stddev.subspan(blocks),
                    floor, out.subspan(blocks));
}

}  // namespace memprobe::simd::neon
#endif
