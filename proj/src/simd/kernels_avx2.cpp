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

// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "memprobe/simd/kernels.hpp"

namespace memprobe::simd::avx2 {

double sum(std::span<const double> values) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();
  const std::size_t blocks = values.size() / 4 * 4;
  for (std::size_t i = 0; i < blocks; i += 4) {
    const __m256d x = _mm256_loadu_pd(values.data() + i);
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d abs_s = _mm256_andnot_pd(sign, s);
    const __m256d abs_x = _mm256_andnot_pd(sign, x);
    const __m256d s_dominant = _mm256_cmp_pd(abs_s, abs_x, _CMP_GE_OQ);
    const __m256d from_s = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    const __m256d from_x = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(from_x, from_s, s_dominant));
    s = t;
  }
  alignas(32) double lane_sum[4];
  alignas(32) double lane_comp[4];
  _mm256_store_pd(lane_sum, s);
  _mm256_store_pd(lane_comp, c);
  return detail::finish_sum(lane_sum, lane_comp, values.subspan(blocks));
}

void normalize(std::span<const double> logprob, std::span<const double> mean,
               std::span<const double> stddev, double floor, std::span<double> out) {
  const std::size_t n = logprob.size();
  const std::size_t blocks = n / 4 * 4;
  const __m256d floor_v = _mm256_set1_pd(floor);
  for (std::size_t i = 0; i < blocks; i += 4) {
    const __m256d lp = _mm256_loadu_pd(logprob.data() + i);
    const __m256d mu = _mm256_loadu_pd(mean.data() + i);
    // max_pd returns the second operand when unordered, like the scalar form.
    const __m256d sd = _mm256_max_pd(_mm256_loadu_pd(stddev.data() + i), floor_v);
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(_mm256_sub_pd(lp, mu), sd));
  }
  scalar::normalize(logprob.subspan(blocks), mean.subspan(blocks), stddev.subspan(blocks),
                    floor, out.subspan(blocks));
}

}  // namespace memprobe::simd::avx2
