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

#pragma once

#include <span>
#include <string_view>
#include <vector>

// Arithmetic inner loops of the scoring module. Every kernel has a scalar
// reference in namespace `scalar` and vector variants that perform the same
// IEEE operations in the same order, so all variants agree bit for bit.
namespace memprobe::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

// Variants usable on this CPU, scalar first.
std::vector<Isa> available_isas();

// The variant used by the dispatched entry points. Chosen once from CPU
// features; MEMPROBE_SIMD=scalar|avx2|neon overrides when available.
Isa active_isa();

// Test hook: routes dispatched calls to `isa` (must be available).
void force_isa(Isa isa);

// Compensated (Neumaier) sum over four interleaved lanes; lanes are combined
// in a fixed order after the main loop and the tail is folded in last.
double sum(std::span<const double> values);

// out[i] = (logprob[i] - mean[i]) / (stddev[i] > floor ? stddev[i] : floor)
void normalize(std::span<const double> logprob, std::span<const double> mean,
               std::span<const double> stddev, double floor, std::span<double> out);

namespace scalar {
double sum(std::span<const double> values);
void normalize(std::span<const double> logprob, std::span<const double> mean,
               std::span<const double> stddev, double floor, std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double sum(std::span<const double> values);
void normalize(std::span<const double> logprob, std::span<const double> mean,
               std::span<const double> stddev, double floor, std::span<double> out);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double sum(std::span<const double> values);
void normalize(std::span<const double> logprob, std::span<const double> mean,
               std::span<const double> stddev, double floor, std::span<double> out);
}  // namespace neon
#endif

namespace detail {
// Shared lane reduction so every variant finishes identically.
double finish_sum(const double lane_sum[4], const double lane_comp[4],
                  std::span<const double> tail);

inline void neumaier_add(double& total, double& comp, double x) {
  const double t = total + x;
  if ((total < 0 ? -total : total) >= (x < 0 ? -x : x)) {
    comp += (total - t) + x;
  } else {
    comp += (x - t) + total;
  }
  total = t;
}
}  // namespace detail

}  // namespace memprobe::simd
