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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "memprobe/simd/kernels.hpp"

namespace memprobe::simd {

namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect() {
  if (const char* env = std::getenv("MEMPROBE_SIMD")) {
    const std::string want = env;
    for (Isa isa : available_isas()) {
      if (to_string(isa) == want) return isa;
    }
  }
  const auto isas = available_isas();
  return isas.back();
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "?";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (cpu_has(isa)) out.push_back(isa);
  }
  return out;
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!cpu_has(isa)) throw std::invalid_argument("ISA not available: " + std::string(to_string(isa)));
  selected().store(isa, std::memory_order_relaxed);
}

double sum(std::span<const double> values) {
  switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      return avx2::sum(values);
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return neon::sum(values);
#endif
    default:
      return scalar::sum(values);
  }
}

void normalize(std::span<const double> logprob, std::span<const double> mean,
               std::span<const double> stddev, double floor, std::span<double> out) {
  switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      return avx2::normalize(logprob, mean, stddev, floor, out);
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return neon::normalize(logprob, mean, stddev, floor, out);
#endif
    default:
      return scalar::normalize(logprob, mean, stddev, floor, out);
  }
}

}  // namespace memprobe::simd
