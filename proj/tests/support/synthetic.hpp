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

#include <string>

#include "memprobe/seed.hpp"
#include "memprobe/traces.hpp"

namespace memprobe::testing {

// Random trace with lp in (-12, 0], optional moments, and token texts that
// exercise JSON escaping.
Trace random_trace(Rng& rng, const std::string& sample_id, std::size_t tokens, bool moments,
                   const std::string& model_id = "m");

// Trace whose logprobs all equal `lp` (members vs non-members by level).
Trace flat_trace(const std::string& sample_id, std::size_t tokens, double lp, const std::string& model_id = "m",
                 Condition condition = Condition::plain());

}  // namespace memprobe::testing
