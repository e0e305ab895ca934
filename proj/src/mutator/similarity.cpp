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

#include "memprobe/mutator.hpp"
#include "mutator/text_util.hpp"

namespace memprobe {

double line_similarity(std::string_view original, std::string_view mutated) {
  const auto a = mutator::split_lines(original);
  if (a.empty()) return 1.0;
  const auto b = mutator::split_lines(mutated);
  return static_cast<double>(mutator::lcs_length(a, b)) / static_cast<double>(a.size());
}

}  // namespace memprobe
