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

#include <cstdio>

#include "memprobe/corpus.hpp"
#include "memprobe/error.hpp"
#include "memprobe/mutator.hpp"
#include "memprobe/seed.hpp"

namespace memprobe {

namespace {

// Copies `in` into a mutant carrying `text`, recording `spec` and its stages.
CodeSample derive(const CodeSample& in, const MutationSpec& spec, std::string text,
                  std::vector<MutationSpec> stages) {
  CodeSample out = in;
  const std::string origin = in.origin_id.value_or(in.id);
  out.origin_id = origin;
  out.id = mutant_id(origin, spec);
  out.text = std::move(text);
  out.token_count = count_tokens(out.text);
  Mutation m;
  m.spec = spec;
  if (in.mutation) {
    m.stages = in.mutation->stages;
    if (m.stages.empty()) m.stages.push_back(in.mutation->spec);
  }
  for (auto& s : stages) m.stages.push_back(std::move(s));
  out.mutation = std::move(m);
  return out;
}

std::string_view t2_label(RenameMode mode) { return mode == RenameMode::synonym ? "t2a" : "t2b"; }

}  // namespace

CodeSample mutate_t1(const CodeSample& sample, std::uint64_t seed, const T1Options& options) {
  const MutationSpec spec{MutationKind::t1, std::nullopt, seed};
  const FormatStyle style = draw_style(seed, sample.id);
  return derive(sample, spec, format_code(sample.text, sample.language, style, options.strip_comments), {spec});
}

CodeSample mutate_t2(const CodeSample& sample, RenameMode mode, std::uint64_t seed) {
  const MutationSpec spec{mode == RenameMode::synonym ? MutationKind::t2a : MutationKind::t2b,
                          std::nullopt, seed};
  auto renamed = rename_identifiers(sample.text, sample.language, mode,
                                    derive_seed(seed, sample.id, t2_label(mode)));
  return derive(sample, spec, std::move(renamed.text), {spec});
}

CodeSample mutate_t3(const CodeSample& sample, double target_similarity, std::uint64_t seed) {
  const MutationSpec spec{MutationKind::t3, target_similarity, seed};
  auto r = rewrite_t3(sample.text, sample.language, target_similarity, derive_seed(seed, sample.id, "t3"));
  CodeSample out = derive(sample, spec, std::move(r.text), {spec});
  out.mutation->achieved_similarity = r.achieved_similarity;
  out.mutation->similarity_unreachable = r.similarity_unreachable;
  return out;
}

std::pair<std::uint64_t, std::uint64_t> hybrid_seeds(std::uint64_t seed) {
  return {derive_seed(seed, "hybrid", "t2a"), derive_seed(seed, "hybrid", "t3")};
}

CodeSample mutate_hybrid(const CodeSample& sample, std::uint64_t seed) {
  constexpr double kHybridTarget = 0.8;
  const MutationSpec spec{MutationKind::hybrid, kHybridTarget, seed};
  const auto [s2, s3] = hybrid_seeds(seed);
  const std::string renamed =
      rename_identifiers(sample.text, sample.language, RenameMode::synonym, derive_seed(s2, sample.id, "t2a")).text;
  auto r = rewrite_t3(renamed, sample.language, kHybridTarget, derive_seed(s3, sample.id, "t3"));
  CodeSample out = derive(sample, spec, std::move(r.text),
                          {MutationSpec{MutationKind::t2a, std::nullopt, s2},
                           MutationSpec{MutationKind::t3, kHybridTarget, s3}});
  out.mutation->achieved_similarity = r.achieved_similarity;
  out.mutation->similarity_unreachable = r.similarity_unreachable;
  return out;
}

CodeSample mutate(const CodeSample& sample, const MutationSpec& spec) {
  spec.check();
  switch (spec.kind) {
    case MutationKind::none: return sample;
    case MutationKind::t1: return mutate_t1(sample, spec.seed);
    case MutationKind::t2a: return mutate_t2(sample, RenameMode::synonym, spec.seed);
    case MutationKind::t2b: return mutate_t2(sample, RenameMode::random8, spec.seed);
    case MutationKind::t3: return mutate_t3(sample, *spec.target_similarity, spec.seed);
    case MutationKind::hybrid: return mutate_hybrid(sample, spec.seed);
  }
  throw Error("unknown mutation kind");
}

std::string mutant_id(const std::string& origin_id, const MutationSpec& spec) {
  std::string id = origin_id + "#" + std::string(to_string(spec.kind));
  if (spec.target_similarity) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "@%g", *spec.target_similarity);
    id += buf;
  }
  return id + ":" + std::to_string(spec.seed);
}

}  // namespace memprobe
