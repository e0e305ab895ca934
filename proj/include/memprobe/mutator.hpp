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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memprobe/corpus.hpp"

namespace memprobe {

// |LCS of line sequences| / |original lines|, comparing lines with trailing
// whitespace removed. An empty original gives 1.0.
double line_similarity(std::string_view original, std::string_view mutated);

// ---- T1: layout ---------------------------------------------------------------

enum class BraceStyle { same_line, next_line };

struct FormatStyle {
  int indent_width = 4;      // 2, 4 or 8
  bool use_tabs = false;
  int max_width = 100;       // 79, 100 or 120
  BraceStyle braces = BraceStyle::same_line;  // C-family only
  bool space_before_paren = true;             // `if (` vs `if(`; C-family only
  bool operator==(const FormatStyle&) const = default;
};

// Style drawn from the stream seeded by (seed, sample_id).
FormatStyle draw_style(std::uint64_t seed, std::string_view sample_id);

// Re-lays out `text`; the comment-stripped token stream is unchanged.
// Throws ParseFailure if `text` is not a single valid function.
std::string format_code(std::string_view text, Language language, const FormatStyle& style,
                        bool strip_comments = false);

struct T1Options {
  bool strip_comments = false;
};

CodeSample mutate_t1(const CodeSample& sample, std::uint64_t seed, const T1Options& options = {});

// ---- T2: renaming -------------------------------------------------------------

enum class RenameMode { synonym, random8 };

struct IdentifierMap {
  std::map<std::string, std::string> entries;  // original -> replacement
};

struct RenameResult {
  std::string text;
  IdentifierMap map;
};

// Renames locally bound identifiers. Throws ParseFailure, or RenameCollision
// when random8 fails to find a fresh name in 100 attempts.
RenameResult rename_identifiers(std::string_view text, Language language, RenameMode mode,
                                std::uint64_t stream_seed);

// Names the sample binds itself (function, parameters, locals), in first
// occurrence order.
std::vector<std::string> bound_identifiers(std::string_view text, Language language);

CodeSample mutate_t2(const CodeSample& sample, RenameMode mode, std::uint64_t seed);

// Bundled lexicon as (word, synonym) pairs; each pair is usable both ways.
const std::vector<std::pair<std::string, std::string>>& synonym_lexicon();

// ---- T3: statement rewrites ---------------------------------------------------

enum class Pattern {
  aug_assign,       // x += e  <->  x = x + e
  loop_form,        // for <-> while
  conditional,      // conditional expression <-> if/else
  extract_literal,  // literal -> named local
  de_morgan,        // negated condition with swapped branches
  call_chain,       // nested/chained call -> temporary
};

std::string_view to_string(Pattern pattern);

struct T3Result {
  std::string text;
  double achieved_similarity = 1.0;
  bool similarity_unreachable = false;
  std::vector<Pattern> applied;  // in application order
};

// Rewrites in seeded random site order until similarity <= target + 0.05.
// Throws ParseFailure on invalid input.
T3Result rewrite_t3(std::string_view text, Language language, double target_similarity,
                    std::uint64_t stream_seed);

// Every rewrite the catalog offers on `text`, each applied alone. Used by
// tests to check that individual patterns keep the code valid.
std::vector<std::pair<Pattern, std::string>> t3_candidates(std::string_view text, Language language);

CodeSample mutate_t3(const CodeSample& sample, double target_similarity, std::uint64_t seed);

// T2a (synonym) then T3 at 0.8 with seeds derived from `seed`.
CodeSample mutate_hybrid(const CodeSample& sample, std::uint64_t seed);

// Dispatches on spec.kind; kind none returns the sample unchanged.
CodeSample mutate(const CodeSample& sample, const MutationSpec& spec);

// "<origin>#<kind>[@<similarity>]:<seed>"
std::string mutant_id(const std::string& origin_id, const MutationSpec& spec);

// Seeds of the two hybrid stages.
std::pair<std::uint64_t, std::uint64_t> hybrid_seeds(std::uint64_t seed);

}  // namespace memprobe
