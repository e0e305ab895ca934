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

#include <algorithm>
#include <set>

#include "memprobe/error.hpp"
#include "memprobe/mutator.hpp"
#include "memprobe/seed.hpp"
#include "memprobe/syntax/functions.hpp"
#include "memprobe/syntax/lexer.hpp"
#include "mutator/t3_sites.hpp"
#include "mutator/text_util.hpp"

namespace memprobe {

std::string_view to_string(Pattern pattern) {
  switch (pattern) {
    case Pattern::aug_assign: return "aug_assign";
    case Pattern::loop_form: return "loop_form";
    case Pattern::conditional: return "conditional";
    case Pattern::extract_literal: return "extract_literal";
    case Pattern::de_morgan: return "de_morgan";
    case Pattern::call_chain: return "call_chain";
  }
  return "?";
}

namespace mutator {

using syntax::TokenKind;

namespace {

bool operand_end(const View& v, std::size_t i) {
  switch (v.code[i].kind) {
    case TokenKind::identifier:
    case TokenKind::number:
    case TokenKind::string:
    case TokenKind::character:
      return true;
    case TokenKind::keyword: {
      static const std::set<std::string_view> kValues = {
          "this", "true", "false", "null", "nullptr", "self", "True", "False", "None", "super"};
      return kValues.count(v.text(i)) > 0;
    }
    default: {
      const auto w = v.text(i);
      return w == ")" || w == "]" || w == "}";
    }
  }
}

int clike_prec(std::string_view w) {
  static const std::pair<std::string_view, int> kTable[] = {
      {"*", 13}, {"/", 13}, {"%", 13}, {"+", 12}, {"-", 12}, {"<<", 11}, {">>", 11}, {">>>", 11},
      {"<", 10}, {">", 10}, {"<=", 10}, {">=", 10}, {"instanceof", 10}, {"==", 9}, {"!=", 9},
      {"&", 8}, {"^", 7}, {"|", 6}, {"&&", 5}, {"||", 4}, {"?", 3}, {":", 3},
      {"=", 2}, {"+=", 2}, {"-=", 2}, {"*=", 2}, {"/=", 2}, {"%=", 2}, {"&=", 2}, {"|=", 2},
      {"^=", 2}, {"<<=", 2}, {">>=", 2}, {">>>=", 2}, {",", 1}};
  for (auto [op, p] : kTable)
    if (op == w) return p;
  return 0;
}

int python_prec(std::string_view w) {
  static const std::pair<std::string_view, int> kTable[] = {
      {"**", 14}, {"*", 13}, {"/", 13}, {"//", 13}, {"%", 13}, {"@", 13}, {"+", 12}, {"-", 12},
      {"<<", 11}, {">>", 11}, {"&", 9}, {"^", 8}, {"|", 7}, {"<", 6}, {">", 6}, {"<=", 6},
      {">=", 6}, {"==", 6}, {"!=", 6}, {"in", 6}, {"is", 6}, {"and", 4}, {"or", 3},
      {"if", 2}, {"else", 2}, {":=", 2}, {",", 1}};
  for (auto [op, p] : kTable)
    if (op == w) return p;
  return 0;
}

}  // namespace

int binary_prec(const View& v, std::size_t b, std::size_t i, Language language) {
  if (i <= b || i >= v.code.size() || !operand_end(v, i - 1)) {
    return 0;
  }
  const auto w = v.text(i);
  if (language == Language::python) {
    if (w == "not" && v.is(i + 1, "in")) return 6;
    return python_prec(w);
  }
  if (w == ",") return 1;
  return clike_prec(w);
}

std::vector<std::size_t> top_level(const View& v, std::size_t b, std::size_t e, std::string_view w) {
  std::vector<std::size_t> out;
  for (std::size_t i = b; i < e; ++i) {
    if (v.open(i) && v.match[i] != npos && v.match[i] < e) {
      i = v.match[i];
      continue;
    }
    if (v.text(i) == w) out.push_back(i);
  }
  return out;
}

int root_prec(const View& v, std::size_t b, std::size_t e, Language language) {
  int lowest = 100;
  if (language == Language::python && v.is(b, "not")) lowest = 5;
  for (std::size_t i = b; i < e; ++i) {
    if (v.open(i) && v.match[i] != npos && v.match[i] < e) {
      i = v.match[i];
      continue;
    }
    if (language == Language::python && v.is(i, "lambda")) lowest = std::min(lowest, 1);
    const int p = binary_prec(v, b, i, language);
    if (p > 0) lowest = std::min(lowest, p);
  }
  return lowest;
}

bool wrapped_in_parens(const View& v, std::size_t b, std::size_t e) {
  return e > b + 1 && v.is(b, "(") && v.match[b] == e - 1;
}

bool trivial_literal(std::string_view literal) {
  static const std::set<std::string_view> kTrivial = {
      "0", "1", "0.0", "1.0", "0L", "1L", "0l", "1l", "0u", "1u", "0U", "1U", "0.0f", "1.0f",
      "0.0F", "1.0F", "0.", "1.", "\"\"", "''", "0.0d", "1.0d"};
  return kTrivial.count(literal) > 0;
}

std::string fresh_name(const View& v, Language language, std::initializer_list<std::string_view> pool) {
  std::set<std::string_view> used;
  for (std::size_t i = 0; i < v.code.size(); ++i)
    if (v.ident(i)) used.insert(v.text(i));
  for (int suffix = 1;; ++suffix) {
    for (auto word : pool) {
      std::string name(word);
      if (suffix > 1) name += std::to_string(suffix);
      if (!used.count(name) && !syntax::is_keyword(name, language)) return name;
    }
  }
}

bool starts_line(std::string_view text, std::size_t offset) {
  const std::size_t b = line_begin(text, offset);
  return text.substr(b, offset - b).find_first_not_of(" \t") == std::string_view::npos;
}

namespace {

std::vector<Edit> sites_for(std::string_view text, Language language) {
  return language == Language::python ? python_sites(text) : clike_sites(text, language);
}

std::string apply_edit(std::string_view text, const Edit& e) {
  std::string out;
  out.reserve(text.size() + e.text.size());
  out.append(text.substr(0, e.begin));
  out.append(e.text);
  out.append(text.substr(e.end));
  return out;
}

constexpr double kTolerance = 0.05;
constexpr double kSlack = 1e-9;

}  // namespace
}  // namespace mutator

T3Result rewrite_t3(std::string_view text, Language language, double target_similarity,
                    std::uint64_t stream_seed) {
  using namespace mutator;
  syntax::check_function(text, language);
  T3Result out;
  out.text = std::string(text);
  const auto original = split_lines(text);
  if (target_similarity >= 1.0 || original.empty()) return out;

  const double n = static_cast<double>(original.size());
  std::size_t current = original.size();
  Rng rng(stream_seed);
  while (static_cast<double>(current) / n > target_similarity + kTolerance + kSlack) {
    auto sites = sites_for(out.text, language);
    {
      // Only rewrite code that still matches the original.
      const auto lines = split_lines(out.text);
      const auto matched = lcs_matched(original, lines);
      std::erase_if(sites, [&](const Edit& e) {
        const std::size_t first = line_of(out.text, e.begin);
        const std::size_t last = line_of(out.text, std::max(e.begin, e.end == 0 ? 0 : e.end - 1));
        for (std::size_t l = first; l <= last && l < matched.size(); ++l)
          if (matched[l]) return false;
        return true;
      });
    }
    rng.shuffle(sites);
    bool accepted = false;
    for (const auto& site : sites) {
      std::string candidate = apply_edit(out.text, site);
      if (!syntax::parses_as_function(candidate, language)) continue;
      const std::size_t lcs = lcs_length(original, split_lines(candidate));
      if (lcs >= current) continue;
      if (static_cast<double>(lcs) / n < target_similarity - kTolerance - kSlack) continue;
      out.text = std::move(candidate);
      out.applied.push_back(site.pattern);
      current = lcs;
      accepted = true;
      break;
    }
    if (!accepted) {
      out.similarity_unreachable = true;
      break;
    }
  }
  out.achieved_similarity = static_cast<double>(current) / n;
  return out;
}

std::vector<std::pair<Pattern, std::string>> t3_candidates(std::string_view text, Language language) {
  using namespace mutator;
  syntax::check_function(text, language);
  std::vector<std::pair<Pattern, std::string>> out;
  for (const auto& site : sites_for(text, language)) out.emplace_back(site.pattern, apply_edit(text, site));
  return out;
}

}  // namespace memprobe
