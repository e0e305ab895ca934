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
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "memprobe/data/synonyms.hpp"
#include "memprobe/error.hpp"
#include "memprobe/mutator.hpp"
#include "memprobe/seed.hpp"
#include "memprobe/syntax/lexer.hpp"
#include "mutator/binding.hpp"

namespace memprobe {

const std::vector<std::pair<std::string, std::string>>& synonym_lexicon() {
  static const auto lexicon = [] {
    std::vector<std::pair<std::string, std::string>> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::istringstream in(data::kSynonyms);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream fields(line);
      std::string a, b;
      if (!(fields >> a >> b) || a == b) continue;
      if (seen.insert({a, b}).second) out.emplace_back(a, b);
    }
    return out;
  }();
  return lexicon;
}

namespace {

// word -> synonyms, both directions, sorted for determinism.
const std::map<std::string, std::vector<std::string>>& synonym_index() {
  static const auto index = [] {
    std::map<std::string, std::set<std::string>> sets;
    for (const auto& [a, b] : synonym_lexicon()) {
      sets[a].insert(b);
      sets[b].insert(a);
    }
    std::map<std::string, std::vector<std::string>> out;
    for (auto& [k, v] : sets) out[k] = std::vector<std::string>(v.begin(), v.end());
    return out;
  }();
  return index;
}

// Sub-tokens of snake_case / camelCase names. Separators stay as their own
// pieces so that joining the pieces gives back the name.
std::vector<std::string> split_subtokens(const std::string& name) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(name[i]);
    if (c == '_' || std::isdigit(c)) {
      flush();
      std::string sep(1, static_cast<char>(c));
      while (i + 1 < name.size() &&
             (name[i + 1] == '_' || std::isdigit(static_cast<unsigned char>(name[i + 1]))))
        sep += name[++i];
      out.push_back(sep);
      continue;
    }
    if (std::isupper(c) && !cur.empty()) {
      const bool prev_lower = std::islower(static_cast<unsigned char>(cur.back()));
      const bool next_lower = i + 1 < name.size() && std::islower(static_cast<unsigned char>(name[i + 1]));
      if (prev_lower || (std::isupper(static_cast<unsigned char>(cur.back())) && next_lower)) flush();
    }
    cur += static_cast<char>(c);
  }
  flush();
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Applies the case pattern of `like` to `word`.
std::string match_case(const std::string& like, const std::string& word) {
  bool all_upper = like.size() > 1;
  for (char c : like)
    if (!std::isupper(static_cast<unsigned char>(c))) all_upper = false;
  std::string out = word;
  if (all_upper) {
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  } else if (std::isupper(static_cast<unsigned char>(like[0]))) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

bool acceptable(const std::string& candidate, Language language, const mutator::Bindings& b,
                const std::set<std::string>& used) {
  return !candidate.empty() && !syntax::is_keyword(candidate, language) && !b.taken.count(candidate) &&
         !used.count(candidate);
}

std::string random8(Rng& rng) {
  static constexpr char kFirst[] = "abcdefghijklmnopqrstuvwxyz";
  static constexpr char kRest[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string s(8, 'a');
  s[0] = kFirst[rng.below(26)];
  for (int i = 1; i < 8; ++i) s[static_cast<std::size_t>(i)] = kRest[rng.below(36)];
  return s;
}

// Synonym replacement for `name`, or empty when nothing applies. Up to eight
// draws are tried before giving up on a colliding name.
std::string synonym_for(const std::string& name, Language language, const mutator::Bindings& b,
                        const std::set<std::string>& used, Rng& rng) {
  const auto& index = synonym_index();
  const auto parts = split_subtokens(name);
  bool any = false;
  for (const auto& p : parts)
    if (index.count(lower(p))) any = true;
  if (!any) return {};
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::string out;
    for (const auto& p : parts) {
      auto it = index.find(lower(p));
      out += it == index.end() ? p : match_case(p, rng.pick(it->second));
    }
    if (out != name && acceptable(out, language, b, used)) return out;
  }
  return {};
}

}  // namespace

std::vector<std::string> bound_identifiers(std::string_view text, Language language) {
  return mutator::analyze_bindings(text, language).names;
}

RenameResult rename_identifiers(std::string_view text, Language language, RenameMode mode,
                                std::uint64_t stream_seed) {
  const mutator::Bindings b = mutator::analyze_bindings(text, language);
  Rng rng(stream_seed);
  std::set<std::string> used;
  std::vector<std::pair<std::string, std::string>> renames;
  RenameResult out;
  for (const auto& name : b.names) {
    std::string replacement;
    if (mode == RenameMode::random8) {
      int attempts = 0;
      do {
        if (++attempts > 100)
          throw RenameCollision("no fresh name for '" + name + "' after 100 attempts");
        replacement = random8(rng);
      } while (!acceptable(replacement, language, b, used));
    } else {
      replacement = synonym_for(name, language, b, used, rng);
      if (replacement.empty()) continue;
    }
    used.insert(replacement);
    renames.emplace_back(name, replacement);
    out.map.entries[name] = replacement;
  }
  out.text = mutator::apply_renames(text, b, renames);
  return out;
}

}  // namespace memprobe
