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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "memprobe/corpus.hpp"

namespace memprobe {

// Joins prefix snippets; also separates the prefix from the sample.
inline constexpr std::string_view kPrefixDelimiter = "\n\n\n";

enum class SettingId { s1, s2, s3 };

std::string_view to_string(SettingId setting);
SettingId setting_from_string(std::string_view name);  // "1"/"s1", ...; throws Error

enum class CloneKind { verbatim, type1, type2, type3 };

struct CloneLevel {
  CloneKind kind = CloneKind::verbatim;
  double similarity = 0.0;  // type3 only

  bool operator==(const CloneLevel&) const = default;
};

// "verbatim", "type1", "type2", "type3@0.7"
std::string to_string(const CloneLevel& level);
CloneLevel clone_level_from_string(std::string_view name);  // throws Error

struct SettingSpec {
  SettingId setting = SettingId::s1;
  std::optional<MutationSpec> mutation;   // s1, s3
  std::optional<CloneLevel> clone_level;  // s2
  // s2: target similarities of the MT3 pool; empty means the default
  // ({0.5}, or {0.9, 0.7, 0.5} for type3).
  std::vector<double> t3_levels;
  std::uint64_t seed = 0;

  void check() const;  // throws Error
  std::vector<double> pool_levels() const;
  bool operator==(const SettingSpec&) const = default;
};

struct PrefixBundle {
  std::string prefix_id;
  std::vector<std::string> snippet_ids;
  std::string concatenated_text;
  std::vector<std::string> excluded_ids;

  bool operator==(const PrefixBundle&) const = default;
};

struct LabeledEvalSet {
  std::vector<CodeSample> members;
  std::vector<CodeSample> non_members;
  SettingSpec provenance;
  std::vector<std::string> excluded_ids;  // prefix snippets kept out

  bool operator==(const LabeledEvalSet&) const = default;
};

// Draws n distinct snippets; requires |nonmembers| > n. Throws
// InsufficientNonMembers.
PrefixBundle sample_prefixes(const std::vector<CodeSample>& nonmembers, std::size_t n,
                             std::uint64_t seed);

// Builders drop any sample whose id is in `excluded` before mutating and
// throw Error when member and non-member ids overlap. Mutation runs on up to
// `threads` workers; the output does not depend on the count.
LabeledEvalSet build_setting1(const std::vector<CodeSample>& dm, const std::vector<CodeSample>& dnm,
                              const MutationSpec& mutation, unsigned threads = 1,
                              const std::vector<std::string>& excluded = {});
LabeledEvalSet build_setting2(const std::vector<CodeSample>& dm, const std::vector<CodeSample>& dnm,
                              const CloneLevel& level, std::uint64_t seed,
                              const std::vector<double>& t3_levels = {}, unsigned threads = 1,
                              const std::vector<std::string>& excluded = {});
LabeledEvalSet build_setting3(const std::vector<CodeSample>& dm, const std::vector<CodeSample>& dnm,
                              const MutationSpec& mutation, unsigned threads = 1,
                              const std::vector<std::string>& excluded = {});

// Dispatches on spec.setting.
LabeledEvalSet build_setting(const SettingSpec& spec, const std::vector<CodeSample>& dm,
                             const std::vector<CodeSample>& dnm, unsigned threads = 1,
                             const std::vector<std::string>& excluded = {});

// Throws Error on overlapping ids or a sample whose lineage does not match
// the setting (e.g. a mutated member in Setting 2 beyond the clone level).
void check_eval_set(const LabeledEvalSet& set);

// ---- serialization ----------------------------------------------------------

nlohmann::ordered_json to_json(const SettingSpec& spec);
SettingSpec setting_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const PrefixBundle& bundle);
PrefixBundle prefix_bundle_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const LabeledEvalSet& set);
LabeledEvalSet eval_set_from_json(const nlohmann::json& j);

LabeledEvalSet read_eval_set(const std::filesystem::path& path);
void write_eval_set(const LabeledEvalSet& set, const std::filesystem::path& path);
PrefixBundle read_prefix_bundle(const std::filesystem::path& path);
void write_prefix_bundle(const PrefixBundle& bundle, const std::filesystem::path& path);

}  // namespace memprobe
