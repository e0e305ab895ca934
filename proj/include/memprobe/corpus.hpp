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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "memprobe/language.hpp"

namespace memprobe {

enum class Label { member, non_member };

std::string_view to_string(Label label);
Label label_from_string(std::string_view name);  // throws Error

enum class MutationKind { none, t1, t2a, t2b, t3, hybrid };

std::string_view to_string(MutationKind kind);
MutationKind mutation_kind_from_string(std::string_view name);  // throws Error

struct MutationSpec {
  MutationKind kind = MutationKind::none;
  std::optional<double> target_similarity;  // t3 / hybrid only
  std::uint64_t seed = 0;

  // Throws Error when the similarity field does not match the kind.
  void check() const;
  bool operator==(const MutationSpec&) const = default;
};

// Lineage of a mutant: the spec applied plus what the mutator observed.
struct Mutation {
  MutationSpec spec;
  std::optional<double> achieved_similarity;  // t3 / hybrid
  bool similarity_unreachable = false;
  // Component steps with their derived seeds (hybrid: t2a then t3; a mutant
  // of a mutant: the earlier steps first).
  std::vector<MutationSpec> stages;
  bool operator==(const Mutation&) const = default;
};

struct CodeSample {
  std::string id;
  Language language = Language::python;
  std::string text;
  // extract_functions leaves this at its default; ingest assigns it.
  Label label = Label::member;
  std::optional<std::string> origin_id;
  std::optional<Mutation> mutation;
  std::size_t token_count = 0;
  std::map<std::string, std::string> meta;  // repo, path, commit_date, ...
  bool operator==(const CodeSample&) const = default;
};

struct CorpusManifest {
  std::string tokenizer_id = "fallback/1";
  std::string cutoff_date;
  std::vector<CodeSample> samples;
  bool operator==(const CorpusManifest&) const = default;
};

struct LengthBucket {
  std::size_t lo = 0;  // inclusive
  std::size_t hi = 0;  // exclusive
  bool contains(std::size_t n) const { return n >= lo && n < hi; }
  bool operator==(const LengthBucket&) const = default;
};

std::string to_string(const LengthBucket& bucket);  // "100-200"

std::vector<LengthBucket> default_buckets();  // 100-600 in steps of 100

struct BucketAssignment {
  std::vector<std::pair<LengthBucket, std::vector<CodeSample>>> buckets;
  std::vector<CodeSample> unbucketed;
};

// Token count under the offline tokenizer.
std::size_t count_tokens(std::string_view text);

// One sample per top-level or class-member function, in source order. Ids
// are "<name>@<line>" (1-based); callers usually qualify them with a path.
// Throws ParseFailure; nothing is returned for a file that does not parse.
std::vector<CodeSample> extract_functions(std::string_view source_text, Language language);

// Throws Error when buckets are empty, inverted or overlapping.
BucketAssignment assign_buckets(const std::vector<CodeSample>& samples,
                                const std::vector<LengthBucket>& buckets);

struct Violation {
  std::string sample_id;
  std::string rule;  // duplicate_id, unparseable, date_rule, lineage, token_count, ...
  std::string message;
};

std::vector<Violation> validate_corpus(const CorpusManifest& manifest);

// True when `date` starts with a YYYY-MM-DD calendar date.
bool is_iso_date(std::string_view date);

// ---- serialization ----------------------------------------------------------

nlohmann::ordered_json to_json(const MutationSpec& spec);
nlohmann::ordered_json to_json(const CodeSample& sample);
nlohmann::ordered_json to_json(const CorpusManifest& manifest);
MutationSpec mutation_spec_from_json(const nlohmann::json& j);
CodeSample sample_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
CorpusManifest manifest_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});

// `path` entries are resolved relative to the manifest's directory.
CorpusManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const CorpusManifest& manifest, std::ostream& out);
void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);

// ---- ingestion --------------------------------------------------------------

struct IngestOptions {
  Language language = Language::python;
  Label label = Label::member;
  std::string cutoff_date;
  std::string repo;  // defaults to the directory name
  // Optional JSON: {"repo": ..., "commit_date": default, "files": {relpath: {"commit_date": ...}}}
  std::optional<std::filesystem::path> meta_file;
  bool dedupe = false;  // drop exact-text duplicates, keeping the first
};

struct IngestStats {
  std::size_t files = 0;
  std::size_t skipped_files = 0;      // did not parse
  std::size_t duplicates = 0;
  std::size_t ineligible = 0;         // non-members dated before the cutoff
};

// Walks `dir` recursively in sorted path order.
CorpusManifest ingest(const std::filesystem::path& dir, const IngestOptions& options,
                      IngestStats* stats = nullptr);

}  // namespace memprobe
