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

#include "memprobe/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "memprobe/error.hpp"
#include "memprobe/syntax/functions.hpp"
#include "memprobe/syntax/lexer.hpp"

namespace memprobe {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Label label) {
  return label == Label::member ? "member" : "non_member";
}

Label label_from_string(std::string_view name) {
  if (name == "member") return Label::member;
  if (name == "non_member" || name == "nonmember") return Label::non_member;
  throw Error("unknown label '" + std::string(name) + "'");
}

std::string_view to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::none: return "none";
    case MutationKind::t1: return "t1";
    case MutationKind::t2a: return "t2a";
    case MutationKind::t2b: return "t2b";
    case MutationKind::t3: return "t3";
    case MutationKind::hybrid: return "hybrid";
  }
  return "none";
}

MutationKind mutation_kind_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto k : {MutationKind::none, MutationKind::t1, MutationKind::t2a, MutationKind::t2b,
                 MutationKind::t3, MutationKind::hybrid}) {
    if (lower == to_string(k)) return k;
  }
  throw Error("unknown mutation kind '" + std::string(name) + "'");
}

void MutationSpec::check() const {
  const bool needs = kind == MutationKind::t3 || kind == MutationKind::hybrid;
  if (needs != target_similarity.has_value())
    throw Error("target_similarity must be set exactly for t3/hybrid");
  if (kind == MutationKind::hybrid && *target_similarity != 0.8)
    throw Error("hybrid fixes the t3 stage at 0.8");
  if (target_similarity && !(*target_similarity > 0.0 && *target_similarity <= 1.0))
    throw Error("target_similarity must lie in (0, 1]");
}

std::string to_string(const LengthBucket& bucket) {
  return std::to_string(bucket.lo) + "-" + std::to_string(bucket.hi);
}

std::vector<LengthBucket> default_buckets() {
  return {{100, 200}, {200, 300}, {300, 400}, {400, 500}, {500, 600}};
}

std::size_t count_tokens(std::string_view text) { return syntax::fallback_token_count(text); }

std::vector<CodeSample> extract_functions(std::string_view source_text, Language language) {
  std::vector<CodeSample> out;
  for (const auto& span : syntax::find_functions(source_text, language)) {
    CodeSample s;
    s.id = span.name + "@" + std::to_string(span.line + 1);
    s.language = language;
    s.text = std::string(source_text.substr(span.begin, span.end - span.begin));
    s.token_count = count_tokens(s.text);
    out.push_back(std::move(s));
  }
  return out;
}

BucketAssignment assign_buckets(const std::vector<CodeSample>& samples,
                                const std::vector<LengthBucket>& buckets) {
  std::vector<LengthBucket> sorted = buckets;
  std::sort(sorted.begin(), sorted.end(),
            [](const LengthBucket& a, const LengthBucket& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].lo >= sorted[i].hi) throw Error("bucket " + to_string(sorted[i]) + " is empty");
    if (i > 0 && sorted[i].lo < sorted[i - 1].hi)
      throw Error("buckets " + to_string(sorted[i - 1]) + " and " + to_string(sorted[i]) +
                  " overlap");
  }
  BucketAssignment out;
  for (const auto& b : buckets) out.buckets.push_back({b, {}});
  for (const auto& s : samples) {
    bool placed = false;
    for (auto& [b, members] : out.buckets) {
      if (b.contains(s.token_count)) {
        members.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) out.unbucketed.push_back(s);
  }
  return out;
}

bool is_iso_date(std::string_view d) {
  if (d.size() < 10) return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (d[i] < '0' || d[i] > '9') return false;
  if (d[4] != '-' || d[7] != '-') return false;
  const int month = (d[5] - '0') * 10 + (d[6] - '0');
  const int day = (d[8] - '0') * 10 + (d[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::vector<Violation> validate_corpus(const CorpusManifest& manifest) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  const bool check_counts = manifest.tokenizer_id == syntax::kFallbackTokenizerId;
  if (!manifest.cutoff_date.empty() && !is_iso_date(manifest.cutoff_date))
    out.push_back({"", "date_format", "cutoff_date '" + manifest.cutoff_date + "' is not ISO-8601"});
  for (const auto& s : manifest.samples) {
    if (!seen.insert(s.id).second)
      out.push_back({s.id, "duplicate_id", "duplicate sample id '" + s.id + "'"});
    try {
      syntax::check_function(s.text, s.language);
    } catch (const ParseFailure& e) {
      out.push_back({s.id, "unparseable", e.what()});
    }
    if (s.origin_id.has_value() != s.mutation.has_value())
      out.push_back({s.id, "lineage", "origin_id and mutation must be present together"});
    if (check_counts && s.token_count != count_tokens(s.text))
      out.push_back({s.id, "token_count",
                     "token_count " + std::to_string(s.token_count) + " != " +
                         std::to_string(count_tokens(s.text))});
    const auto date = s.meta.find("commit_date");
    if (date != s.meta.end()) {
      if (!is_iso_date(date->second)) {
        out.push_back({s.id, "date_format", "commit_date '" + date->second + "' is not ISO-8601"});
      } else if (s.label == Label::non_member && is_iso_date(manifest.cutoff_date) &&
                 date->second.substr(0, 10) < manifest.cutoff_date.substr(0, 10)) {
        out.push_back({s.id, "date_rule",
                       "non_member commit_date " + date->second + " precedes cutoff " +
                           manifest.cutoff_date});
      }
    }
  }
  return out;
}

// ---- serialization ----------------------------------------------------------

ordered_json to_json(const MutationSpec& spec) {
  ordered_json j;
  j["kind"] = to_string(spec.kind);
  if (spec.target_similarity) j["target_similarity"] = *spec.target_similarity;
  j["seed"] = spec.seed;
  return j;
}

ordered_json to_json(const CodeSample& s) {
  ordered_json j;
  j["id"] = s.id;
  j["language"] = to_string(s.language);
  j["label"] = to_string(s.label);
  j["text"] = s.text;
  if (s.origin_id) j["origin_id"] = *s.origin_id;
  if (s.mutation) {
    ordered_json m = to_json(s.mutation->spec);
    if (s.mutation->achieved_similarity) m["achieved_similarity"] = *s.mutation->achieved_similarity;
    if (s.mutation->similarity_unreachable) m["similarity_unreachable"] = true;
    if (!s.mutation->stages.empty()) {
      m["stages"] = ordered_json::array();
      for (const auto& st : s.mutation->stages) m["stages"].push_back(to_json(st));
    }
    j["mutation"] = std::move(m);
  }
  j["token_count"] = s.token_count;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : s.meta) meta[k] = v;
  j["meta"] = std::move(meta);
  return j;
}

ordered_json to_json(const CorpusManifest& m) {
  ordered_json j;
  j["schema"] = "manifest/1";
  j["tokenizer_id"] = m.tokenizer_id;
  j["cutoff_date"] = m.cutoff_date;
  j["samples"] = ordered_json::array();
  for (const auto& s : m.samples) j["samples"].push_back(to_json(s));
  return j;
}

MutationSpec mutation_spec_from_json(const json& j) {
  MutationSpec spec;
  spec.kind = mutation_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("target_similarity")) spec.target_similarity = j.at("target_similarity").get<double>();
  spec.seed = j.value("seed", std::uint64_t{0});
  return spec;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CodeSample sample_from_json(const json& j, const fs::path& base_dir) {
  CodeSample s;
  try {
    s.id = j.at("id").get<std::string>();
    const auto lang = language_from_string(j.at("language").get<std::string>());
    if (!lang) throw Error("unknown language");
    s.language = *lang;
    s.label = label_from_string(j.at("label").get<std::string>());
    const bool has_text = j.contains("text");
    const bool has_path = j.contains("path");
    if (has_text == has_path) throw Error("exactly one of 'text' and 'path' is required");
    s.text = has_text ? j.at("text").get<std::string>()
                      : read_file(base_dir / j.at("path").get<std::string>());
    if (j.contains("origin_id")) s.origin_id = j.at("origin_id").get<std::string>();
    if (j.contains("mutation")) {
      const auto& m = j.at("mutation");
      Mutation mut;
      mut.spec = mutation_spec_from_json(m);
      if (m.contains("achieved_similarity"))
        mut.achieved_similarity = m.at("achieved_similarity").get<double>();
      mut.similarity_unreachable = m.value("similarity_unreachable", false);
      if (m.contains("stages"))
        for (const auto& st : m.at("stages")) mut.stages.push_back(mutation_spec_from_json(st));
      s.mutation = std::move(mut);
    }
    s.token_count = j.contains("token_count") ? j.at("token_count").get<std::size_t>()
                                              : count_tokens(s.text);
    if (j.contains("meta"))
      for (const auto& [k, v] : j.at("meta").items())
        s.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
  } catch (const json::exception& e) {
    throw Error("sample '" + s.id + "': " + e.what());
  }
  return s;
}

CorpusManifest manifest_from_json(const json& j, const fs::path& base_dir) {
  CorpusManifest m;
  const std::string schema = j.value("schema", std::string("manifest/1"));
  if (schema.rfind("manifest/1", 0) != 0) throw Error("unsupported manifest schema '" + schema + "'");
  m.tokenizer_id = j.value("tokenizer_id", std::string(syntax::kFallbackTokenizerId));
  m.cutoff_date = j.value("cutoff_date", std::string());
  for (const auto& s : j.at("samples")) m.samples.push_back(sample_from_json(s, base_dir));
  return m;
}

CorpusManifest read_manifest(const fs::path& path) {
  const std::string body = read_file(path);
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

void write_manifest(const CorpusManifest& manifest, std::ostream& out) {
  out << to_json(manifest).dump(2) << '\n';
}

void write_manifest(const CorpusManifest& manifest, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_manifest(manifest, out);
}

// ---- ingestion --------------------------------------------------------------

CorpusManifest ingest(const fs::path& dir, const IngestOptions& options, IngestStats* stats) {
  if (!fs::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  if (!options.cutoff_date.empty() && !is_iso_date(options.cutoff_date))
    throw Error("cutoff '" + options.cutoff_date + "' is not an ISO-8601 date");
  json meta = json::object();
  if (options.meta_file) meta = json::parse(read_file(*options.meta_file));
  std::string repo = options.repo;
  if (repo.empty()) repo = meta.value("repo", std::string());
  if (repo.empty()) repo = fs::absolute(dir).lexically_normal().filename().string();
  if (repo.empty()) repo = fs::absolute(dir).lexically_normal().parent_path().filename().string();
  const std::string default_date = meta.value("commit_date", std::string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto lang = language_from_extension(entry.path().extension().string());
    if (lang && *lang == options.language) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  IngestStats local;
  CorpusManifest out;
  out.cutoff_date = options.cutoff_date;
  std::unordered_set<std::string> texts;
  for (const auto& file : files) {
    ++local.files;
    const std::string rel = file.lexically_relative(dir).generic_string();
    std::vector<CodeSample> found;
    try {
      found = extract_functions(read_file(file), options.language);
    } catch (const ParseFailure&) {
      ++local.skipped_files;
      continue;
    }
    std::string date = default_date;
    if (meta.contains("files") && meta["files"].contains(rel))
      date = meta["files"][rel].value("commit_date", date);
    for (auto& s : found) {
      if (options.dedupe && !texts.insert(s.text).second) {
        ++local.duplicates;
        continue;
      }
      if (options.label == Label::non_member && !date.empty() && is_iso_date(options.cutoff_date) &&
          date.substr(0, 10) < options.cutoff_date) {
        ++local.ineligible;
        continue;
      }
      s.id = rel + "::" + s.id;
      s.label = options.label;
      s.meta["repo"] = repo;
      s.meta["path"] = rel;
      if (!date.empty()) s.meta["commit_date"] = date;
      out.samples.push_back(std::move(s));
    }
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace memprobe
