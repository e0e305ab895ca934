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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "memprobe/corpus.hpp"
#include "memprobe/protocol.hpp"
#include "memprobe/scoring.hpp"
#include "memprobe/traces.hpp"

namespace memprobe {

// ---- AUC ----------------------------------------------------------------------

// Twice the Mann-Whitney U: 2 per member > non-member pair, 1 per tie.
std::uint64_t twice_mann_whitney(const std::vector<double>& members, const std::vector<double>& non_members);

// P(member > non-member) + 0.5 P(tie). Throws OneClassOnly if either side
// is empty. auc(a, b) + auc(b, a) == 1 holds exactly.
double auc(const std::vector<double>& members, const std::vector<double>& non_members);
double auc(const std::vector<double>& values, const std::vector<Label>& labels);

// ---- n-gram overlap ---------------------------------------------------------

// Fraction of the prefix's distinct n-grams (fallback tokens) that occur in
// some corpus sample; 0 when the prefix is shorter than n. n in [1, 8].
double ngram_overlap(std::string_view prefix_text, const std::vector<CodeSample>& corpus, std::size_t n);

// ---- reports ------------------------------------------------------------------

struct MethodReport {
  std::string model_id;
  std::string method;  // ScoreRequest::label()
  std::vector<double> per_seed;
  double mean = 0.0;
  // Breakdown key -> per-seed AUC; nullopt where a class is missing.
  std::map<std::string, std::vector<std::optional<double>>> by_bucket;
  std::map<std::string, std::vector<std::optional<double>>> by_clone;
};

struct EvalReport {
  std::string name;
  SettingSpec setting;  // seed field is the first seed's
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> n_members;      // per seed
  std::vector<std::size_t> n_non_members;  // per seed
  std::size_t excluded_for_gaps = 0;       // summed over seeds and methods
  std::vector<MethodReport> methods;
};

// "s1/t2a", "s2/type3@0.7", "s3/t3@0.5", ...
std::string setting_key(const SettingSpec& spec);

// Lineage group of a sample: "original", "t1", "t2a", "t3@0.9", ...
std::string clone_group(const CodeSample& sample);

// One seed's AUC for each method from precomputed scores. Samples without a
// score for a method are excluded from that method and counted.
EvalReport evaluate_scores(const LabeledEvalSet& set, const std::vector<ScoreResult>& scores,
                           const std::vector<LengthBucket>& buckets = default_buckets(), std::string name = {});

// ---- experiments ----------------------------------------------------------------

// Supplies traces for the samples of one built set.
using TraceProvider =
    std::function<std::vector<Trace>(const std::vector<CodeSample>& samples, const std::vector<Requirement>& required)>;

// Serves traces from line-delimited files, indexed once by sample id.
TraceProvider file_trace_provider(const std::vector<std::filesystem::path>& files);

struct PrefixPolicy {
  bool enabled = false;
  bool out_of_domain = false;  // draw from ExperimentConfig::ood_prefix_pool, not the non-members
  std::size_t count = 12;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<CodeSample> members;
  std::vector<CodeSample> non_members;
  std::vector<CodeSample> ood_prefix_pool;
  std::vector<ScoreRequest> methods;
  std::vector<SettingSpec> settings;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3};
  PrefixPolicy prefix;
  std::vector<LengthBucket> buckets = default_buckets();
  bool allow_gaps = false;  // otherwise a missing trace is an error
  unsigned threads = 1;
};

// Paths in the document are resolved against `base_dir`; traces listed under
// "traces" are returned through `trace_files`.
ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir,
                                      std::vector<std::filesystem::path>* trace_files = nullptr);
ScoreRequest score_request_from_json(const nlohmann::json& j);

// One report per configured setting. For every seed the setting is rebuilt
// with that seed (mutations and prefix draw), all methods are scored and
// AUCs computed. Throws TraceGap naming the first gap unless allow_gaps.
std::vector<EvalReport> run_experiment(const ExperimentConfig& config, const TraceProvider& provider);

// ---- rendering ------------------------------------------------------------------

nlohmann::ordered_json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);
std::vector<EvalReport> read_reports(const std::filesystem::path& path);  // one report or an array

// Header plus one row per (report, method).
std::string report_csv(const std::vector<EvalReport>& reports);

// Rows as in the CSV, plus plot series: per-bucket mean AUC curves and the
// T2a -> T2b AUC drop per method.
nlohmann::ordered_json report_json(const std::vector<EvalReport>& reports);

}  // namespace memprobe
