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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "memprobe/corpus.hpp"
#include "memprobe/traces.hpp"

namespace memprobe {

enum class Method { ppl, zlib, mink, minkpp, ref, neighbor, recall };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);  // throws Error

enum class RecallVariant { difference, ratio };

struct ScoringConfig {
  double k_percent = 20.0;          // Min-K family, in (0, 100]
  std::size_t neighbor_count = 10;  // neighbors used per sample (lowest indices first)
  int compression_level = 6;        // zlib's default level, pinned
  double sigma_floor = 1e-6;
  RecallVariant recall_variant = RecallVariant::difference;

  void check() const;  // throws Error
};

// Higher is more member-like for every method.
double score_ppl(const Trace& trace);
double score_compression(const Trace& trace, std::string_view raw_text, const ScoringConfig& cfg);
double score_min_k(const Trace& trace, double k_percent);
double score_min_k_pp(const Trace& trace, double k_percent, double sigma_floor = 1e-6);
double score_ref(const Trace& target, const Trace& reference);
double score_neighbor(const Trace& trace, const std::vector<const Trace*>& neighbors);
double score_neighbor(const Trace& trace, const std::vector<Trace>& neighbors);
double score_recall(const Trace& plain, const Trace& prefixed,
                    RecallVariant variant = RecallVariant::difference);

// Byte length of zlib-compressed (RFC 1950) text.
std::size_t compressed_size(std::string_view text, int level);

// Number of tokens Min-K selects: max(1, floor(n * k / 100)).
std::size_t min_k_count(std::size_t n, double k_percent);

// ---- batch scoring ------------------------------------------------------------

// What to score: a method, its parameters and the models involved.
struct ScoreRequest {
  Method method = Method::ppl;
  ScoringConfig cfg;
  std::string model_id;            // target model
  std::string reference_model_id;  // ref only
  std::string prefix_id;           // recall; empty = the sample's only prefix trace

  // Report key, e.g. "ppl", "mink-20", "minkpp-30", "recall-ratio".
  std::string label() const;
  std::vector<Requirement> requirements() const;
};

struct ScoreResult {
  std::string sample_id;
  Method method = Method::ppl;
  std::string method_label;
  double value = 0.0;
  nlohmann::ordered_json params;  // config snapshot plus model ids
};

nlohmann::ordered_json to_json(const ScoreResult& result);
ScoreResult score_result_from_json(const nlohmann::json& j);

// `sample` supplies raw text for zlib and may be null otherwise.
ScoreResult score_record(const ScoreRequest& request, const AlignedRecord& record,
                         const CodeSample* sample);

struct ScoreBatch {
  std::vector<ScoreResult> results;  // in sample order
  std::vector<Gap> gaps;
};

// Joins, then scores every gap-free sample; parallel over samples.
ScoreBatch score_samples(const ScoreRequest& request, const std::vector<CodeSample>& samples,
                         const std::vector<Trace>& traces, unsigned threads = 1);

}  // namespace memprobe
