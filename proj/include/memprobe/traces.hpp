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

#include <compare>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "memprobe/corpus.hpp"

namespace memprobe {

struct TokenRecord {
  std::string t;
  double lp = 0.0;  // natural-log probability, <= 0
  std::optional<double> mu;
  std::optional<double> sd;
  bool operator==(const TokenRecord&) const = default;
};

enum class ConditionKind { plain, prefixed, neighbor };

struct Condition {
  ConditionKind kind = ConditionKind::plain;
  std::string prefix_id;     // prefixed
  std::size_t neighbor = 0;  // neighbor

  static Condition plain() { return {}; }
  static Condition prefixed(std::string id) { return {ConditionKind::prefixed, std::move(id), 0}; }
  static Condition neighbor_of(std::size_t index) { return {ConditionKind::neighbor, {}, index}; }

  auto operator<=>(const Condition&) const = default;
};

// "plain", "prefixed:<id>", "neighbor:<index>"
std::string to_string(const Condition& condition);

struct Trace {
  std::string schema = "trace/1";
  std::string sample_id;
  std::string model_id;
  std::string tokenizer_id;
  Condition condition;
  std::vector<TokenRecord> tokens;
  bool operator==(const Trace&) const = default;
};

inline constexpr int kTraceMajorVersion = 1;

// ---- line-delimited I/O -----------------------------------------------------

nlohmann::ordered_json to_json(const Trace& trace);

// Validates one parsed record; `line` is used for error reporting only.
// Throws SchemaViolation(line, field).
Trace trace_from_json(const nlohmann::json& j, std::size_t line);

void write_trace(std::ostream& out, const Trace& trace);
void write_traces(std::ostream& out, const std::vector<Trace>& traces);
void write_traces(const std::filesystem::path& path, const std::vector<Trace>& traces);

// Streams records to `fn`. Blank lines are skipped but still counted; lines
// are numbered from 1. Throws SchemaViolation at the first bad line.
void for_each_trace(std::istream& in, const std::function<void(Trace&&)>& fn);
std::vector<Trace> read_traces(std::istream& in);
std::vector<Trace> read_traces(const std::filesystem::path& path);

// ---- joins ------------------------------------------------------------------

// One trace a scoring method needs per sample. An empty prefix_id for a
// prefixed requirement matches any prefix; a neighbor requirement needs at
// least `min_count` neighbor traces.
struct Requirement {
  std::string model_id;
  ConditionKind condition = ConditionKind::plain;
  std::string prefix_id;
  std::size_t min_count = 1;

  std::string describe() const;
  auto operator<=>(const Requirement&) const = default;
};

struct Gap {
  std::string sample_id;
  std::string requirement;
};

// All traces of one sample, grouped by (model_id, condition). Pointers refer
// into the trace list passed to join_traces.
struct AlignedRecord {
  std::string sample_id;
  std::map<std::pair<std::string, Condition>, const Trace*> traces;

  const Trace* find(const std::string& model_id, const Condition& condition) const;
  // Any prefixed trace of the model when prefix_id is empty (lowest id first).
  const Trace* prefixed(const std::string& model_id, const std::string& prefix_id = {}) const;
  // Neighbor traces of the model in index order.
  std::vector<const Trace*> neighbors(const std::string& model_id) const;
};

struct JoinResult {
  std::vector<AlignedRecord> records;  // gap-free samples, in sample order
  std::vector<Gap> gaps;               // in sample order, then requirement order
};

// Traces whose sample is not in `samples` are ignored. Two different traces
// for the same (sample, model, condition) make that key a gap.
JoinResult join_traces(const std::vector<CodeSample>& samples, const std::vector<Trace>& traces,
                       const std::vector<Requirement>& required);

}  // namespace memprobe
