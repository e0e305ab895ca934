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

#include "memprobe/traces.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "memprobe/error.hpp"

namespace memprobe {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(const Condition& c) {
  switch (c.kind) {
    case ConditionKind::plain: return "plain";
    case ConditionKind::prefixed: return "prefixed:" + c.prefix_id;
    case ConditionKind::neighbor: return "neighbor:" + std::to_string(c.neighbor);
  }
  return "plain";
}

ordered_json to_json(const Trace& t) {
  ordered_json j;
  j["schema"] = t.schema;
  j["sample_id"] = t.sample_id;
  j["model_id"] = t.model_id;
  j["tokenizer_id"] = t.tokenizer_id;
  switch (t.condition.kind) {
    case ConditionKind::plain: j["condition"] = "plain"; break;
    case ConditionKind::prefixed: j["condition"] = {{"prefixed", t.condition.prefix_id}}; break;
    case ConditionKind::neighbor: j["condition"] = {{"neighbor", t.condition.neighbor}}; break;
  }
  ordered_json tokens = ordered_json::array();
  for (const auto& r : t.tokens) {
    ordered_json tok;
    tok["t"] = r.t;
    tok["lp"] = r.lp;
    if (r.mu) tok["mu"] = *r.mu;
    if (r.sd) tok["sd"] = *r.sd;
    tokens.push_back(std::move(tok));
  }
  j["tokens"] = std::move(tokens);
  return j;
}

namespace {

// Returns {major, minor}; minor is 0 when absent. Nullopt on malformed input.
std::optional<std::pair<int, int>> parse_schema(const std::string& s) {
  if (s.rfind("trace/", 0) != 0) return std::nullopt;
  const char* p = s.data() + 6;
  const char* end = s.data() + s.size();
  int major = 0, minor = 0;
  auto r = std::from_chars(p, end, major);
  if (r.ec != std::errc() || r.ptr == p) return std::nullopt;
  if (r.ptr != end) {
    if (*r.ptr != '.') return std::nullopt;
    const char* q = r.ptr + 1;
    auto r2 = std::from_chars(q, end, minor);
    if (r2.ec != std::errc() || r2.ptr != end || r2.ptr == q) return std::nullopt;
  }
  return std::make_pair(major, minor);
}

const json& field(const json& j, const char* name, std::size_t line, const std::string& path) {
  auto it = j.find(name);
  if (it == j.end()) throw SchemaViolation(line, path + name, "missing");
  return *it;
}

std::string string_field(const json& j, const char* name, std::size_t line) {
  const json& v = field(j, name, line, "");
  if (!v.is_string()) throw SchemaViolation(line, name, "expected a string");
  return v.get<std::string>();
}

double number_field(const json& v, std::size_t line, const std::string& path) {
  if (!v.is_number()) throw SchemaViolation(line, path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaViolation(line, path, "not finite");
  return d;
}

}  // namespace

Trace trace_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) throw SchemaViolation(line, "", "record is not a JSON object");
  Trace t;
  t.schema = string_field(j, "schema", line);
  const auto version = parse_schema(t.schema);
  if (!version) throw SchemaViolation(line, "schema", "malformed schema '" + t.schema + "'");
  if (version->first != kTraceMajorVersion)
    throw SchemaViolation(line, "schema", "unsupported major version '" + t.schema + "'");
  const bool strict = version->second == 0;
  static const std::set<std::string> kTop = {"schema",       "sample_id", "model_id",
                                             "tokenizer_id", "condition", "tokens"};
  static const std::set<std::string> kTok = {"t", "lp", "mu", "sd"};
  if (strict) {
    for (const auto& [k, _] : j.items())
      if (!kTop.count(k)) throw SchemaViolation(line, k, "unknown field");
  }
  t.sample_id = string_field(j, "sample_id", line);
  t.model_id = string_field(j, "model_id", line);
  t.tokenizer_id = string_field(j, "tokenizer_id", line);

  const json& c = field(j, "condition", line, "");
  if (c.is_string()) {
    if (c.get<std::string>() != "plain")
      throw SchemaViolation(line, "condition", "unknown condition '" + c.get<std::string>() + "'");
  } else if (c.is_object() && c.size() == 1 && c.contains("prefixed")) {
    const json& p = c["prefixed"];
    if (!p.is_string()) throw SchemaViolation(line, "condition.prefixed", "expected a string");
    t.condition = Condition::prefixed(p.get<std::string>());
  } else if (c.is_object() && c.size() == 1 && c.contains("neighbor")) {
    const json& n = c["neighbor"];
    if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<long long>() >= 0))
      throw SchemaViolation(line, "condition.neighbor", "expected a non-negative integer");
    t.condition = Condition::neighbor_of(n.get<std::size_t>());
  } else {
    throw SchemaViolation(line, "condition", "expected \"plain\", {\"prefixed\": id} or {\"neighbor\": n}");
  }

  const json& toks = field(j, "tokens", line, "");
  if (!toks.is_array()) throw SchemaViolation(line, "tokens", "expected an array");
  if (toks.empty()) throw SchemaViolation(line, "tokens", "empty token list");
  t.tokens.reserve(toks.size());
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const json& r = toks[i];
    const std::string path = "tokens[" + std::to_string(i) + "].";
    if (!r.is_object()) throw SchemaViolation(line, path.substr(0, path.size() - 1), "expected an object");
    if (strict) {
      for (const auto& [k, _] : r.items())
        if (!kTok.count(k)) throw SchemaViolation(line, path + k, "unknown field");
    }
    TokenRecord rec;
    const json& text = field(r, "t", line, path);
    if (!text.is_string()) throw SchemaViolation(line, path + "t", "expected a string");
    rec.t = text.get<std::string>();
    rec.lp = number_field(field(r, "lp", line, path), line, path + "lp");
    if (rec.lp > 0.0) throw SchemaViolation(line, path + "lp", "log-probability must be <= 0");
    const bool has_mu = r.contains("mu");
    const bool has_sd = r.contains("sd");
    if (has_mu != has_sd)
      throw SchemaViolation(line, path + (has_mu ? "sd" : "mu"), "mu and sd must appear together");
    if (has_mu) {
      rec.mu = number_field(r["mu"], line, path + "mu");
      rec.sd = number_field(r["sd"], line, path + "sd");
      if (*rec.sd < 0.0) throw SchemaViolation(line, path + "sd", "must be >= 0");
    }
    t.tokens.push_back(std::move(rec));
  }
  return t;
}

void write_trace(std::ostream& out, const Trace& trace) {
  out << to_json(trace).dump(-1, ' ', false, ordered_json::error_handler_t::strict) << '\n';
}

void write_traces(std::ostream& out, const std::vector<Trace>& traces) {
  for (const auto& t : traces) write_trace(out, t);
}

void write_traces(const std::filesystem::path& path, const std::vector<Trace>& traces) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_traces(out, traces);
}

void for_each_trace(std::istream& in, const std::function<void(Trace&&)>& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaViolation(number, "", std::string("invalid JSON: ") + e.what());
    }
    fn(trace_from_json(j, number));
  }
}

std::vector<Trace> read_traces(std::istream& in) {
  std::vector<Trace> out;
  for_each_trace(in, [&](Trace&& t) { out.push_back(std::move(t)); });
  return out;
}

std::vector<Trace> read_traces(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return read_traces(in);
}

// ---- joins ------------------------------------------------------------------

std::string Requirement::describe() const {
  std::string cond;
  switch (condition) {
    case ConditionKind::plain: cond = "plain"; break;
    case ConditionKind::prefixed: cond = prefix_id.empty() ? "prefixed" : "prefixed:" + prefix_id; break;
    case ConditionKind::neighbor: cond = "neighbor x" + std::to_string(min_count); break;
  }
  return model_id + " " + cond;
}

const Trace* AlignedRecord::find(const std::string& model_id, const Condition& condition) const {
  auto it = traces.find({model_id, condition});
  return it == traces.end() ? nullptr : it->second;
}

const Trace* AlignedRecord::prefixed(const std::string& model_id, const std::string& prefix_id) const {
  if (!prefix_id.empty()) return find(model_id, Condition::prefixed(prefix_id));
  for (const auto& [key, t] : traces)
    if (key.first == model_id && key.second.kind == ConditionKind::prefixed) return t;
  return nullptr;
}

std::vector<const Trace*> AlignedRecord::neighbors(const std::string& model_id) const {
  std::vector<const Trace*> out;
  for (const auto& [key, t] : traces)
    if (key.first == model_id && key.second.kind == ConditionKind::neighbor) out.push_back(t);
  return out;
}

JoinResult join_traces(const std::vector<CodeSample>& samples, const std::vector<Trace>& traces,
                       const std::vector<Requirement>& required) {
  std::map<std::string, AlignedRecord> by_sample;
  std::set<std::pair<std::string, std::pair<std::string, Condition>>> conflicts;
  for (const auto& s : samples) by_sample[s.id].sample_id = s.id;
  for (const auto& t : traces) {
    auto it = by_sample.find(t.sample_id);
    if (it == by_sample.end()) continue;
    auto key = std::make_pair(t.model_id, t.condition);
    auto [slot, inserted] = it->second.traces.emplace(key, &t);
    if (!inserted && !(*slot->second == t)) conflicts.insert({t.sample_id, key});
  }
  std::vector<Requirement> reqs = required;
  std::sort(reqs.begin(), reqs.end());
  reqs.erase(std::unique(reqs.begin(), reqs.end()), reqs.end());

  JoinResult out;
  std::set<std::string> done;
  for (const auto& s : samples) {
    if (!done.insert(s.id).second) continue;
    AlignedRecord& rec = by_sample[s.id];
    bool ok = true;
    for (const auto& c : conflicts) {
      if (c.first != s.id) continue;
      out.gaps.push_back({s.id, "conflicting traces for " + c.second.first + " " + to_string(c.second.second)});
      ok = false;
    }
    for (const auto& r : reqs) {
      bool met = false;
      switch (r.condition) {
        case ConditionKind::plain: met = rec.find(r.model_id, Condition::plain()) != nullptr; break;
        case ConditionKind::prefixed: met = rec.prefixed(r.model_id, r.prefix_id) != nullptr; break;
        case ConditionKind::neighbor: met = rec.neighbors(r.model_id).size() >= std::max<std::size_t>(1, r.min_count); break;
      }
      if (!met) {
        out.gaps.push_back({s.id, r.describe()});
        ok = false;
      }
    }
    if (ok) out.records.push_back(rec);
  }
  return out;
}

}  // namespace memprobe
