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

#include "memprobe/scoring.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "memprobe/error.hpp"
#include "memprobe/parallel.hpp"
#include "memprobe/simd/kernels.hpp"

namespace memprobe {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ppl: return "ppl";
    case Method::zlib: return "zlib";
    case Method::mink: return "mink";
    case Method::minkpp: return "minkpp";
    case Method::ref: return "ref";
    case Method::neighbor: return "neighbor";
    case Method::recall: return "recall";
  }
  return "ppl";
}

Method method_from_string(std::string_view name) {
  for (auto m : {Method::ppl, Method::zlib, Method::mink, Method::minkpp, Method::ref,
                 Method::neighbor, Method::recall}) {
    if (name == to_string(m)) return m;
  }
  throw Error("unknown method '" + std::string(name) + "'");
}

void ScoringConfig::check() const {
  if (!(k_percent > 0.0 && k_percent <= 100.0)) throw Error("k_percent must lie in (0, 100]");
  if (neighbor_count == 0) throw Error("neighbor_count must be positive");
  if (compression_level < 0 || compression_level > 9) throw Error("compression_level must be 0..9");
  if (!(sigma_floor > 0.0)) throw Error("sigma_floor must be positive");
}

namespace {

void require_tokens(const Trace& t) {
  if (t.tokens.empty()) throw EmptyTrace("trace for '" + t.sample_id + "' has no tokens");
}

// Mean of the `count` smallest values. Values are summed in ascending order,
// so the result does not depend on token order; a run of equal values
// returns that value exactly.
double mean_of_smallest(std::vector<double> values, std::size_t count) {
  for (double& v : values)
    if (v == 0.0) v = 0.0;  // fold -0.0
  std::sort(values.begin(), values.end());
  if (values.front() == values[count - 1]) return values.front();
  const double total = simd::sum(std::span<const double>(values.data(), count));
  return total / static_cast<double>(count);
}

std::vector<double> logprobs(const Trace& t) {
  std::vector<double> out;
  out.reserve(t.tokens.size());
  for (const auto& r : t.tokens) out.push_back(r.lp);
  return out;
}

std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::size_t min_k_count(std::size_t n, double k_percent) {
  const double e = std::floor(static_cast<double>(n) * k_percent / 100.0);
  return std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(e)));
}

double score_ppl(const Trace& trace) {
  require_tokens(trace);
  return mean_of_smallest(logprobs(trace), trace.tokens.size());
}

std::size_t compressed_size(std::string_view text, int level) {
  uLongf size = compressBound(static_cast<uLong>(text.size()));
  std::vector<Bytef> buf(size);
  const int rc = compress2(buf.data(), &size, reinterpret_cast<const Bytef*>(text.data()),
                           static_cast<uLong>(text.size()), level);
  if (rc != Z_OK) throw Error("zlib compress2 failed with code " + std::to_string(rc));
  return size;
}

double score_compression(const Trace& trace, std::string_view raw_text, const ScoringConfig& cfg) {
  require_tokens(trace);
  if (raw_text.empty()) throw EmptyText("sample '" + trace.sample_id + "' has empty text");
  return score_ppl(trace) / static_cast<double>(compressed_size(raw_text, cfg.compression_level));
}

double score_min_k(const Trace& trace, double k_percent) {
  require_tokens(trace);
  return mean_of_smallest(logprobs(trace), min_k_count(trace.tokens.size(), k_percent));
}

double score_min_k_pp(const Trace& trace, double k_percent, double sigma_floor) {
  require_tokens(trace);
  const std::size_t n = trace.tokens.size();
  std::vector<double> lp(n), mu(n), sd(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = trace.tokens[i];
    if (!r.mu || !r.sd)
      throw MissingMoments("token " + std::to_string(i) + " of '" + trace.sample_id +
                           "' lacks vocabulary moments");
    lp[i] = r.lp;
    mu[i] = *r.mu;
    sd[i] = *r.sd;
  }
  simd::normalize(lp, mu, sd, sigma_floor, z);
  return mean_of_smallest(std::move(z), min_k_count(n, k_percent));
}

double score_ref(const Trace& target, const Trace& reference) {
  if (target.sample_id != reference.sample_id)
    throw SampleMismatch("target '" + target.sample_id + "' vs reference '" + reference.sample_id + "'");
  return score_ppl(target) - score_ppl(reference);
}

double score_neighbor(const Trace& trace, const std::vector<const Trace*>& neighbors) {
  if (neighbors.empty()) throw NoNeighbors("no neighbor traces for '" + trace.sample_id + "'");
  std::vector<double> means;
  means.reserve(neighbors.size());
  for (const Trace* n : neighbors) {
    if (n->model_id != trace.model_id)
      throw ConditionMismatch("neighbor model '" + n->model_id + "' differs from '" + trace.model_id + "'");
    means.push_back(score_ppl(*n));
  }
  return score_ppl(trace) - mean_of_smallest(std::move(means), neighbors.size());
}

double score_neighbor(const Trace& trace, const std::vector<Trace>& neighbors) {
  std::vector<const Trace*> ptrs;
  for (const auto& n : neighbors) ptrs.push_back(&n);
  return score_neighbor(trace, ptrs);
}

double score_recall(const Trace& plain, const Trace& prefixed, RecallVariant variant) {
  if (plain.sample_id != prefixed.sample_id)
    throw SampleMismatch("plain '" + plain.sample_id + "' vs prefixed '" + prefixed.sample_id + "'");
  if (plain.model_id != prefixed.model_id)
    throw ConditionMismatch("plain and prefixed traces come from different models");
  if (prefixed.condition.kind != ConditionKind::prefixed && !(plain == prefixed))
    throw ConditionMismatch("second trace of '" + plain.sample_id + "' is not prefixed");
  const double a = score_ppl(plain);
  const double b = score_ppl(prefixed);
  if (variant == RecallVariant::difference) return a - b;
  // loss(prefixed) / loss(plain): both losses are -ppl.
  if (a == 0.0) throw Error("ReCaLL ratio undefined: zero plain loss for '" + plain.sample_id + "'");
  return b / a;
}

// ---- batch scoring ------------------------------------------------------------

std::string ScoreRequest::label() const {
  switch (method) {
    case Method::mink: return "mink-" + format_number(cfg.k_percent);
    case Method::minkpp: return "minkpp-" + format_number(cfg.k_percent);
    case Method::recall:
      return cfg.recall_variant == RecallVariant::ratio ? "recall-ratio" : "recall";
    default: return std::string(to_string(method));
  }
}

std::vector<Requirement> ScoreRequest::requirements() const {
  std::vector<Requirement> out{{model_id, ConditionKind::plain, {}, 1}};
  if (method == Method::ref) out.push_back({reference_model_id, ConditionKind::plain, {}, 1});
  if (method == Method::neighbor) out.push_back({model_id, ConditionKind::neighbor, {}, 1});
  if (method == Method::recall) out.push_back({model_id, ConditionKind::prefixed, prefix_id, 1});
  return out;
}

namespace {

ordered_json params_of(const ScoreRequest& r) {
  ordered_json p;
  p["k_percent"] = r.cfg.k_percent;
  p["neighbor_count"] = r.cfg.neighbor_count;
  p["compression_level"] = r.cfg.compression_level;
  p["sigma_floor"] = r.cfg.sigma_floor;
  p["recall_variant"] = r.cfg.recall_variant == RecallVariant::ratio ? "ratio" : "difference";
  p["model_id"] = r.model_id;
  if (r.method == Method::ref) p["reference_model_id"] = r.reference_model_id;
  if (r.method == Method::recall && !r.prefix_id.empty()) p["prefix_id"] = r.prefix_id;
  return p;
}

}  // namespace

ordered_json to_json(const ScoreResult& r) {
  ordered_json j;
  j["sample_id"] = r.sample_id;
  j["method"] = to_string(r.method);
  j["value"] = r.value;
  j["params"] = r.params;
  return j;
}

ScoreResult score_result_from_json(const json& j) {
  ScoreResult r;
  r.sample_id = j.at("sample_id").get<std::string>();
  r.method = method_from_string(j.at("method").get<std::string>());
  r.value = j.at("value").get<double>();
  ScoreRequest req;
  req.method = r.method;
  if (j.contains("params")) {
    const json& p = j.at("params");
    r.params = ordered_json::parse(p.dump());
    req.cfg.k_percent = p.value("k_percent", req.cfg.k_percent);
    if (p.value("recall_variant", std::string("difference")) == "ratio")
      req.cfg.recall_variant = RecallVariant::ratio;
  }
  r.method_label = req.label();
  return r;
}

ScoreResult score_record(const ScoreRequest& req, const AlignedRecord& rec, const CodeSample* sample) {
  const Trace* plain = rec.find(req.model_id, Condition::plain());
  if (!plain) throw TraceGap(rec.sample_id + ": missing " + req.model_id + " plain");
  ScoreResult out;
  out.sample_id = rec.sample_id;
  out.method = req.method;
  out.method_label = req.label();
  out.params = params_of(req);
  switch (req.method) {
    case Method::ppl: out.value = score_ppl(*plain); break;
    case Method::zlib:
      if (!sample) throw EmptyText("no source text for '" + rec.sample_id + "'");
      out.value = score_compression(*plain, sample->text, req.cfg);
      break;
    case Method::mink: out.value = score_min_k(*plain, req.cfg.k_percent); break;
    case Method::minkpp: out.value = score_min_k_pp(*plain, req.cfg.k_percent, req.cfg.sigma_floor); break;
    case Method::ref: {
      const Trace* r = rec.find(req.reference_model_id, Condition::plain());
      if (!r) throw TraceGap(rec.sample_id + ": missing " + req.reference_model_id + " plain");
      out.value = score_ref(*plain, *r);
      break;
    }
    case Method::neighbor: {
      auto ns = rec.neighbors(req.model_id);
      if (ns.size() > req.cfg.neighbor_count) ns.resize(req.cfg.neighbor_count);
      out.value = score_neighbor(*plain, ns);
      break;
    }
    case Method::recall: {
      const Trace* p = rec.prefixed(req.model_id, req.prefix_id);
      if (!p) throw TraceGap(rec.sample_id + ": missing " + req.model_id + " prefixed");
      out.value = score_recall(*plain, *p, req.cfg.recall_variant);
      break;
    }
  }
  if (!std::isfinite(out.value)) throw Error("non-finite score for '" + rec.sample_id + "'");
  return out;
}

ScoreBatch score_samples(const ScoreRequest& req, const std::vector<CodeSample>& samples,
                         const std::vector<Trace>& traces, unsigned threads) {
  req.cfg.check();
  JoinResult joined = join_traces(samples, traces, req.requirements());
  std::map<std::string, const CodeSample*> by_id;
  for (const auto& s : samples) by_id.emplace(s.id, &s);
  ScoreBatch out;
  out.gaps = std::move(joined.gaps);
  out.results.resize(joined.records.size());
  parallel_for(joined.records.size(), threads, [&](std::size_t i) {
    const auto& rec = joined.records[i];
    out.results[i] = score_record(req, rec, by_id.at(rec.sample_id));
  });
  return out;
}

}  // namespace memprobe
