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

#include "memprobe/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>

#include "memprobe/error.hpp"
#include "memprobe/syntax/lexer.hpp"

namespace memprobe {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---- AUC ----------------------------------------------------------------------

std::uint64_t twice_mann_whitney(const std::vector<double>& members, const std::vector<double>& non_members) {
  std::vector<double> sorted = non_members;
  for (double v : sorted)
    if (std::isnan(v)) throw Error("NaN score");
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t u2 = 0;
  for (double v : members) {
    if (std::isnan(v)) throw Error("NaN score");
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
    const auto hi = std::upper_bound(lo, sorted.end(), v);
    u2 += 2 * static_cast<std::uint64_t>(lo - sorted.begin()) + static_cast<std::uint64_t>(hi - lo);
  }
  return u2;
}

double auc(const std::vector<double>& members, const std::vector<double>& non_members) {
  if (members.empty() || non_members.empty())
    throw OneClassOnly("AUC needs at least one member and one non-member (have " + std::to_string(members.size()) +
                       " and " + std::to_string(non_members.size()) + ")");
  const std::uint64_t u2 = twice_mann_whitney(members, non_members);
  const std::uint64_t total = 2 * static_cast<std::uint64_t>(members.size()) * non_members.size();
  // Round the smaller side only, so swapping the classes gives exactly 1 - auc.
  if (2 * u2 <= total) return static_cast<double>(u2) / static_cast<double>(total);
  return 1.0 - static_cast<double>(total - u2) / static_cast<double>(total);
}

double auc(const std::vector<double>& values, const std::vector<Label>& labels) {
  if (values.size() != labels.size()) throw Error("scores and labels differ in length");
  std::vector<double> m, nm;
  for (std::size_t i = 0; i < values.size(); ++i) (labels[i] == Label::member ? m : nm).push_back(values[i]);
  return auc(m, nm);
}

// ---- n-gram overlap ---------------------------------------------------------

namespace {

std::vector<std::string> ngrams(std::string_view text, std::size_t n) {
  const auto toks = syntax::fallback_tokenize(text);
  std::vector<std::string> out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string g;
    for (std::size_t k = 0; k < n; ++k) {
      if (k) g += '\x1f';
      g += toks[i + k];
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

double ngram_overlap(std::string_view prefix_text, const std::vector<CodeSample>& corpus, std::size_t n) {
  if (n < 1 || n > 8) throw Error("n-gram size must be in [1, 8]");
  const auto grams = ngrams(prefix_text, n);
  std::set<std::string> wanted(grams.begin(), grams.end());
  if (wanted.empty()) return 0.0;
  std::set<std::string> found;
  for (const auto& s : corpus)
    for (auto& g : ngrams(s.text, n))
      if (wanted.count(g)) found.insert(std::move(g));
  return static_cast<double>(found.size()) / static_cast<double>(wanted.size());
}

// ---- reports ------------------------------------------------------------------

namespace {

std::string format_g(double v, const char* fmt = "%g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string mutation_key(const MutationSpec& m) {
  std::string k(to_string(m.kind));
  if (m.target_similarity && m.kind == MutationKind::t3) k += "@" + format_g(*m.target_similarity);
  return k;
}

struct MethodKey {
  std::string model_id;
  std::string method;
  auto operator<=>(const MethodKey&) const = default;
};

std::optional<double> auc_or_none(const std::vector<double>& m, const std::vector<double>& nm) {
  if (m.empty() || nm.empty()) return std::nullopt;
  return auc(m, nm);
}

// One seed of one method.
MethodReport seed_report(const MethodKey& key, const LabeledEvalSet& set,
                         const std::map<std::string, double>& value_of, const std::vector<LengthBucket>& buckets,
                         std::size_t* excluded) {
  std::vector<double> m, nm;
  std::map<std::string, std::vector<double>> bm, bnm, groups;
  auto bucket_of = [&](const CodeSample& s) -> const LengthBucket* {
    for (const auto& b : buckets)
      if (b.contains(s.token_count)) return &b;
    return nullptr;
  };
  for (const auto* side : {&set.members, &set.non_members}) {
    const bool member = side == &set.members;
    for (const auto& s : *side) {
      const auto it = value_of.find(s.id);
      if (it == value_of.end()) {
        ++*excluded;
        continue;
      }
      (member ? m : nm).push_back(it->second);
      if (const auto* b = bucket_of(s)) (member ? bm : bnm)[to_string(*b)].push_back(it->second);
      if (member) groups[clone_group(s)].push_back(it->second);
    }
  }
  MethodReport r;
  r.model_id = key.model_id;
  r.method = key.method;
  r.per_seed = {auc(m, nm)};
  r.mean = r.per_seed[0];
  for (const auto& b : buckets) r.by_bucket[to_string(b)] = {auc_or_none(bm[to_string(b)], bnm[to_string(b)])};
  for (const auto& [g, values] : groups) r.by_clone[g] = {auc_or_none(values, nm)};
  return r;
}

std::vector<MethodKey> method_keys(const std::vector<ScoreResult>& scores) {
  std::vector<MethodKey> keys;
  std::set<MethodKey> seen;
  for (const auto& s : scores) {
    MethodKey k{s.params.contains("model_id") ? s.params["model_id"].get<std::string>() : std::string(),
                s.method_label};
    if (seen.insert(k).second) keys.push_back(k);
  }
  return keys;
}

EvalReport evaluate_one(const LabeledEvalSet& set, const std::vector<ScoreResult>& scores,
                        const std::vector<MethodKey>& keys, const std::vector<LengthBucket>& buckets) {
  EvalReport rep;
  rep.setting = set.provenance;
  rep.seeds = {set.provenance.seed};
  rep.n_members = {set.members.size()};
  rep.n_non_members = {set.non_members.size()};
  std::map<MethodKey, std::map<std::string, double>> values;
  for (const auto& s : scores) {
    MethodKey k{s.params.contains("model_id") ? s.params["model_id"].get<std::string>() : std::string(),
                s.method_label};
    if (!values[k].emplace(s.sample_id, s.value).second)
      throw Error("two scores for '" + s.sample_id + "' under " + k.method);
  }
  for (const auto& k : keys) rep.methods.push_back(seed_report(k, set, values[k], buckets, &rep.excluded_for_gaps));
  return rep;
}

// Appends `next` (one seed) to `acc`, padding breakdown keys absent on
// either side with nullopt.
void merge_seed(EvalReport& acc, const EvalReport& next) {
  const std::size_t before = acc.seeds.size();
  acc.seeds.push_back(next.seeds.at(0));
  acc.n_members.push_back(next.n_members.at(0));
  acc.n_non_members.push_back(next.n_non_members.at(0));
  acc.excluded_for_gaps += next.excluded_for_gaps;
  auto merge_map = [&](auto& into, const auto& from) {
    for (auto& [k, v] : into) v.push_back(from.count(k) ? from.at(k).at(0) : std::nullopt);
    for (const auto& [k, v] : from)
      if (!into.count(k)) {
        std::vector<std::optional<double>> padded(before, std::nullopt);
        padded.push_back(v.at(0));
        into[k] = std::move(padded);
      }
  };
  for (std::size_t i = 0; i < acc.methods.size(); ++i) {
    auto& a = acc.methods[i];
    const auto& b = next.methods.at(i);
    a.per_seed.push_back(b.per_seed.at(0));
    merge_map(a.by_bucket, b.by_bucket);
    merge_map(a.by_clone, b.by_clone);
  }
}

void finish_means(EvalReport& rep) {
  for (auto& m : rep.methods) {
    double sum = 0.0;
    for (double v : m.per_seed) sum += v;
    m.mean = m.per_seed.empty() ? 0.0 : sum / static_cast<double>(m.per_seed.size());
  }
}

}  // namespace

std::string setting_key(const SettingSpec& spec) {
  std::string k(to_string(spec.setting));
  if (spec.setting == SettingId::s2 && spec.clone_level) return k + "/" + to_string(*spec.clone_level);
  if (spec.mutation) return k + "/" + mutation_key(*spec.mutation);
  return k;
}

std::string clone_group(const CodeSample& sample) {
  if (!sample.mutation) return "original";
  return mutation_key(sample.mutation->spec);
}

EvalReport evaluate_scores(const LabeledEvalSet& set, const std::vector<ScoreResult>& scores,
                           const std::vector<LengthBucket>& buckets, std::string name) {
  EvalReport rep = evaluate_one(set, scores, method_keys(scores), buckets);
  rep.name = std::move(name);
  return rep;
}

// ---- experiments ----------------------------------------------------------------

TraceProvider file_trace_provider(const std::vector<fs::path>& files) {
  auto store = std::make_shared<std::vector<Trace>>();
  for (const auto& f : files) {
    auto t = read_traces(f);
    std::move(t.begin(), t.end(), std::back_inserter(*store));
  }
  auto index = std::make_shared<std::unordered_map<std::string, std::vector<std::size_t>>>();
  for (std::size_t i = 0; i < store->size(); ++i) (*index)[(*store)[i].sample_id].push_back(i);
  return [store, index](const std::vector<CodeSample>& samples, const std::vector<Requirement>&) {
    std::vector<Trace> out;
    for (const auto& s : samples)
      if (auto it = index->find(s.id); it != index->end())
        for (std::size_t i : it->second) out.push_back((*store)[i]);
    return out;
  };
}

ScoreRequest score_request_from_json(const json& j) {
  try {
    ScoreRequest r;
    r.method = method_from_string(j.at("method").get<std::string>());
    r.model_id = j.at("model").get<std::string>();
    r.reference_model_id = j.value("reference", std::string());
    r.cfg.k_percent = j.value("k", r.cfg.k_percent);
    r.cfg.neighbor_count = j.value("neighbors", r.cfg.neighbor_count);
    r.cfg.compression_level = j.value("compression_level", r.cfg.compression_level);
    r.cfg.sigma_floor = j.value("sigma_floor", r.cfg.sigma_floor);
    const std::string variant = j.value("recall_variant", std::string("difference"));
    if (variant != "difference" && variant != "ratio") throw Error("recall_variant must be difference or ratio");
    r.cfg.recall_variant = variant == "ratio" ? RecallVariant::ratio : RecallVariant::difference;
    r.cfg.check();
    if (r.method == Method::ref && r.reference_model_id.empty()) throw Error("ref needs a reference model");
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("method: ") + e.what());
  }
}

ExperimentConfig experiment_from_json(const json& j, const fs::path& base_dir, std::vector<fs::path>* trace_files) {
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };
  try {
    ExperimentConfig c;
    c.name = j.value("name", c.name);
    c.members = read_manifest(resolve(j.at("members").get<std::string>())).samples;
    c.non_members = read_manifest(resolve(j.at("non_members").get<std::string>())).samples;
    for (const auto& m : j.at("methods")) c.methods.push_back(score_request_from_json(m));
    for (const auto& s : j.at("settings")) c.settings.push_back(setting_spec_from_json(s));
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("prefix")) {
      const auto& p = j.at("prefix");
      c.prefix.enabled = true;
      c.prefix.count = p.value("count", c.prefix.count);
      const std::string source = p.value("source", std::string("id"));
      if (source == "ood") {
        c.prefix.out_of_domain = true;
        c.ood_prefix_pool = read_manifest(resolve(p.at("manifest").get<std::string>())).samples;
      } else if (source != "id") {
        throw Error("prefix source must be id or ood");
      }
    }
    if (j.contains("buckets")) {
      c.buckets.clear();
      for (const auto& b : j.at("buckets")) c.buckets.push_back({b.at(0).get<std::size_t>(), b.at(1).get<std::size_t>()});
      assign_buckets({}, c.buckets);  // validates
    }
    c.allow_gaps = j.value("allow_gaps", false);
    c.threads = j.value("threads", 1u);
    if (trace_files && j.contains("traces"))
      for (const auto& t : j.at("traces")) trace_files->push_back(resolve(t.get<std::string>()));
    return c;
  } catch (const json::exception& e) {
    throw Error(std::string("experiment config: ") + e.what());
  }
}

std::vector<EvalReport> run_experiment(const ExperimentConfig& config, const TraceProvider& provider) {
  if (config.seeds.empty()) throw Error("experiment needs at least one seed");
  if (config.methods.empty()) throw Error("experiment needs at least one method");
  const bool needs_prefix = std::any_of(config.methods.begin(), config.methods.end(),
                                        [](const ScoreRequest& r) { return r.method == Method::recall; });
  if (needs_prefix && !config.prefix.enabled) throw Error("recall needs a prefix policy");
  std::vector<MethodKey> keys;
  for (const auto& r : config.methods) keys.push_back({r.model_id, r.label()});
  {
    std::set<MethodKey> unique(keys.begin(), keys.end());
    if (unique.size() != keys.size()) throw Error("a method is configured twice");
  }

  std::vector<EvalReport> reports;
  for (const auto& base : config.settings) {
    EvalReport acc;
    for (std::uint64_t seed : config.seeds) {
      SettingSpec spec = base;
      spec.seed = seed;
      if (spec.mutation) spec.mutation->seed = seed;

      std::optional<PrefixBundle> bundle;
      if (config.prefix.enabled)
        bundle = sample_prefixes(config.prefix.out_of_domain ? config.ood_prefix_pool : config.non_members,
                                 config.prefix.count, seed);
      const LabeledEvalSet set = build_setting(spec, config.members, config.non_members, config.threads,
                                               bundle ? bundle->excluded_ids : std::vector<std::string>{});
      std::vector<CodeSample> samples = set.members;
      samples.insert(samples.end(), set.non_members.begin(), set.non_members.end());

      std::vector<ScoreRequest> requests = config.methods;
      std::vector<Requirement> required;
      for (auto& r : requests) {
        if (r.method == Method::recall) r.prefix_id = bundle->prefix_id;
        for (auto& q : r.requirements())
          if (std::find(required.begin(), required.end(), q) == required.end()) required.push_back(q);
      }
      const std::vector<Trace> traces = provider(samples, required);

      std::vector<ScoreResult> results;
      for (const auto& r : requests) {
        ScoreBatch batch = score_samples(r, samples, traces, config.threads);
        if (!batch.gaps.empty() && !config.allow_gaps)
          throw TraceGap(setting_key(spec) + " seed " + std::to_string(seed) + ": " +
                         std::to_string(batch.gaps.size()) + " gap(s) for " + r.label() + ", first '" +
                         batch.gaps[0].sample_id + "' missing " + batch.gaps[0].requirement);
        std::move(batch.results.begin(), batch.results.end(), std::back_inserter(results));
      }
      EvalReport one = evaluate_one(set, results, keys, config.buckets);
      if (acc.seeds.empty()) {
        acc = std::move(one);
        acc.name = config.name;
      } else {
        merge_seed(acc, one);
      }
    }
    finish_means(acc);
    reports.push_back(std::move(acc));
  }
  return reports;
}

// ---- rendering ------------------------------------------------------------------

namespace {

ojson optional_list(const std::vector<std::optional<double>>& v) {
  ojson a = ojson::array();
  for (const auto& x : v) a.push_back(x ? ojson(*x) : ojson(nullptr));
  return a;
}

std::vector<std::optional<double>> optional_list_from(const json& j) {
  std::vector<std::optional<double>> out;
  for (const auto& x : j) out.push_back(x.is_null() ? std::nullopt : std::optional<double>(x.get<double>()));
  return out;
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& x : v)
    if (x) {
      sum += *x;
      ++n;
    }
  if (!n) return std::nullopt;
  return sum / static_cast<double>(n);
}

template <typename T>
std::string joined(const std::vector<T>& v, const char* fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    if constexpr (std::is_floating_point_v<T>)
      out += format_g(v[i], fmt);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ojson to_json(const EvalReport& r) {
  ojson j;
  j["schema"] = "report/1";
  j["name"] = r.name;
  j["setting_key"] = setting_key(r.setting);
  j["setting"] = to_json(r.setting);
  j["seeds"] = r.seeds;
  j["n_members"] = r.n_members;
  j["n_non_members"] = r.n_non_members;
  j["excluded_for_gaps"] = r.excluded_for_gaps;
  j["methods"] = ojson::array();
  for (const auto& m : r.methods) {
    ojson e;
    e["model_id"] = m.model_id;
    e["method"] = m.method;
    e["auc_per_seed"] = m.per_seed;
    e["auc_mean"] = m.mean;
    e["by_bucket"] = ojson::object();
    for (const auto& [k, v] : m.by_bucket) e["by_bucket"][k] = optional_list(v);
    e["by_clone"] = ojson::object();
    for (const auto& [k, v] : m.by_clone) e["by_clone"][k] = optional_list(v);
    j["methods"].push_back(std::move(e));
  }
  return j;
}

EvalReport eval_report_from_json(const json& j) {
  try {
    EvalReport r;
    r.name = j.value("name", std::string());
    r.setting = setting_spec_from_json(j.at("setting"));
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.n_members = j.at("n_members").get<std::vector<std::size_t>>();
    r.n_non_members = j.at("n_non_members").get<std::vector<std::size_t>>();
    r.excluded_for_gaps = j.value("excluded_for_gaps", std::size_t{0});
    for (const auto& e : j.at("methods")) {
      MethodReport m;
      m.model_id = e.at("model_id").get<std::string>();
      m.method = e.at("method").get<std::string>();
      m.per_seed = e.at("auc_per_seed").get<std::vector<double>>();
      m.mean = e.at("auc_mean").get<double>();
      const json by_bucket = e.value("by_bucket", json::object()), by_clone = e.value("by_clone", json::object());
      for (const auto& [k, v] : by_bucket.items()) m.by_bucket[k] = optional_list_from(v);
      for (const auto& [k, v] : by_clone.items()) m.by_clone[k] = optional_list_from(v);
      r.methods.push_back(std::move(m));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("report: ") + e.what());
  }
}

std::vector<EvalReport> read_reports(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  std::vector<EvalReport> out;
  if (j.is_array()) {
    for (const auto& r : j) out.push_back(eval_report_from_json(r));
  } else if (j.contains("reports")) {
    for (const auto& r : j.at("reports")) out.push_back(eval_report_from_json(r));
  } else {
    out.push_back(eval_report_from_json(j));
  }
  return out;
}

std::string report_csv(const std::vector<EvalReport>& reports) {
  std::string out = "report,setting,model,method,seeds,auc_per_seed,auc_mean,n_members,n_non_members\n";
  for (const auto& r : reports)
    for (const auto& m : r.methods) {
      out += csv_field(r.name) + ',' + csv_field(setting_key(r.setting)) + ',' + csv_field(m.model_id) + ',' +
             csv_field(m.method) + ',' + joined(r.seeds, "") + ',' + joined(m.per_seed, "%.6f") + ',' +
             format_g(m.mean, "%.6f") + ',' + joined(r.n_members, "") + ',' + joined(r.n_non_members, "") + '\n';
    }
  return out;
}

ojson report_json(const std::vector<EvalReport>& reports) {
  ojson j;
  j["schema"] = "tables/1";
  j["rows"] = ojson::array();
  ojson curves = ojson::array();
  for (const auto& r : reports)
    for (const auto& m : r.methods) {
      ojson row;
      row["report"] = r.name;
      row["setting"] = setting_key(r.setting);
      row["model"] = m.model_id;
      row["method"] = m.method;
      row["seeds"] = r.seeds;
      row["auc_per_seed"] = m.per_seed;
      row["auc_mean"] = m.mean;
      row["n_members"] = r.n_members;
      row["n_non_members"] = r.n_non_members;
      j["rows"].push_back(std::move(row));

      ojson curve;
      curve["report"] = r.name;
      curve["setting"] = setting_key(r.setting);
      curve["model"] = m.model_id;
      curve["method"] = m.method;
      curve["points"] = ojson::array();
      for (const auto& [bucket, values] : m.by_bucket) {
        const auto mean = mean_of(values);
        curve["points"].push_back({{"bucket", bucket}, {"auc_mean", mean ? ojson(*mean) : ojson(nullptr)}});
      }
      curves.push_back(std::move(curve));
    }

  // T2a -> T2b drop, paired within the same setting id, model and method.
  ojson drops = ojson::array();
  for (const auto& a : reports) {
    if (!a.setting.mutation || a.setting.mutation->kind != MutationKind::t2a) continue;
    for (const auto& b : reports) {
      if (!b.setting.mutation || b.setting.mutation->kind != MutationKind::t2b || b.setting.setting != a.setting.setting)
        continue;
      for (const auto& ma : a.methods)
        for (const auto& mb : b.methods)
          if (ma.model_id == mb.model_id && ma.method == mb.method)
            drops.push_back({{"setting", std::string(to_string(a.setting.setting))},
                             {"model", ma.model_id},
                             {"method", ma.method},
                             {"auc_t2a", ma.mean},
                             {"auc_t2b", mb.mean},
                             {"drop", ma.mean - mb.mean}});
    }
  }
  j["series"]["length_buckets"] = std::move(curves);
  j["series"]["t2_drop"] = std::move(drops);
  return j;
}

}  // namespace memprobe
