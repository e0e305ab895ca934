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
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "exec_driver.hpp"
#include "memprobe/error.hpp"
#include "memprobe/evaluator.hpp"
#include "synthetic.hpp"

using namespace memprobe;
namespace mt = memprobe::testing;

namespace {

using V = std::vector<double>;

double brute_auc(const std::vector<double>& m, const std::vector<double>& nm) {
  double s = 0;
  for (double a : m)
    for (double b : nm) s += a > b ? 1.0 : a == b ? 0.5 : 0.0;
  return s / (static_cast<double>(m.size()) * static_cast<double>(nm.size()));
}

std::vector<CodeSample> synthetic_samples(const std::string& prefix, std::size_t n, Label label) {
  std::vector<CodeSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    CodeSample s;
    s.id = prefix + std::to_string(i);
    s.text = "def f" + std::to_string(i) + "():\n    return " + std::to_string(i);
    s.label = label;
    s.token_count = 100 + (i * 37) % 500;
    out.push_back(s);
  }
  return out;
}

ScoreRequest ppl_request() {
  ScoreRequest r;
  r.method = Method::ppl;
  r.model_id = "m";
  return r;
}

// Members score -1 per token, everything else -3.
TraceProvider leveled_provider(const std::vector<CodeSample>& members) {
  std::set<std::string> ids;
  for (const auto& s : members) ids.insert(s.id);
  return [ids](const std::vector<CodeSample>& samples, const std::vector<Requirement>&) {
    std::vector<Trace> out;
    for (const auto& s : samples) out.push_back(mt::flat_trace(s.id, 4, ids.count(s.id) ? -1.0 : -3.0));
    return out;
  };
}

// Token logprobs depend only on the sample id.
std::vector<Trace> random_traces(const std::vector<CodeSample>& samples, const std::vector<Requirement>&) {
  std::vector<Trace> out;
  for (const auto& s : samples) {
    Rng rng(derive_seed(17, s.id));
    Trace t = mt::random_trace(rng, s.id, 3 + rng.below(20), true);
    t.condition = Condition::plain();
    out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("auc examples") {
  CHECK(auc(V{0.9, 0.8}, V{0.1, 0.2}) == 1.0);
  CHECK(auc(V{0.1, 0.2}, V{0.9, 0.8}) == 0.0);
  CHECK(auc(V{0.5}, V{0.5}) == 0.5);
  CHECK(auc(V{3, 1}, V{2, 0}) == 0.75);
  CHECK(twice_mann_whitney(V{3, 1}, V{2, 0}) == 6);
  CHECK(auc(V{1, 2, 3}, std::vector<Label>{Label::non_member, Label::member, Label::member}) == 1.0);
  CHECK_THROWS_AS(auc(V{}, V{1.0}), OneClassOnly);
  CHECK_THROWS_AS(auc(V{1.0}, V{}), OneClassOnly);
  CHECK_THROWS_AS(auc(V{1.0, 2.0}, std::vector<Label>{Label::member, Label::member}), OneClassOnly);
}

TEST_CASE("auc matches brute force and is rank-based") {
  Rng rng(99);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 2 + rng.below(200);
    std::vector<double> m, nm;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = static_cast<double>(rng.below(20)) / 4.0 - 2.0;  // plenty of ties
      (i == 0 ? m : i == 1 ? nm : rng.coin() ? m : nm).push_back(v);
    }
    const double a = auc(m, nm);
    CHECK(std::abs(a - brute_auc(m, nm)) <= 1e-12);
    CHECK(a + auc(nm, m) == 1.0);
    auto map = [](std::vector<double> v, auto f) {
      for (auto& x : v) x = f(x);
      return v;
    };
    CHECK(auc(map(m, [](double x) { return std::exp(x); }), map(nm, [](double x) { return std::exp(x); })) == a);
    CHECK(auc(map(m, [](double x) { return 3 * x + 7; }), map(nm, [](double x) { return 3 * x + 7; })) == a);
    CHECK(auc(map(m, [](double x) { return x * x * x; }), map(nm, [](double x) { return x * x * x; })) == a);
  }
}

TEST_CASE("ngram_overlap") {
  std::vector<CodeSample> corpus(1);
  corpus[0].text = "a b c d";
  CHECK(ngram_overlap("b c", corpus, 2) == 1.0);
  CHECK(ngram_overlap("x y z", corpus, 2) == 0.0);
  corpus[0].text = "a b";
  CHECK(ngram_overlap("a b c", corpus, 2) == 0.5);
  CHECK(ngram_overlap("a", corpus, 2) == 0.0);
  CHECK(ngram_overlap("a b a b", corpus, 2) == doctest::Approx(0.5));  // distinct: "a b", "b a"
  CHECK_THROWS_AS(ngram_overlap("a", corpus, 0), Error);
  CHECK_THROWS_AS(ngram_overlap("a", corpus, 9), Error);
}

TEST_CASE("run_experiment separates leveled members") {
  ExperimentConfig cfg;
  cfg.members = synthetic_samples("m", 30, Label::member);
  cfg.non_members = synthetic_samples("n", 30, Label::non_member);
  cfg.methods = {ppl_request()};
  cfg.settings = {SettingSpec{SettingId::s3, MutationSpec{}, {}, {}, 0}};
  const auto reports = run_experiment(cfg, leveled_provider(cfg.members));
  REQUIRE(reports.size() == 1);
  REQUIRE(reports[0].methods.size() == 1);
  const auto& m = reports[0].methods[0];
  CHECK(m.per_seed == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  CHECK(m.mean == 1.0);
  CHECK(reports[0].seeds == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(reports[0].n_members == std::vector<std::size_t>{30, 30, 30, 30});
  CHECK(setting_key(reports[0].setting) == "s3/none");
}

TEST_CASE("random scores give chance AUC") {
  ExperimentConfig cfg;
  cfg.members = synthetic_samples("m", 1000, Label::member);
  cfg.non_members = synthetic_samples("n", 1000, Label::non_member);
  ScoreRequest mink = ppl_request();
  mink.method = Method::mink;
  cfg.methods = {ppl_request(), mink};
  cfg.settings = {SettingSpec{SettingId::s3, MutationSpec{}, {}, {}, 0}};
  cfg.seeds = {0};
  const auto reports = run_experiment(cfg, random_traces);
  for (const auto& m : reports.at(0).methods) {
    INFO(m.method);
    CHECK(std::abs(m.mean - 0.5) <= 0.03);
  }
}

TEST_CASE("missing traces are reported") {
  ExperimentConfig cfg;
  cfg.members = synthetic_samples("m", 5, Label::member);
  cfg.non_members = synthetic_samples("n", 5, Label::non_member);
  cfg.methods = {ppl_request()};
  cfg.settings = {SettingSpec{SettingId::s3, MutationSpec{}, {}, {}, 0}};
  auto full = leveled_provider(cfg.members);
  TraceProvider holey = [&](const std::vector<CodeSample>& s, const std::vector<Requirement>& r) {
    auto t = full(s, r);
    t.erase(std::remove_if(t.begin(), t.end(), [](const Trace& x) { return x.sample_id == "n3"; }), t.end());
    return t;
  };
  try {
    run_experiment(cfg, holey);
    FAIL("expected a trace gap");
  } catch (const TraceGap& e) {
    CHECK(std::string(e.what()).find("'n3'") != std::string::npos);
  }
  cfg.allow_gaps = true;
  const auto reports = run_experiment(cfg, holey);
  CHECK(reports[0].excluded_for_gaps == 4);
  CHECK(reports[0].methods[0].mean == 1.0);
}

TEST_CASE("experiments are reproducible across runs and thread counts") {
  std::vector<CodeSample> pool;
  for (const auto& f : mt::fixture_functions(Language::python)) pool.push_back(f.sample);
  ExperimentConfig cfg;
  cfg.members.assign(pool.begin(), pool.begin() + 20);
  cfg.non_members.assign(pool.begin() + 20, pool.begin() + 50);
  for (auto& s : cfg.non_members) s.label = Label::non_member;
  ScoreRequest pp = ppl_request();
  pp.method = Method::minkpp;
  cfg.methods = {ppl_request(), pp};
  cfg.settings = {SettingSpec{SettingId::s1, MutationSpec{MutationKind::t2b, std::nullopt, 0}, {}, {}, 0},
                  SettingSpec{SettingId::s2, std::nullopt, CloneLevel{CloneKind::type3, 0.7}, {}, 0}};
  cfg.prefix.enabled = true;
  cfg.seeds = {0, 1};
  auto dump = [&](unsigned threads) {
    cfg.threads = threads;
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    for (const auto& r : run_experiment(cfg, random_traces)) all.push_back(to_json(r));
    return all.dump();
  };
  const std::string one = dump(1);
  CHECK(one == dump(1));
  CHECK(one == dump(5));

  // Reports survive their JSON form.
  const auto back = eval_report_from_json(nlohmann::json::parse(one)[1]);
  CHECK(to_json(back).dump() == nlohmann::ordered_json::parse(one)[1].dump());
}

TEST_CASE("evaluate_scores breaks down by clone group and bucket") {
  std::vector<CodeSample> pool;
  for (const auto& f : mt::fixture_functions(Language::python)) pool.push_back(f.sample);
  std::vector<CodeSample> dm(pool.begin(), pool.begin() + 4), dnm(pool.begin() + 4, pool.begin() + 8);
  for (auto& s : dnm) s.label = Label::non_member;
  const auto set = build_setting2(dm, dnm, {CloneKind::type2, 0}, 3, {0.5});
  std::vector<ScoreResult> scores;
  for (const auto* side : {&set.members, &set.non_members})
    for (const auto& s : *side) {
      if (s.id == set.non_members.back().id) continue;  // one missing score
      ScoreResult r;
      r.sample_id = s.id;
      r.method_label = "ppl";
      r.params["model_id"] = "m";
      r.value = side == &set.members ? 1.0 : 0.0;
      scores.push_back(r);
    }
  const auto rep = evaluate_scores(set, scores, {{0, 100000}}, "demo");
  CHECK(rep.excluded_for_gaps == 1);
  REQUIRE(rep.methods.size() == 1);
  const auto& m = rep.methods[0];
  CHECK(m.model_id == "m");
  CHECK(m.mean == 1.0);
  CHECK(m.by_clone.size() == 3);
  CHECK(m.by_clone.count("original"));
  CHECK(m.by_clone.count("t1"));
  CHECK(m.by_clone.count("t2a"));
  CHECK(m.by_bucket.at("0-100000") == std::vector<std::optional<double>>{1.0});

  CHECK(clone_group(dm[0]) == "original");
  CHECK(setting_key(set.provenance) == "s2/type2");
}

TEST_CASE("report tables") {
  CHECK(report_csv({}) == "report,setting,model,method,seeds,auc_per_seed,auc_mean,n_members,n_non_members\n");

  EvalReport a;
  a.name = "r";
  a.setting = SettingSpec{SettingId::s1, MutationSpec{MutationKind::t2a, std::nullopt, 0}, {}, {}, 0};
  a.seeds = {0, 1};
  a.n_members = {10, 10};
  a.n_non_members = {12, 12};
  MethodReport m;
  m.model_id = "m";
  m.method = "ppl";
  m.per_seed = {0.75, 0.25};
  m.mean = 0.5;
  m.by_bucket["100-200"] = {0.5, std::nullopt};
  a.methods = {m};
  EvalReport b = a;
  b.setting.mutation->kind = MutationKind::t2b;
  b.methods[0].mean = 0.375;

  const std::string csv = report_csv({a, b});
  CHECK(csv ==
        "report,setting,model,method,seeds,auc_per_seed,auc_mean,n_members,n_non_members\n"
        "r,s1/t2a,m,ppl,0;1,0.750000;0.250000,0.500000,10;10,12;12\n"
        "r,s1/t2b,m,ppl,0;1,0.750000;0.250000,0.375000,10;10,12;12\n");

  const auto j = report_json({a, b});
  CHECK(j["rows"].size() == 2);
  REQUIRE(j["series"]["t2_drop"].size() == 1);
  CHECK(j["series"]["t2_drop"][0]["drop"].get<double>() == 0.125);
  CHECK(j["series"]["length_buckets"][0]["points"][0]["auc_mean"].get<double>() == 0.5);

  const auto back = eval_report_from_json(nlohmann::json::parse(to_json(a).dump()));
  CHECK(to_json(back).dump() == to_json(a).dump());
}
