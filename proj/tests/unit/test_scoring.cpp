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
#include <cstring>
#include <numeric>

#include "doctest.h"
#include "memprobe/error.hpp"
#include "memprobe/scoring.hpp"
#include "memprobe/simd/kernels.hpp"
#include "synthetic.hpp"

using namespace memprobe;
namespace mt = memprobe::testing;

namespace {

// Naive oracles: plain left-to-right arithmetic, no shared code.
double naive_mean(std::vector<double> v) {
  long double s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / v.size());
}

double naive_min_k(const Trace& t, double k) {
  std::vector<double> v;
  for (const auto& r : t.tokens) v.push_back(r.lp);
  std::sort(v.begin(), v.end());
  std::size_t n = static_cast<std::size_t>(std::floor(v.size() * k / 100.0));
  if (n < 1) n = 1;
  v.resize(n);
  return naive_mean(v);
}

double naive_min_k_pp(const Trace& t, double k, double floor) {
  std::vector<double> z;
  for (const auto& r : t.tokens) z.push_back((r.lp - *r.mu) / std::max(*r.sd, floor));
  std::sort(z.begin(), z.end());
  std::size_t n = static_cast<std::size_t>(std::floor(z.size() * k / 100.0));
  if (n < 1) n = 1;
  z.resize(n);
  return naive_mean(z);
}

Trace trace_of(std::vector<double> lps, const std::string& id = "s") {
  Trace t;
  t.sample_id = id;
  t.model_id = "m";
  for (double lp : lps) t.tokens.push_back({"x", lp, std::nullopt, std::nullopt});
  return t;
}

}  // namespace

TEST_CASE("scores match naive oracles") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Trace t = mt::random_trace(rng, "s", 1 + rng.below(300), true);
    CHECK(score_ppl(t) == doctest::Approx(naive_mean([&] {
            std::vector<double> v;
            for (const auto& r : t.tokens) v.push_back(r.lp);
            return v;
          }())).epsilon(1e-12));
    for (double k : {10.0, 20.0, 50.0, 100.0}) {
      CHECK(score_min_k(t, k) == doctest::Approx(naive_min_k(t, k)).epsilon(1e-12));
      CHECK(score_min_k_pp(t, k) == doctest::Approx(naive_min_k_pp(t, k, 1e-6)).epsilon(1e-12));
    }
  }
}

TEST_CASE("worked examples") {
  const Trace t = trace_of({-1.0, -2.0, -3.0, -4.0, -10.0});
  CHECK(score_ppl(t) == -4.0);
  CHECK(score_min_k(t, 20) == -10.0);
  CHECK(score_min_k(t, 40) == -7.0);
  CHECK(min_k_count(5, 10) == 1);
  CHECK(min_k_count(10, 25) == 2);
  CHECK(min_k_count(3, 100) == 3);

  const Trace r = trace_of({-2.0, -2.0, -2.0, -2.0, -2.0});
  CHECK(score_ref(t, r) == -2.0);
  CHECK(score_neighbor(t, std::vector<Trace>{r, trace_of({-6.0})}) == -4.0 - (-4.0));
  Trace p = trace_of({-1.0, -1.0, -1.0, -1.0, -1.0});
  p.condition = Condition::prefixed("p");
  CHECK(score_recall(t, p) == -3.0);
  CHECK(score_recall(t, p, RecallVariant::ratio) == 0.25);

  Trace mm = trace_of({-1.0, -3.0});
  mm.tokens[0].mu = -2.0;
  mm.tokens[0].sd = 0.5;
  mm.tokens[1].mu = -1.0;
  mm.tokens[1].sd = 0.0;  // floored
  CHECK(score_min_k_pp(mm, 50, 1e-6) == (-3.0 + 1.0) / 1e-6);
  CHECK(score_min_k_pp(mm, 100, 1.0) == (1.0 + -2.0) / 2);  // sd 0.5 floored to 1
}

TEST_CASE("compression oracle") {
  // Stored (level 0) zlib streams: 2-byte header, 5 bytes per block, 4-byte Adler-32.
  for (std::size_t n : {1u, 10u, 1000u, 65535u, 65536u, 200000u}) {
    const std::string text(n, 'q');
    const std::size_t blocks = (n + 65534) / 65535;
    CHECK(compressed_size(text, 0) == n + 5 * blocks + 6);
  }
  CHECK(compressed_size(std::string(10000, 'a'), 9) < 100);
  ScoringConfig cfg;
  const Trace t = trace_of({-2.0, -4.0});
  CHECK(score_compression(t, "abc", cfg) == -3.0 / static_cast<double>(compressed_size("abc", 6)));
  CHECK_THROWS_AS(score_compression(t, "", cfg), EmptyText);
}

TEST_CASE("score identities") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    Trace t = mt::random_trace(rng, "s", 1 + rng.below(200), true);
    CHECK(score_min_k(t, 100) == score_ppl(t));
    Trace unit = t;
    for (auto& r : unit.tokens) {
      r.mu = 0.0;
      r.sd = 1.0;
    }
    for (double k : {5.0, 20.0, 60.0, 100.0}) CHECK(score_min_k_pp(unit, k) == score_min_k(t, k));
    CHECK(score_ref(t, t) == 0.0);
    CHECK(score_neighbor(t, std::vector<Trace>{t}) == 0.0);
    CHECK(score_recall(t, t) == 0.0);
    double prev = -INFINITY;
    for (int k = 10; k <= 100; ++k) {
      const double v = score_min_k(t, k);
      CHECK(v >= prev);
      prev = v;
    }
    // Permuting tokens leaves every score unchanged.
    Trace shuffled = t;
    rng.shuffle(shuffled.tokens);
    CHECK(score_ppl(shuffled) == score_ppl(t));
    CHECK(score_min_k_pp(shuffled, 30) == score_min_k_pp(t, 30));
  }
}

TEST_CASE("scoring errors") {
  Trace empty;
  CHECK_THROWS_AS(score_ppl(empty), EmptyTrace);
  CHECK_THROWS_AS(score_min_k_pp(trace_of({-1.0}), 20), MissingMoments);
  CHECK_THROWS_AS(score_ref(trace_of({-1.0}, "a"), trace_of({-1.0}, "b")), SampleMismatch);
  CHECK_THROWS_AS(score_neighbor(trace_of({-1.0}), std::vector<Trace>{}), NoNeighbors);
  Trace plain2 = trace_of({-1.0, -2.0});
  CHECK_THROWS_AS(score_recall(trace_of({-1.0}), plain2), ConditionMismatch);
  ScoringConfig bad;
  bad.k_percent = 0;
  CHECK_THROWS_AS(bad.check(), Error);
  CHECK(method_from_string("minkpp") == Method::minkpp);
  CHECK_THROWS_AS(method_from_string("lira"), Error);
}

TEST_CASE("SIMD variants agree bit for bit") {
  Rng rng(3);
  const auto isas = simd::available_isas();
  REQUIRE(isas.front() == simd::Isa::scalar);
  MESSAGE("variants: " << isas.size() << ", active " << simd::to_string(simd::active_isa()));
  for (int round = 0; round < 500; ++round) {
    const std::size_t n = rng.below(300);
    std::vector<double> a(n), mu(n), sd(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = (rng.unit() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(30)) - 15);
      mu[i] = -rng.unit() * 5;
      sd[i] = rng.below(8) ? rng.unit() * 2 : 0.0;
    }
    const double ref_sum = simd::scalar::sum(a);
    std::vector<double> ref_z(n), z(n);
    simd::scalar::normalize(a, mu, sd, 1e-6, ref_z);
    for (auto isa : isas) {
      simd::force_isa(isa);
      const double s = simd::sum(a);
      CHECK(std::memcmp(&s, &ref_sum, sizeof s) == 0);
      simd::normalize(a, mu, sd, 1e-6, z);
      CHECK(std::memcmp(z.data(), ref_z.data(), n * sizeof(double)) == 0);
    }
  }
  simd::force_isa(simd::active_isa());
}

TEST_CASE("compensated sum is accurate") {
  std::vector<double> v = {1e16, 1.0, -1e16, 1.0};
  CHECK(simd::scalar::sum(v) == 2.0);
  std::vector<double> many(10001, 0.1);
  CHECK(simd::sum(many) == doctest::Approx(1000.1).epsilon(1e-15));
}

TEST_CASE("batch scoring is independent of thread count") {
  Rng rng(5);
  std::vector<CodeSample> samples;
  std::vector<Trace> traces;
  for (int i = 0; i < 300; ++i) {
    CodeSample s;
    s.id = "s" + std::to_string(i);
    s.text = "def f():\n    return " + std::to_string(i);
    samples.push_back(s);
    Trace t = mt::random_trace(rng, s.id, 5 + rng.below(50), true);
    t.condition = Condition::plain();
    traces.push_back(t);
  }
  for (Method m : {Method::ppl, Method::zlib, Method::mink, Method::minkpp}) {
    ScoreRequest r;
    r.method = m;
    r.model_id = "m";
    const auto one = score_samples(r, samples, traces, 1);
    const auto many = score_samples(r, samples, traces, 8);
    REQUIRE(one.results.size() == 300);
    for (std::size_t i = 0; i < 300; ++i) {
      CHECK(one.results[i].sample_id == many.results[i].sample_id);
      CHECK(one.results[i].value == many.results[i].value);
    }
    CHECK(to_json(one.results[0]).dump() == to_json(many.results[0]).dump());
    const auto back = score_result_from_json(nlohmann::json::parse(to_json(one.results[7]).dump()));
    CHECK(back.value == one.results[7].value);
    CHECK(back.method_label == r.label());
  }
  ScoreRequest ref;
  ref.method = Method::ref;
  ref.model_id = "m";
  ref.reference_model_id = "absent";
  CHECK(score_samples(ref, samples, traces).gaps.size() == 300);
}
