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

#include <sstream>

#include "doctest.h"
#include "memprobe/error.hpp"
#include "memprobe/traces.hpp"
#include "synthetic.hpp"

using namespace memprobe;
namespace mt = memprobe::testing;

namespace {

const char* kGood =
    R"({"schema":"trace/1","sample_id":"s","model_id":"m","tokenizer_id":"t","condition":"plain","tokens":[{"t":"a","lp":-1.5}]})";

// Expects `body` to fail at `line` with `field` named.
void expect_violation(const std::string& body, std::size_t line, const std::string& field) {
  std::istringstream in(body);
  try {
    read_traces(in);
    FAIL("no violation for " << body);
  } catch (const SchemaViolation& e) {
    CHECK(e.line() == line);
    CHECK(e.field() == field);
  }
}

}  // namespace

TEST_CASE("trace round trip") {
  Rng rng(42);
  std::vector<Trace> traces;
  for (int i = 0; i < 500; ++i)
    traces.push_back(mt::random_trace(rng, "s" + std::to_string(i), 1 + rng.below(40), rng.coin()));
  std::ostringstream out;
  write_traces(out, traces);
  std::istringstream in(out.str());
  const auto back = read_traces(in);
  CHECK(back == traces);
  std::ostringstream again;
  write_traces(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("condition forms") {
  CHECK(to_string(Condition::plain()) == "plain");
  CHECK(to_string(Condition::prefixed("p1")) == "prefixed:p1");
  CHECK(to_string(Condition::neighbor_of(3)) == "neighbor:3");
  std::istringstream in(
      R"({"schema":"trace/1","sample_id":"s","model_id":"m","tokenizer_id":"t","condition":{"neighbor":2},"tokens":[{"t":"a","lp":0}]})"
      "\n"
      R"({"schema":"trace/1","sample_id":"s","model_id":"m","tokenizer_id":"t","condition":{"prefixed":"p"},"tokens":[{"t":"a","lp":-1,"mu":-2,"sd":0.5}]})");
  const auto ts = read_traces(in);
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].condition == Condition::neighbor_of(2));
  CHECK(ts[1].condition == Condition::prefixed("p"));
  CHECK(*ts[1].tokens[0].sd == 0.5);
}

TEST_CASE("schema violations name line and field") {
  const std::string good = kGood;
  auto with = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  expect_violation(good + "\n\n" + with("\"lp\":-1.5", "\"lp\":0.5"), 3, "tokens[0].lp");
  expect_violation(good + "\n" + with("\"lp\":-1.5", "\"lp\":\"x\""), 2, "tokens[0].lp");
  expect_violation(with("\"sample_id\":\"s\",", ""), 1, "sample_id");
  expect_violation(good + "\n" + good + "\n{not json", 3, "");
  expect_violation(with("trace/1", "trace/2"), 1, "schema");
  expect_violation(with("\"plain\"", "\"weird\""), 1, "condition");
  expect_violation(with("\"lp\":-1.5", "\"lp\":-1.5,\"mu\":-1"), 1, "tokens[0].sd");
  expect_violation(with("\"lp\":-1.5", "\"lp\":-1.5,\"extra\":1"), 1, "tokens[0].extra");
  expect_violation(with("\"condition\"", "\"bonus\":1,\"condition\""), 1, "bonus");
  expect_violation(with("[{\"t\":\"a\",\"lp\":-1.5}]", "[]"), 1, "tokens");
  // Minor versions tolerate extra fields.
  std::istringstream minor(with("trace/1\"", "trace/1.2\",\"extra\":true"));
  CHECK(read_traces(minor).size() == 1);
}

TEST_CASE("join_traces") {
  std::vector<CodeSample> samples(3);
  samples[0].id = "a";
  samples[1].id = "b";
  samples[2].id = "c";
  std::vector<Trace> traces = {mt::flat_trace("a", 3, -1.0), mt::flat_trace("b", 3, -1.0),
                               mt::flat_trace("a", 3, -2.0, "ref"),
                               mt::flat_trace("a", 3, -1.0, "m", Condition::neighbor_of(0)),
                               mt::flat_trace("a", 3, -1.0, "m", Condition::neighbor_of(1)),
                               mt::flat_trace("zzz", 3, -1.0)};
  const std::vector<Requirement> req = {{"m", ConditionKind::plain, {}, 1},
                                        {"ref", ConditionKind::plain, {}, 1},
                                        {"m", ConditionKind::neighbor, {}, 2}};
  const auto j = join_traces(samples, traces, req);
  REQUIRE(j.records.size() == 1);
  CHECK(j.records[0].sample_id == "a");
  CHECK(j.records[0].neighbors("m").size() == 2);
  CHECK(j.records[0].find("ref", Condition::plain())->tokens[0].lp == -2.0);
  // b lacks ref and neighbors; c lacks everything.
  CHECK(j.gaps.size() == 2 + 3);
  CHECK(j.gaps[0].sample_id == "b");
  CHECK(j.gaps.back().sample_id == "c");

  // Conflicting duplicates become a gap; identical duplicates do not.
  traces.push_back(mt::flat_trace("a", 3, -1.0));
  CHECK(join_traces(samples, traces, req).records.size() == 1);
  traces.push_back(mt::flat_trace("a", 3, -1.5));
  CHECK(join_traces(samples, traces, req).records.empty());
}
