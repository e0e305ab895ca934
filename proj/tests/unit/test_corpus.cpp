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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "exec_driver.hpp"
#include "memprobe/corpus.hpp"
#include "memprobe/error.hpp"
#include "memprobe/syntax/functions.hpp"

using namespace memprobe;
namespace fs = std::filesystem;
namespace mt = memprobe::testing;

namespace {

CodeSample sample(std::string id, std::size_t tokens) {
  CodeSample s;
  s.id = std::move(id);
  s.token_count = tokens;
  return s;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("memprobe-corpus-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("extract_functions") {
  CHECK(extract_functions("", Language::python).empty());

  const std::string py = "def a():\n    return 1\n\nLIMIT = 3\n\ndef b(x):\n    return x\n";
  const auto ps = extract_functions(py, Language::python);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].text == "def a():\n    return 1");
  CHECK(ps[1].text == "def b(x):\n    return x");
  CHECK((ps[0].text + ps[1].text).find("LIMIT") == std::string::npos);
  CHECK(ps[0].id == "a@1");
  CHECK(ps[1].id == "b@6");

  const std::string cpp =
      "int add(int a, int b) { return a + b; }\n"
      "class Box {\n"
      " public:\n"
      "  int area() const { return w * h; }\n"
      "  int w, h;\n"
      "};\n";
  const auto cs = extract_functions(cpp, Language::cpp);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].id == "add@1");
  CHECK(cs[1].id == "area@4");

  // Nested functions stay inside their parent.
  const auto nested = extract_functions("def outer():\n    def inner():\n        return 1\n    return inner\n",
                                        Language::python);
  REQUIRE(nested.size() == 1);
  CHECK(nested[0].text.find("def inner") != std::string::npos);

  CHECK_THROWS_AS(extract_functions("def broken(:\n    pass\n", Language::python), ParseFailure);
  CHECK_THROWS_AS(extract_functions("int f() { return 1;\n", Language::cpp), ParseFailure);
}

TEST_CASE("extracted spans are byte-identical and re-parse") {
  for (Language lang : {Language::python, Language::java, Language::cpp}) {
    for (const auto& f : mt::fixture_functions(lang)) {
      INFO(f.sample.id);
      CHECK(syntax::parses_as_function(f.sample.text, lang));
    }
  }
  const std::string src = mt::read_file(mt::fixtures_dir() / "corpus" / "java" / "Ledger.java");
  const auto a = extract_functions(src, Language::java);
  const auto b = extract_functions(src, Language::java);
  CHECK(a == b);
  for (const auto& s : a) CHECK(src.find(s.text) != std::string::npos);
}

TEST_CASE("fixture counts cover at least 60 functions per language") {
  for (Language lang : {Language::python, Language::java, Language::cpp}) {
    INFO(to_string(lang));
    CHECK(mt::fixture_functions(lang).size() >= 60);
  }
}

TEST_CASE("assign_buckets") {
  const auto buckets = std::vector<LengthBucket>{{100, 200}, {200, 300}};
  const auto r = assign_buckets({sample("a", 150), sample("b", 200), sample("c", 700), sample("d", 99)}, buckets);
  REQUIRE(r.buckets.size() == 2);
  CHECK(r.buckets[0].second.size() == 1);
  CHECK(r.buckets[0].second[0].id == "a");
  CHECK(r.buckets[1].second[0].id == "b");
  REQUIRE(r.unbucketed.size() == 2);
  CHECK(r.unbucketed[0].id == "c");
  CHECK(default_buckets().size() == 5);
  CHECK(to_string(default_buckets()[0]) == "100-200");
  CHECK_THROWS_AS(assign_buckets({}, {{200, 100}}), Error);
  CHECK_THROWS_AS(assign_buckets({}, {{100, 300}, {200, 400}}), Error);
}

TEST_CASE("validate_corpus") {
  CorpusManifest m;
  m.cutoff_date = "2023-01-01";
  auto s = extract_functions("def f(x):\n    return x\n", Language::python)[0];
  s.token_count = count_tokens(s.text);
  auto t = s;
  t.id = "g@1";
  m.samples = {s, t};
  CHECK(validate_corpus(m).empty());

  m.samples[1].id = s.id;
  auto v = validate_corpus(m);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "duplicate_id");
  CHECK(v[0].sample_id == s.id);

  m.samples[1].id = "g@1";
  m.samples[1].label = Label::non_member;
  m.samples[1].meta["commit_date"] = "2022-06-30";
  v = validate_corpus(m);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "date_rule");

  m.samples[1].meta["commit_date"] = "2023-02-01";
  m.samples[1].text = "def g(:\n";
  m.samples[1].token_count = count_tokens(m.samples[1].text);
  v = validate_corpus(m);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "unparseable");
}

TEST_CASE("manifest round trip and path samples") {
  const fs::path dir = scratch("manifest");
  std::ofstream(dir / "f.py") << "def f(a):\n    return a\n";
  std::ofstream(dir / "m.json") << R"({"tokenizer_id": "fallback/1", "cutoff_date": "2023-01-01", "samples": [
    {"id": "x", "language": "python", "label": "member", "path": "f.py"},
    {"id": "y", "language": "python", "label": "non_member", "text": "def g():\n    pass"}]})";
  const auto m = read_manifest(dir / "m.json");
  REQUIRE(m.samples.size() == 2);
  CHECK(m.samples[0].text == "def f(a):\n    return a\n");
  CHECK(m.samples[0].token_count == count_tokens(m.samples[0].text));
  CHECK(m.samples[1].label == Label::non_member);

  std::ostringstream out;
  write_manifest(m, out);
  CHECK(manifest_from_json(nlohmann::json::parse(out.str())) == m);

  std::ofstream(dir / "bad.json") << R"({"samples": [{"id": "x", "language": "python", "label": "member",
    "path": "f.py", "text": "def f(): pass"}]})";
  CHECK_THROWS_AS(read_manifest(dir / "bad.json"), Error);
  fs::remove_all(dir);
}

TEST_CASE("ingest") {
  const fs::path dir = scratch("ingest");
  fs::create_directories(dir / "pkg");
  std::ofstream(dir / "pkg" / "a.py") << "def a():\n    return 1\n\ndef b():\n    return 2\n";
  std::ofstream(dir / "pkg" / "old.py") << "def c():\n    return 3\n";
  std::ofstream(dir / "pkg" / "broken.py") << "def d(:\n";
  std::ofstream(dir / "pkg" / "dup.py") << "def a():\n    return 1\n";
  std::ofstream(dir / "meta.json")
      << R"({"repo": "demo", "commit_date": "2024-03-01", "files": {"old.py": {"commit_date": "2020-01-01"}}})";

  IngestOptions o;
  o.language = Language::python;
  o.label = Label::non_member;
  o.cutoff_date = "2023-01-01";
  o.meta_file = dir / "meta.json";
  o.dedupe = true;
  IngestStats st;
  const auto m = ingest(dir / "pkg", o, &st);
  CHECK(st.files == 4);
  CHECK(st.skipped_files == 1);
  CHECK(st.duplicates == 1);
  CHECK(st.ineligible == 1);
  REQUIRE(m.samples.size() == 2);
  CHECK(m.samples[0].id == "a.py::a@1");
  CHECK(m.samples[0].meta.at("repo") == "demo");
  CHECK(m.samples[0].meta.at("commit_date") == "2024-03-01");
  CHECK(m.samples[0].label == Label::non_member);
  CHECK(validate_corpus(m).empty());
  CHECK(ingest(dir / "pkg", o) == m);
  fs::remove_all(dir);
}
