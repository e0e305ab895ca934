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

#include <string>

#include "doctest.h"
#include "memprobe/error.hpp"
#include "memprobe/syntax/functions.hpp"
#include "memprobe/syntax/lexer.hpp"

using namespace memprobe;
using namespace memprobe::syntax;

TEST_CASE("python functions and decorators") {
  const std::string src =
      "import os\n\n"
      "# adds\n# two numbers\n"
      "@cache\n"
      "def add(a, b):\n"
      "    return a + b\n\n"
      "class K:\n"
      "    def m(self):\n"
      "        if self:\n"
      "            return 1\n"
      "        return 2\n\n"
      "x = 3\n";
  const auto fs = find_functions(src, Language::python);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].name == "add");
  CHECK(src.substr(fs[0].begin, fs[0].end - fs[0].begin) ==
        "# adds\n# two numbers\n@cache\ndef add(a, b):\n    return a + b");
  CHECK(fs[1].name == "m");
  CHECK(src.substr(fs[1].begin, 4) == "    ");
  CHECK(parses_as_function("    def m(self):\n        return 2", Language::python));
  CHECK_FALSE(parses_as_function("def f(:\n  pass\n", Language::python));
  CHECK_FALSE(parses_as_function("def f():\nreturn 1\n", Language::python));
  CHECK_FALSE(parses_as_function("def f():\n  return 1\nx = 2\n", Language::python));
  CHECK(function_name("async def go():\n  await x\n", Language::python) == "go");
}

TEST_CASE("java methods") {
  const std::string src = R"(package a;
import java.util.*;
public class Box<T> {
  private int n = 3;
  static { init(); }
  public Box(int n) { this.n = n; }
  /** doc */
  @Override
  public String toString() {
    for (int i = 0; i < n; i++) { if (i > 2) break; }
    for (String s : names) { System.out.println(s); }
    switch (n) { case 1 -> { n++; } default -> n--; }
    Runnable r = () -> { n++; };
    return "box";
  }
  enum Color { RED { int f() { return 1; } }, GREEN; int g() { return 2; } }
  record P(int x) { P { } int twice() { return 2 * x; } }
  <U> List<U> map(java.util.function.Function<T, U> f) throws java.io.IOException, Exception {
    try { return null; } catch (RuntimeException e) { throw e; } finally { n = 0; }
  }
}
)";
  const auto fs = find_functions(src, Language::java);
  REQUIRE(fs.size() == 5);  // enum-constant bodies are anonymous classes: skipped
  CHECK(fs[0].name == "Box");
  CHECK(fs[1].name == "toString");
  CHECK(src.substr(fs[1].begin, 12) == "  /** doc */");
  CHECK(fs[2].name == "g");
  CHECK(fs[3].name == "twice");
  CHECK(fs[4].name == "map");
  CHECK(parses_as_function("int f(int a) { return a; }", Language::java));
  CHECK_FALSE(parses_as_function("int f(int a) { return a }", Language::java));
  CHECK_FALSE(parses_as_function("int f(int a) { if (a) }", Language::java));
}

TEST_CASE("cpp functions") {
  const std::string src = R"(#include <vector>
namespace ns {
template <typename T>
T twice(T x) { return x * 2; }
struct S : Base {
  S() : a_(1), b_{2} {}
  ~S() override {}
  bool operator==(const S& o) const noexcept { return a_ == o.a_; }
  int operator()(int x) { return x; }
  explicit operator bool() const { return true; }
  int a_ = 0, b_;
};
auto lam = [](int x) { return x; };
std::vector<int> make(int n) -> decltype(n) { std::vector<int> v(n); return v; }
}  // namespace ns
int ns::S::get() const { do { x++; } while (x < 3); for (auto [a, b] : m) {} return 0; }
extern "C" { int c_api(void) { return 0; } }
)";
  const auto fs = find_functions(src, Language::cpp);
  REQUIRE(fs.size() == 9);
  CHECK(fs[0].name == "twice");
  CHECK(src.substr(fs[0].begin, 8) == "template");
  CHECK(fs[1].name == "S");
  CHECK(fs[2].name == "S");
  CHECK(fs[3].name == "operator==");
  CHECK(fs[4].name == "operator()");
  CHECK(fs[5].name == "operatorbool");
  CHECK(fs[6].name == "make");
  CHECK(fs[7].name == "get");
  CHECK(fs[8].name == "c_api");
  CHECK_FALSE(parses_as_function("int f() { return 1 }", Language::cpp));
  CHECK_THROWS_AS(find_functions("int f() { return 1; ", Language::cpp), ParseFailure);
}

TEST_CASE("fallback tokenizer") {
  const auto t = fallback_tokenize("foo(x1, 2.5)+=y");
  REQUIRE(t.size() == 9);
  CHECK(t[0] == "foo");
  CHECK(t[2] == "x1");
  CHECK(t[4] == "2.5");
}
