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

#include "memprobe/syntax/functions.hpp"

#include "memprobe/error.hpp"
#include "memprobe/syntax/clike_tree.hpp"
#include "memprobe/syntax/lexer.hpp"
#include "memprobe/syntax/python_tree.hpp"

namespace memprobe::syntax {

namespace {

bool is_layout(TokenKind k) {
  return k == TokenKind::newline || k == TokenKind::indent || k == TokenKind::dedent;
}

// Lexed index of the earliest comment attached directly above `first`:
// whole-line comments on consecutive lines with no blank line between.
std::size_t attach_comments(const Lexed& lx, std::size_t first) {
  std::size_t start = first;
  std::size_t line = lx.tokens[first].line;
  std::size_t i = first;
  while (i > 0) {
    --i;
    const Token& t = lx.tokens[i];
    if (is_layout(t.kind) && t.begin == t.end) continue;
    if (t.kind == TokenKind::newline) continue;
    if (t.kind != TokenKind::comment || t.end_line + 1 != line) break;
    // Must be alone on its line.
    std::size_t j = i;
    bool alone = true;
    while (j > 0) {
      --j;
      const Token& p = lx.tokens[j];
      if (p.kind == TokenKind::newline || (is_layout(p.kind) && p.begin == p.end)) continue;
      alone = p.end_line < t.line;
      break;
    }
    if (!alone) break;
    start = i;
    line = t.line;
  }
  return start;
}

std::size_t line_start(std::string_view src, std::size_t offset) {
  std::size_t b = offset;
  while (b > 0 && (src[b - 1] == ' ' || src[b - 1] == '\t')) --b;
  if (b == 0 || src[b - 1] == '\n') return b;
  return offset;
}

FunctionSpan make_span(const Lexed& lx, std::size_t first, std::size_t last, std::string name) {
  const std::size_t head = attach_comments(lx, first);
  FunctionSpan s;
  s.begin = line_start(lx.source, lx.tokens[head].begin);
  s.end = lx.tokens[last].end;
  s.name = std::move(name);
  s.line = lx.tokens[head].line;
  return s;
}

std::string py_def_name(const py::Module& m, const py::Stmt& s) {
  std::size_t i = s.begin;
  if (m.lexed.text(i) == "async") ++i;
  return std::string(m.lexed.text(i + 1));
}

void walk_python(const py::Module& m, const std::vector<py::Stmt>& body,
                 std::vector<FunctionSpan>& out) {
  std::size_t decorators = py::npos;
  for (const auto& s : body) {
    if (s.keyword == "@") {
      if (decorators == py::npos) decorators = s.begin;
      continue;
    }
    const std::size_t first = decorators != py::npos ? decorators : s.begin;
    decorators = py::npos;
    if (s.keyword == "def") {
      out.push_back(make_span(m.lexed, first, s.last, py_def_name(m, s)));
    } else if (s.keyword == "class") {
      walk_python(m, s.body, out);
    }
  }
}

}  // namespace

std::vector<FunctionSpan> find_functions(std::string_view source, Language language) {
  std::vector<FunctionSpan> out;
  if (language == Language::python) {
    const py::Module m = py::parse(source);
    walk_python(m, m.body, out);
    return out;
  }
  const clike::Unit u = clike::parse_unit(source, language);
  for (const auto& f : u.functions) {
    out.push_back(make_span(u.lexed, u.code_to_lexed[f.begin], u.code_to_lexed[f.body_close],
                            f.name_text));
  }
  return out;
}

void check_function(std::string_view text, Language language) {
  if (language == Language::python) {
    const py::Module m = py::parse(text);
    std::size_t defs = 0;
    for (const auto& s : m.body) {
      if (s.keyword == "@") continue;
      if (s.keyword != "def") throw ParseFailure(language, m.lexed.tokens[s.begin].begin,
                                                 "expected a single function definition");
      ++defs;
    }
    if (defs != 1) throw ParseFailure(language, 0, "expected exactly one function definition");
    // Decorators must directly precede the definition (no trailing decorator).
    if (m.body.back().keyword != "def")
      throw ParseFailure(language, text.size(), "dangling decorator");
    return;
  }
  const clike::Unit u = clike::parse_unit(text, language);
  if (u.functions.size() != 1 || u.code.empty())
    throw ParseFailure(language, 0, "expected exactly one function definition");
  const auto& f = u.functions.front();
  if (f.begin != 0 || f.body_close + 1 != u.code.size())
    throw ParseFailure(language, u.code[f.body_close].end, "text outside the function definition");
}

bool parses_as_function(std::string_view text, Language language) noexcept {
  try {
    check_function(text, language);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

std::string function_name(std::string_view text, Language language) {
  check_function(text, language);
  if (language == Language::python) {
    const py::Module m = py::parse(text);
    for (const auto& s : m.body)
      if (s.keyword == "def") return py_def_name(m, s);
  }
  const clike::Unit u = clike::parse_unit(text, language);
  return u.functions.front().name_text;
}

}  // namespace memprobe::syntax
