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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "memprobe/syntax/lexer.hpp"

// Statement tree for Java and C++ function bodies, plus the scope walk that
// finds function definitions. Token indices refer to Unit::code.
namespace memprobe::syntax::clike {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

enum class Kind {
  block,
  if_,
  for_,       // classic three-clause header
  foreach,    // range / enhanced for
  while_,
  do_while,
  switch_,
  try_,
  synchronized_,
  label,      // case/default/goto labels, including the ':' or '->'
  simple,     // expression, declaration, return, break, ... up to ';'
  local_type, // local class/struct/record/enum definition
  empty,
  preprocessor,
};

struct Stmt {
  Kind kind = Kind::simple;
  std::size_t begin = 0;  // [begin, end) over Unit::code
  std::size_t end = 0;
  std::size_t lparen = npos;  // control header parentheses
  std::size_t rparen = npos;
  std::size_t else_token = npos;
  // block: statements; if: then [, else]; loops/switch/synchronized: body;
  // do: body; try: try-block, then handler blocks (catch/finally) in order.
  std::vector<Stmt> children;
};

struct Function {
  std::size_t begin = 0;       // first header token (template, annotation, modifier)
  std::size_t name = 0;        // name token (for operators: the 'operator' token)
  std::size_t lparen = 0;      // parameter list
  std::size_t rparen = 0;
  std::size_t body_open = 0;   // '{' of the body
  std::size_t body_close = 0;  // matching '}'
  std::string name_text;
  bool qualified = false;      // defined as Scope::name
  bool is_operator = false;
  bool is_constructor = false; // name equals enclosing class, or ~destructor
  bool overrides = false;      // @Override or 'override'
  Stmt body;                   // Kind::block over the braces
};

struct Unit {
  Lexed lexed;
  std::vector<Token> code;             // code tokens (comments removed)
  std::vector<std::size_t> code_to_lexed;
  std::vector<Function> functions;     // namespace/class-level definitions

  std::string_view text(std::size_t code_index) const { return lexed.text(code[code_index]); }
  std::size_t size() const { return code.size(); }
};

// Throws ParseFailure. Walks namespaces and class bodies; function bodies
// are parsed into statement trees.
Unit parse_unit(std::string_view source, Language language);

}  // namespace memprobe::syntax::clike
