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

#include "memprobe/syntax/clike_tree.hpp"

#include <optional>
#include <string>

#include "memprobe/error.hpp"

namespace memprobe::syntax::clike {

namespace {

struct Header {
  std::size_t name = 0;
  std::size_t lparen = 0;
  std::size_t rparen = 0;
  bool qualified = false;
  bool is_operator = false;
  bool destructor = false;
  bool overrides = false;
};

class Parser {
 public:
  Parser(std::string_view source, Language language) : lang_(language) {
    unit_.lexed = lex(source, language);
    for (std::size_t i = 0; i < unit_.lexed.tokens.size(); ++i) {
      const Token& t = unit_.lexed.tokens[i];
      if (t.kind == TokenKind::comment) continue;
      unit_.code.push_back(t);
      unit_.code_to_lexed.push_back(i);
    }
    match_.assign(unit_.code.size(), npos);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < unit_.code.size(); ++i) {
      if (unit_.code[i].kind != TokenKind::punct) continue;
      const auto w = t(i);
      if (w == "(" || w == "[" || w == "{") {
        stack.push_back(i);
      } else if (w == ")" || w == "]" || w == "}") {
        match_[i] = stack.back();
        match_[stack.back()] = i;
        stack.pop_back();
      }
    }
  }

  Unit run() {
    scan_scope(0, n(), ScopeKind::file, {});
    return std::move(unit_);
  }

 private:
  enum class ScopeKind { file, namespace_, class_, enum_ };

  std::size_t n() const { return unit_.code.size(); }
  std::string_view t(std::size_t i) const { return i < n() ? unit_.text(i) : std::string_view{}; }
  TokenKind k(std::size_t i) const { return unit_.code[i].kind; }
  bool is(std::size_t i, std::string_view w) const {
    return i < n() && (k(i) == TokenKind::punct || k(i) == TokenKind::keyword ||
                       k(i) == TokenKind::identifier) &&
           t(i) == w;
  }
  bool ident(std::size_t i) const { return i < n() && k(i) == TokenKind::identifier; }

  [[noreturn]] void fail(std::size_t i, const std::string& what) const {
    const std::size_t offset = i < n() ? unit_.code[i].begin : unit_.lexed.source.size();
    throw ParseFailure(lang_, offset, what);
  }

  std::size_t close_of(std::size_t open) const {
    if (open >= n() || match_[open] == npos) fail(open, "expected bracket");
    return match_[open];
  }

  // Skips `< ... >` starting at an opening '<'; returns index after the '>'.
  std::size_t skip_angles(std::size_t i) const {
    int depth = 0;
    for (; i < n(); ++i) {
      const auto w = t(i);
      if (w == "(" || w == "[" || w == "{") {
        i = close_of(i);
        continue;
      }
      if (w == "<") ++depth;
      if (w == ">") --depth;
      if (w == ">>") depth -= 2;
      if (w == ">>>") depth -= 3;
      if (w == ";" || w == "}") fail(i, "unterminated template argument list");
      if (depth <= 0) return i + 1;
    }
    fail(i, "unterminated template argument list");
  }

  // ---- scope walk -----------------------------------------------------------

  void scan_scope(std::size_t b, std::size_t e, ScopeKind scope, std::string_view class_name) {
    std::size_t i = b;
    if (scope == ScopeKind::enum_) {
      // Enum constants up to the first top-level ';'.
      while (i < e && !is(i, ";")) {
        if (is(i, "(") || is(i, "[") || is(i, "{")) i = close_of(i);
        ++i;
      }
      if (i >= e) return;
      ++i;
      scope = ScopeKind::class_;
    }
    while (i < e) {
      if (k(i) == TokenKind::preprocessor || is(i, ";")) {
        ++i;
        continue;
      }
      i = scan_declaration(i, e, scope, class_name);
    }
  }

  // Scans one declaration starting at `start`; returns the index after it.
  std::size_t scan_declaration(std::size_t start, std::size_t e, ScopeKind scope,
                               std::string_view class_name) {
    if ((is(start, "public") || is(start, "private") || is(start, "protected")) && is(start + 1, ":"))
      return start + 2;
    std::size_t j = start;
    while (j < e) {
      if (k(j) == TokenKind::preprocessor) {
        ++j;
        continue;
      }
      const auto w = t(j);
      if (w == ";") return j + 1;
      if (w == "(" || w == "[") {
        j = close_of(j) + 1;
        continue;
      }
      if (lang_ == Language::cpp && w == "template" && is(j + 1, "<")) {
        j = skip_angles(j + 1);
        continue;
      }
      if (lang_ == Language::cpp && w == ":" && j > start &&
          (is(j - 1, ")") || tail_before_init_list(start, j))) {
        if (auto head = function_header(start, j)) {
          const std::size_t body = skip_init_list(j + 1, e);
          record_function(start, *head, body, class_name);
          return close_of(body) + 1;
        }
      }
      if (w == "{") return open_brace(start, j, e, scope, class_name);
      if (w == "}") fail(j, "unexpected '}'");
      ++j;
    }
    if (j > start) fail(j, "expected ';' or '{'");
    return j;
  }

  bool tail_before_init_list(std::size_t start, std::size_t colon) const {
    // `) noexcept :` / `) const :` style.
    std::size_t p = colon;
    while (p > start && (is(p - 1, "noexcept") || is(p - 1, "const") || is(p - 1, "override"))) --p;
    return p > start && p != colon && is(p - 1, ")");
  }

  std::size_t skip_init_list(std::size_t i, std::size_t e) const {
    while (i < e) {
      while (i < e && (ident(i) || is(i, "::") || is(i, "typename") || is(i, "template"))) {
        ++i;
        if (is(i, "<")) i = skip_angles(i);
      }
      if (!(is(i, "(") || is(i, "{"))) fail(i, "malformed constructor initializer");
      i = close_of(i) + 1;
      if (is(i, "...")) ++i;
      if (is(i, ",")) {
        ++i;
        continue;
      }
      if (is(i, "{")) return i;
      fail(i, "expected '{' after constructor initializers");
    }
    fail(i, "unterminated constructor initializer list");
  }

  std::size_t skip_prefixes(std::size_t p, std::size_t brace) const {
    while (p < brace) {
      if (lang_ == Language::cpp && is(p, "template") && is(p + 1, "<")) {
        p = skip_angles(p + 1);
      } else if (is(p, "[") && is(p + 1, "[")) {
        p = close_of(p) + 1;
      } else if (lang_ == Language::java && is(p, "@") && !is(p + 1, "interface")) {
        p += 2;
        while (is(p, ".") && ident(p + 1)) p += 2;
        if (is(p, "(")) p = close_of(p) + 1;
      } else if (is(p, "__attribute__") || is(p, "alignas") || is(p, "__declspec")) {
        p = close_of(p + 1) + 1;
      } else {
        break;
      }
    }
    return p;
  }

  // Class-like keyword at the top level of a declaration head, or npos.
  std::size_t class_keyword(std::size_t start, std::size_t brace) const {
    std::size_t p = skip_prefixes(start, brace);
    for (; p < brace; ++p) {
      const auto w = t(p);
      if (w == "(") return npos;
      if (w == "=") return npos;
      if (lang_ == Language::cpp && w == "template" && is(p + 1, "<")) {
        p = skip_angles(p + 1) - 1;
        continue;
      }
      if (k(p) == TokenKind::keyword &&
          (w == "class" || w == "struct" || w == "union" || w == "interface" || w == "enum"))
        return p;
      if (lang_ == Language::java && w == "record" && ident(p + 1)) return p;
      if (lang_ == Language::java && w == "@" && is(p + 1, "interface")) return p + 1;
      if (lang_ == Language::java && w == "@") {
        p += 1;
        while (is(p + 1, ".")) p += 2;
        if (is(p + 1, "(")) p = close_of(p + 1);
      }
    }
    return npos;
  }

  std::optional<Header> function_header(std::size_t start, std::size_t brace) const {
    std::size_t p = skip_prefixes(start, brace);
    if (p >= brace) return std::nullopt;
    if (k(p) == TokenKind::keyword) {
      const auto w = t(p);
      if (w == "return" || w == "if" || w == "while" || w == "for" || w == "switch" ||
          w == "namespace" || w == "using" || w == "typedef")
        return std::nullopt;
    }
    Header h;
    bool found = false;
    int angle = 0;
    for (std::size_t q = p; q < brace; ++q) {
      const auto w = t(q);
      if (w == "=" && !is(q - 1, "operator")) return std::nullopt;
      if (lang_ == Language::cpp) {
        if (w == "<" && q > p && (ident(q - 1) || is(q - 1, "template"))) {
          ++angle;
          continue;
        }
        if (angle > 0 && w == ">") {
          --angle;
          continue;
        }
        if (angle > 0 && w == ">>") {
          angle = angle >= 2 ? angle - 2 : 0;
          continue;
        }
      }
      if (w == "[") {
        q = close_of(q);
        continue;
      }
      if (w != "(") continue;
      if (angle > 0) {
        q = close_of(q);
        continue;
      }
      if (q == p) return std::nullopt;
      const std::size_t prev = q - 1;
      // operator(), operator==, operator new, operator bool, ...
      std::size_t op = npos;
      for (std::size_t back = 1; back <= 3 && back <= q - p; ++back) {
        if (is(q - back, "operator")) {
          op = q - back;
          break;
        }
      }
      if (op != npos) {
        std::size_t lp = q;
        if (op == prev && is(q + 1, ")") && is(q + 2, "(")) lp = q + 2;
        h.name = op;
        h.lparen = lp;
        h.is_operator = true;
        found = true;
        break;
      }
      if (ident(prev) || (lang_ == Language::cpp && is(prev, ">"))) {
        std::size_t name = prev;
        if (is(prev, ">")) {
          // Specialization: walk back to the template name.
          int depth = 0;
          std::size_t b = prev;
          for (;; --b) {
            if (is(b, ">")) ++depth;
            if (is(b, ">>")) depth += 2;
            if (is(b, "<")) --depth;
            if (depth == 0 || b == p) break;
          }
          if (b == p || !ident(b - 1)) return std::nullopt;
          name = b - 1;
        }
        h.name = name;
        h.lparen = q;
        found = true;
        break;
      }
      if (k(prev) == TokenKind::keyword) {
        const auto pw = t(prev);
        if (pw == "decltype" || pw == "noexcept" || pw == "alignas" || pw == "sizeof" ||
            pw == "throw") {
          q = close_of(q);
          continue;
        }
      }
      return std::nullopt;
    }
    if (!found) return std::nullopt;
    h.rparen = close_of(h.lparen);
    h.qualified = h.name > p && is(h.name - 1, "::");
    h.destructor = h.name > p && is(h.name - 1, "~");
    // Everything between the parameters and the body must be a valid tail.
    std::size_t q = h.rparen + 1;
    while (q < brace) {
      const auto w = t(q);
      if (w == "const" || w == "volatile" || w == "&" || w == "&&" || w == "final" ||
          w == "mutable" || w == "constexpr") {
        ++q;
      } else if (w == "override") {
        h.overrides = true;
        ++q;
      } else if (w == "noexcept" || w == "throw" || w == "__attribute__") {
        ++q;
        if (is(q, "(")) q = close_of(q) + 1;
      } else if (w == "[" && is(q + 1, "[")) {
        q = close_of(q) + 1;
      } else if (w == "->" || w == "requires") {
        q = brace;  // trailing return type / constraint
      } else if (lang_ == Language::java && w == "throws") {
        ++q;
        while (q < brace && (ident(q) || is(q, ".") || is(q, ","))) {
          ++q;
          if (is(q, "<")) q = skip_angles(q);
        }
      } else if (lang_ == Language::java && w == "[" ) {
        q = close_of(q) + 1;
      } else {
        return std::nullopt;
      }
    }
    if (lang_ == Language::java) {
      for (std::size_t a = start; a < h.name; ++a) {
        if (is(a, "@") && is(a + 1, "Override")) h.overrides = true;
      }
    }
    return h;
  }

  std::size_t open_brace(std::size_t start, std::size_t brace, std::size_t e, ScopeKind scope,
                         std::string_view class_name) {
    const std::size_t close = close_of(brace);
    if (lang_ == Language::cpp && scope != ScopeKind::class_) {
      std::size_t p = skip_prefixes(start, brace);
      if (is(p, "inline")) ++p;
      if (is(p, "namespace") || (is(p, "extern") && p + 1 < n() && k(p + 1) == TokenKind::string)) {
        scan_scope(brace + 1, close, ScopeKind::namespace_, {});
        return close + 1;
      }
    }
    const std::size_t class_kw = class_keyword(start, brace);
    std::optional<Header> head;
    if (lang_ == Language::cpp || class_kw == npos) head = function_header(start, brace);
    if (head && !(lang_ == Language::java && class_kw != npos)) {
      record_function(start, *head, brace, class_name);
      return close + 1;
    }
    if (class_kw != npos) {
      std::string_view name;
      for (std::size_t p = class_kw + 1; p < brace; ++p) {
        if (ident(p)) {
          name = t(p);
          break;
        }
      }
      const bool is_enum = t(class_kw) == "enum";
      if (is_enum && lang_ == Language::cpp) {
        // C++ enum bodies hold no functions.
      } else {
        scan_scope(brace + 1, close, is_enum ? ScopeKind::enum_ : ScopeKind::class_, name);
      }
      if (lang_ == Language::java) return close + 1;
      // C++: optional declarators up to ';'.
      std::size_t j = close + 1;
      while (j < e && !is(j, ";")) {
        if (is(j, "(") || is(j, "[") || is(j, "{")) j = close_of(j);
        ++j;
      }
      if (j >= e) fail(j, "expected ';' after class definition");
      return j + 1;
    }
    // Initializer block (Java), brace initializer, or lambda: skip the braces
    // and keep scanning the declaration.
    if (lang_ == Language::java) {
      // Initializer blocks and compact record constructors have no '='.
      bool assigns = false;
      for (std::size_t p = start; p < brace; ++p) {
        if (is(p, "(") || is(p, "[")) {
          p = close_of(p);
          continue;
        }
        if (is(p, "=")) assigns = true;
      }
      if (!assigns) return close + 1;
    }
    std::size_t j = close + 1;
    while (j < e && !is(j, ";")) {
      if (is(j, "(") || is(j, "[") || is(j, "{")) j = close_of(j);
      ++j;
    }
    if (j >= e) fail(j, "expected ';'");
    return j + 1;
  }

  void record_function(std::size_t start, const Header& h, std::size_t body_open,
                       std::string_view class_name) {
    Function f;
    f.begin = start;
    f.name = h.name;
    f.lparen = h.lparen;
    f.rparen = h.rparen;
    f.body_open = body_open;
    f.body_close = close_of(body_open);
    f.qualified = h.qualified;
    f.is_operator = h.is_operator;
    f.overrides = h.overrides;
    if (h.is_operator) {
      std::string name;
      for (std::size_t i = h.name; i < h.lparen; ++i) name += t(i);
      f.name_text = name;
    } else {
      f.name_text = std::string(t(h.name));
    }
    f.is_constructor = h.destructor || (!class_name.empty() && f.name_text == class_name) ||
                       (h.qualified && h.name >= 2 && t(h.name - 2) == t(h.name));
    std::size_t i = body_open;
    f.body = parse_statement(i, f.body_close + 1);
    unit_.functions.push_back(std::move(f));
  }

  // ---- statements -------------------------------------------------------------

  Stmt parse_statement(std::size_t& i, std::size_t end) {
    if (i >= end) fail(i, "expected statement");
    Stmt s;
    s.begin = i;
    const auto w = t(i);
    const TokenKind kind = k(i);
    if (kind == TokenKind::preprocessor) {
      s.kind = Kind::preprocessor;
      s.end = ++i;
      return s;
    }
    if (w == "{" && kind == TokenKind::punct) {
      s.kind = Kind::block;
      const std::size_t close = close_of(i);
      std::size_t j = i + 1;
      while (j < close) s.children.push_back(parse_statement(j, close));
      i = close + 1;
      s.end = i;
      return s;
    }
    if (w == ";" && kind == TokenKind::punct) {
      s.kind = Kind::empty;
      s.end = ++i;
      return s;
    }
    if (kind == TokenKind::keyword) {
      if (w == "if") {
        s.kind = Kind::if_;
        std::size_t p = i + 1;
        if (is(p, "constexpr")) ++p;
        if (is(p, "!") && is(p + 1, "consteval")) p += 2;
        if (is(p, "consteval")) {
          ++p;
        } else {
          expect_paren(p, s);
          p = s.rparen + 1;
        }
        s.children.push_back(parse_statement(p, end));
        if (is(p, "else")) {
          s.else_token = p;
          ++p;
          s.children.push_back(parse_statement(p, end));
        }
        i = p;
        s.end = i;
        return s;
      }
      if (w == "for") {
        std::size_t p = i + 1;
        expect_paren(p, s);
        int semis = 0;
        bool colon = false;
        for (std::size_t q = s.lparen + 1; q < s.rparen; ++q) {
          if (is(q, "(") || is(q, "[") || is(q, "{")) {
            q = close_of(q);
            continue;
          }
          if (is(q, ";")) ++semis;
          if (is(q, ":")) colon = true;
        }
        if (semis == 2) {
          s.kind = Kind::for_;
        } else if (semis == 0 && colon) {
          s.kind = Kind::foreach;
        } else if (semis == 1 && colon && lang_ == Language::cpp) {
          s.kind = Kind::foreach;  // C++20 init-statement
        } else {
          fail(s.lparen, "malformed for header");
        }
        p = s.rparen + 1;
        s.children.push_back(parse_statement(p, end));
        i = p;
        s.end = i;
        return s;
      }
      if (w == "while") {
        s.kind = Kind::while_;
        std::size_t p = i + 1;
        expect_paren(p, s);
        p = s.rparen + 1;
        s.children.push_back(parse_statement(p, end));
        i = p;
        s.end = i;
        return s;
      }
      if (w == "do") {
        s.kind = Kind::do_while;
        std::size_t p = i + 1;
        s.children.push_back(parse_statement(p, end));
        if (!is(p, "while")) fail(p, "expected 'while' after do body");
        ++p;
        expect_paren(p, s);
        p = s.rparen + 1;
        if (!is(p, ";")) fail(p, "expected ';' after do-while");
        i = p + 1;
        s.end = i;
        return s;
      }
      if (w == "switch" || (w == "synchronized" && lang_ == Language::java)) {
        s.kind = w == "switch" ? Kind::switch_ : Kind::synchronized_;
        std::size_t p = i + 1;
        expect_paren(p, s);
        p = s.rparen + 1;
        if (!is(p, "{")) fail(p, "expected '{'");
        s.children.push_back(parse_statement(p, end));
        i = p;
        s.end = i;
        return s;
      }
      if (w == "try") {
        s.kind = Kind::try_;
        std::size_t p = i + 1;
        if (lang_ == Language::java && is(p, "(")) p = close_of(p) + 1;
        if (!is(p, "{")) fail(p, "expected '{' after try");
        s.children.push_back(parse_statement(p, end));
        bool handled = false;
        while (is(p, "catch")) {
          ++p;
          if (!is(p, "(")) fail(p, "expected '(' after catch");
          p = close_of(p) + 1;
          if (!is(p, "{")) fail(p, "expected '{' after catch");
          s.children.push_back(parse_statement(p, end));
          handled = true;
        }
        if (lang_ == Language::java && is(p, "finally")) {
          ++p;
          if (!is(p, "{")) fail(p, "expected '{' after finally");
          s.children.push_back(parse_statement(p, end));
          handled = true;
        }
        if (!handled && !(lang_ == Language::java && is(i + 1, "("))) fail(p, "try without handler");
        i = p;
        s.end = i;
        return s;
      }
      if (w == "case" || w == "default") {
        s.kind = Kind::label;
        std::size_t p = i + 1;
        int ternary = 0;
        for (; p < end; ++p) {
          if (is(p, "(") || is(p, "[") || is(p, "{")) {
            p = close_of(p);
            continue;
          }
          if (is(p, "?")) ++ternary;
          if (is(p, ":")) {
            if (ternary == 0) break;
            --ternary;
          }
          if (lang_ == Language::java && is(p, "->")) break;
          if (is(p, ";")) fail(p, "expected ':' after case label");
        }
        if (p >= end) fail(p, "unterminated case label");
        i = p + 1;
        s.end = i;
        return s;
      }
      if (w == "else" || w == "catch" || w == "finally") fail(i, "unexpected '" + std::string(w) + "'");
      if (lang_ == Language::java && is_local_type(i, end)) {
        s.kind = Kind::local_type;
        std::size_t p = i;
        while (p < end && !is(p, "{")) ++p;
        if (p >= end) fail(i, "expected class body");
        i = close_of(p) + 1;
        s.end = i;
        return s;
      }
    }
    if (kind == TokenKind::identifier && is(i + 1, ":") && !is(i + 1, "::")) {
      s.kind = Kind::label;
      i += 2;
      s.end = i;
      return s;
    }
    if (lang_ == Language::java && kind == TokenKind::identifier && w == "record" && ident(i + 1)) {
      s.kind = Kind::local_type;
      std::size_t p = i;
      while (p < end && !is(p, "{")) {
        if (is(p, "(")) p = close_of(p);
        ++p;
      }
      if (p >= end) fail(i, "expected record body");
      i = close_of(p) + 1;
      s.end = i;
      return s;
    }
    if (w == "}" || w == ")" || w == "]") fail(i, "unexpected '" + std::string(w) + "'");
    s.kind = Kind::simple;
    std::size_t p = i;
    while (p < end && !is(p, ";")) {
      if (is(p, "(") || is(p, "[") || is(p, "{")) {
        p = close_of(p) + 1;
        continue;
      }
      if (is(p, "}")) fail(p, "expected ';'");
      ++p;
    }
    if (p >= end) fail(p, "expected ';'");
    i = p + 1;
    s.end = i;
    return s;
  }

  bool is_local_type(std::size_t i, std::size_t end) const {
    std::size_t p = i;
    while (p < end && (is(p, "final") || is(p, "abstract") || is(p, "static") || is(p, "strictfp"))) ++p;
    return is(p, "class") || is(p, "interface") || is(p, "enum");
  }

  void expect_paren(std::size_t p, Stmt& s) const {
    if (!is(p, "(")) fail(p, "expected '('");
    s.lparen = p;
    s.rparen = close_of(p);
  }

  Unit unit_;
  Language lang_;
  std::vector<std::size_t> match_;
};

}  // namespace

Unit parse_unit(std::string_view source, Language language) {
  return Parser(source, language).run();
}

}  // namespace memprobe::syntax::clike
