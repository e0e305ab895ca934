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

#include "memprobe/syntax/python_tree.hpp"

#include <string>

#include "memprobe/error.hpp"

namespace memprobe::syntax::py {

namespace {

bool is_operand(const Lexed& lx, std::size_t i) {
  const Token& t = lx.tokens[i];
  if (t.kind == TokenKind::identifier || t.kind == TokenKind::number || t.kind == TokenKind::string)
    return true;
  if (t.kind == TokenKind::keyword) {
    const auto w = lx.text(t);
    return w == "True" || w == "False" || w == "None";
  }
  return false;
}

bool closes_operand(const Lexed& lx, std::size_t i) {
  if (is_operand(lx, i)) return true;
  const auto w = lx.text(i);
  return lx.tokens[i].kind == TokenKind::punct && (w == ")" || w == "]" || w == "}");
}

bool is_binary_punct(std::string_view w) {
  static constexpr std::string_view kOps[] = {
      "=",  "+=", "-=", "*=", "/=", "//=", "%=", "**=", ">>=", "<<=", "&=", "|=", "^=", "@=",
      "+",  "-",  "*",  "/",  "//", "%",   "**", ">>",  "<<",  "&",  "|",  "^",  "@",  "<",
      ">",  "<=", ">=", "==", "!=", ".",   ":=", "->",  "~"};
  for (auto op : kOps) {
    if (w == op) return true;
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::string_view source) : lx_(lex(source, Language::python)) {}

  Module run() {
    std::vector<Stmt> body = parse_block(true);
    return Module{std::move(lx_), std::move(body)};
  }

 private:
  [[noreturn]] void fail(std::size_t token, const std::string& what) const {
    const std::size_t offset =
        token < lx_.tokens.size() ? lx_.tokens[token].begin : lx_.source.size();
    throw ParseFailure(Language::python, offset, what);
  }

  std::size_t n() const { return lx_.tokens.size(); }
  TokenKind kind(std::size_t i) const { return lx_.tokens[i].kind; }
  std::string_view text(std::size_t i) const { return lx_.text(i); }

  std::size_t skip_comments(std::size_t i) const {
    while (i < n() && kind(i) == TokenKind::comment) ++i;
    return i;
  }

  // Index of the NEWLINE ending the logical line starting at `from`.
  std::size_t line_end(std::size_t from) const {
    std::size_t i = from;
    while (i < n() && kind(i) != TokenKind::newline) ++i;
    if (i >= n()) fail(from, "missing end of line");
    return i;
  }

  // Previous code token before `i` (exclusive), or npos.
  std::size_t prev_code(std::size_t i, std::size_t floor) const {
    while (i > floor) {
      --i;
      if (kind(i) != TokenKind::comment) return i;
    }
    return npos;
  }

  std::vector<Stmt> parse_block(bool top) {
    std::vector<Stmt> out;
    while (true) {
      pos_ = skip_comments(pos_);
      if (pos_ >= n()) {
        if (!top) fail(pos_, "unexpected end of input in block");
        break;
      }
      if (kind(pos_) == TokenKind::dedent) {
        if (top) fail(pos_, "unexpected dedent");
        break;
      }
      if (kind(pos_) == TokenKind::indent) fail(pos_, "unexpected indent");
      if (kind(pos_) == TokenKind::newline) {
        ++pos_;
        continue;
      }
      parse_line(out);
    }
    check_clause_order(out);
    if (out.empty() && !top) fail(pos_, "expected an indented block");
    return out;
  }

  std::string_view compound_keyword(std::size_t start, std::size_t nl) const {
    const auto w = text(start);
    if (kind(start) == TokenKind::keyword && is_compound_keyword(w)) return w;
    if (w == "async" && start + 1 < nl) {
      const auto next = text(start + 1);
      if (next == "def" || next == "for" || next == "with") return next;
    }
    if (kind(start) == TokenKind::identifier && (w == "match" || w == "case")) {
      // Soft keyword: header ending in ':' followed by an indented block.
      const std::size_t last = prev_code(nl, start);
      if (last != npos && last != start && text(last) == ":" && ends_line_with_block(nl)) {
        const auto second = text(start + 1);
        if (second != "=" && second != "." && second != "(" && second != "[") return w;
        if (second == "(" || second == "[") return w;
      }
    }
    return {};
  }

  bool ends_line_with_block(std::size_t nl) const {
    const std::size_t next = skip_comments(nl + 1);
    return next < n() && kind(next) == TokenKind::indent;
  }

  std::size_t find_top_level(std::size_t from, std::size_t to, std::string_view what) const {
    int depth = 0;
    for (std::size_t i = from; i < to; ++i) {
      if (kind(i) == TokenKind::comment) continue;
      const auto w = text(i);
      if (depth == 0 && w == what) return i;
      if (kind(i) == TokenKind::punct) {
        if (w == "(" || w == "[" || w == "{") {
          ++depth;
        } else if (w == ")" || w == "]" || w == "}") {
          --depth;
        } else if (depth == 0 && w == what) {
          return i;
        }
      } else if (depth == 0 && w == what) {
        return i;
      }
    }
    return npos;
  }

  // Colon ending a compound header. Lambdas at depth 0 consume one colon each.
  std::size_t header_colon(std::size_t start, std::size_t nl, std::string_view keyword) const {
    std::size_t from = start + 1;
    if (keyword == "def") {
      const std::size_t lp = find_top_level(start, nl, "(");
      if (lp == npos) fail(start, "expected '(' after function name");
      from = matching(lp) + 1;
    }
    int depth = 0;
    int pending_lambdas = 0;
    for (std::size_t i = from; i < nl; ++i) {
      if (kind(i) == TokenKind::comment) continue;
      const auto w = text(i);
      if (kind(i) == TokenKind::punct) {
        if (w == "(" || w == "[" || w == "{") {
          ++depth;
        } else if (w == ")" || w == "]" || w == "}") {
          --depth;
        } else if (depth == 0 && w == ":") {
          if (pending_lambdas > 0) {
            --pending_lambdas;
            continue;
          }
          return i;
        }
      } else if (depth == 0 && w == "lambda") {
        ++pending_lambdas;
      }
    }
    return npos;
  }

  std::size_t matching(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < n(); ++i) {
      if (kind(i) != TokenKind::punct) continue;
      const auto w = text(i);
      if (w == "(" || w == "[" || w == "{") ++depth;
      if (w == ")" || w == "]" || w == "}") {
        if (--depth == 0) return i;
      }
    }
    fail(open, "unbalanced bracket");
  }

  void parse_line(std::vector<Stmt>& out) {
    const std::size_t start = pos_;
    const std::size_t nl = line_end(start);
    const auto first = text(start);

    if (kind(start) == TokenKind::punct && first == "@") {
      Stmt s;
      s.begin = start;
      s.end = nl;
      s.last = prev_code(nl, start);
      s.keyword = "@";
      if (s.last == start) fail(start, "empty decorator");
      check_expression(start + 1, nl);
      out.push_back(std::move(s));
      pos_ = nl + 1;
      return;
    }

    const std::string_view keyword = compound_keyword(start, nl);
    if (!keyword.empty()) {
      Stmt s;
      s.begin = start;
      s.keyword = keyword;
      const std::size_t colon = header_colon(start, nl, keyword);
      if (colon == npos) fail(start, "expected ':'");
      s.colon = colon;
      s.end = colon + 1;
      check_header(s, start, colon);
      const std::size_t after = skip_comments(colon + 1);
      if (after == nl) {
        pos_ = nl + 1;
        pos_ = skip_comments(pos_);
        if (pos_ >= n() || kind(pos_) != TokenKind::indent) fail(pos_, "expected an indented block");
        ++pos_;
        s.body = parse_block(false);
        pos_ = skip_comments(pos_);
        if (pos_ >= n() || kind(pos_) != TokenKind::dedent) fail(pos_, "expected dedent");
        ++pos_;
        s.last = s.body.back().last;
      } else {
        s.inline_body = true;
        split_simple(after, nl, s.body);
        for (const Stmt& child : s.body) {
          if (is_compound_keyword(child.keyword)) fail(child.begin, "compound statement after ':'");
        }
        s.last = prev_code(nl, start);
        pos_ = nl + 1;
      }
      out.push_back(std::move(s));
      return;
    }

    split_simple(start, nl, out);
    pos_ = nl + 1;
  }

  void split_simple(std::size_t start, std::size_t nl, std::vector<Stmt>& out) {
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    std::size_t part_begin = start;
    int depth = 0;
    for (std::size_t i = start; i < nl; ++i) {
      if (kind(i) != TokenKind::punct) continue;
      const auto w = text(i);
      if (w == "(" || w == "[" || w == "{") ++depth;
      if (w == ")" || w == "]" || w == "}") --depth;
      if (depth == 0 && w == ";") {
        parts.emplace_back(part_begin, i);
        part_begin = i + 1;
      }
    }
    if (skip_comments(part_begin) < nl) parts.emplace_back(part_begin, nl);
    if (parts.empty()) fail(start, "empty statement");
    for (auto [b, e] : parts) {
      b = skip_comments(b);
      const std::size_t last = prev_code(e, b);
      if (b >= e || last == npos) fail(b, "empty statement");
      if (kind(b) == TokenKind::keyword && is_compound_keyword(text(b)))
        fail(b, "compound statement keyword in simple statement");
      Stmt s;
      s.begin = b;
      s.end = e;
      s.last = last;
      s.shares_line = parts.size() > 1;
      if (kind(b) == TokenKind::keyword) s.keyword = text(b);
      check_simple(s);
      out.push_back(std::move(s));
    }
  }

  void check_simple(const Stmt& s) {
    const auto w = text(s.begin);
    if (kind(s.begin) == TokenKind::punct) {
      if (w == ")" || w == "]" || w == "}" || w == "," || w == ":" || is_binary_punct(w)) {
        if (w != "-" && w != "+" && w != "~" && w != "*")
          fail(s.begin, "statement cannot start with '" + std::string(w) + "'");
      }
    }
    const auto last = text(s.last);
    if (kind(s.last) == TokenKind::punct && (is_binary_punct(last) || last == "(" ||
                                             last == "[" || last == "{" || last == ":")) {
      fail(s.last, "statement cannot end with '" + std::string(last) + "'");
    }
    if (kind(s.last) == TokenKind::keyword) {
      static constexpr std::string_view kDangling[] = {"and", "or", "not", "in", "is", "if",
                                                       "else", "lambda", "import", "as", "from"};
      for (auto d : kDangling) {
        if (last == d) fail(s.last, "statement cannot end with '" + std::string(last) + "'");
      }
    }
    std::size_t from = s.begin;
    if (kind(s.begin) == TokenKind::identifier && (w == "type" || w == "print")) {
      // `type X = ...` soft keyword; a bare print statement is still rejected below.
      if (w == "type") from = s.begin + 1;
    }
    check_expression(from, s.end);
  }

  // Two operands may not be adjacent (except implicit string concatenation).
  void check_expression(std::size_t from, std::size_t to) const {
    std::size_t prev = npos;
    for (std::size_t i = from; i < to; ++i) {
      if (kind(i) == TokenKind::comment) continue;
      if (prev != npos && closes_operand(lx_, prev) && is_operand(lx_, i)) {
        const bool strings = kind(prev) == TokenKind::string && kind(i) == TokenKind::string;
        if (!strings) fail(i, "invalid syntax near '" + std::string(text(i)) + "'");
      }
      prev = i;
    }
  }

  void check_header(const Stmt& s, std::size_t start, std::size_t colon) {
    std::size_t kw = start;
    if (text(start) == "async") kw = start + 1;
    const std::size_t body = kw + 1;
    const auto k = s.keyword;
    if (k == "else" || k == "try" || k == "finally") {
      if (body != colon) fail(body, "expected ':' after '" + std::string(k) + "'");
      return;
    }
    if (k == "if" || k == "elif" || k == "while" || k == "with" || k == "match" || k == "case") {
      if (body >= colon) fail(colon, "expected expression");
      check_expression(body, colon);
      return;
    }
    if (k == "for") {
      const std::size_t in = find_top_level(body, colon, "in");
      if (in == npos || in == body || in + 1 >= colon) fail(body, "malformed for header");
      check_expression(body, in);
      check_expression(in + 1, colon);
      return;
    }
    if (k == "def") {
      if (body >= colon || kind(body) != TokenKind::identifier) fail(body, "expected function name");
      std::size_t lp = body + 1;
      if (lp < colon && text(lp) == "[") lp = matching(lp) + 1;  // type parameters
      if (lp >= colon || text(lp) != "(") fail(lp, "expected '('");
      const std::size_t rp = matching(lp);
      if (rp + 1 != colon) {
        if (text(rp + 1) != "->" || rp + 2 >= colon) fail(rp + 1, "unexpected token after parameters");
        check_expression(rp + 2, colon);
      }
      return;
    }
    if (k == "class") {
      if (body >= colon || kind(body) != TokenKind::identifier) fail(body, "expected class name");
      std::size_t next = body + 1;
      if (next < colon && text(next) == "[") next = matching(next) + 1;
      if (next < colon) {
        if (text(next) != "(" || matching(next) + 1 != colon) fail(next, "malformed class header");
      }
      return;
    }
    if (k == "except") {
      if (body < colon) check_expression(body, colon);
      return;
    }
  }

  void check_clause_order(const std::vector<Stmt>& stmts) const {
    // What may follow the previous statement.
    enum class Open { none, if_chain, loop, try_body, try_except, try_else };
    Open open = Open::none;
    bool prev_decorator = false;
    for (const Stmt& s : stmts) {
      const auto k = s.keyword;
      if (prev_decorator && k != "@" && k != "def" && k != "class")
        fail(s.begin, "decorator must precede a definition");
      if (open == Open::try_body && k != "except" && k != "finally")
        fail(s.begin, "expected 'except' or 'finally'");
      if (k == "elif") {
        if (open != Open::if_chain) fail(s.begin, "'elif' without 'if'");
      } else if (k == "else") {
        if (open == Open::if_chain || open == Open::loop) {
          open = Open::none;
          prev_decorator = false;
          continue;
        }
        if (open != Open::try_except) fail(s.begin, "'else' without matching statement");
        open = Open::try_else;
        continue;
      } else if (k == "except") {
        if (open != Open::try_body && open != Open::try_except) fail(s.begin, "'except' without 'try'");
        open = Open::try_except;
        continue;
      } else if (k == "finally") {
        if (open != Open::try_body && open != Open::try_except && open != Open::try_else)
          fail(s.begin, "'finally' without 'try'");
        open = Open::none;
        continue;
      }
      prev_decorator = k == "@";
      if (k == "if" || k == "elif") {
        open = Open::if_chain;
      } else if (k == "for" || k == "while") {
        open = Open::loop;
      } else if (k == "try") {
        open = Open::try_body;
      } else {
        open = Open::none;
      }
    }
    if (open == Open::try_body) fail(pos_, "expected 'except' or 'finally'");
    if (prev_decorator) fail(pos_, "decorator must precede a definition");
  }

  Lexed lx_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_compound_keyword(std::string_view keyword) {
  return keyword == "if" || keyword == "elif" || keyword == "else" || keyword == "for" ||
         keyword == "while" || keyword == "try" || keyword == "except" || keyword == "finally" ||
         keyword == "with" || keyword == "def" || keyword == "class" || keyword == "match" ||
         keyword == "case";
}

Module parse(std::string_view source) { return Parser(source).run(); }

}  // namespace memprobe::syntax::py
