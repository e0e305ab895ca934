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

// Statement rewrites for Python functions.
#include <algorithm>
#include <set>

#include "memprobe/syntax/python_tree.hpp"
#include "mutator/t3_sites.hpp"
#include "mutator/text_util.hpp"

namespace memprobe::mutator {
namespace {

using syntax::TokenKind;
using syntax::py::Stmt;

constexpr Language kPy = Language::python;

bool aug_op(std::string_view w) {
  return w == "+=" || w == "-=" || w == "*=" || w == "/=" || w == "//=" || w == "%=" || w == "**=" ||
         w == "&=" || w == "|=" || w == "^=" || w == "<<=" || w == ">>=";
}

bool assign_op(std::string_view w) { return w == "=" || w == ":=" || aug_op(w); }

int op_prec(std::string_view op) {
  if (op == "**") return 14;
  if (op == "*" || op == "/" || op == "//" || op == "%") return 13;
  if (op == "+" || op == "-") return 12;
  if (op == "<<" || op == ">>") return 11;
  if (op == "&") return 9;
  if (op == "^") return 8;
  if (op == "|") return 7;
  return 0;
}

bool fstring(std::string_view literal) {
  for (char c : literal) {
    if (c == '"' || c == '\'') return false;
    if (c == 'f' || c == 'F') return true;
  }
  return false;
}

struct Negation {
  std::string text;
  int prec = 100;
};

class Catalog {
 public:
  explicit Catalog(std::string_view text) : text_(text), module_(syntax::py::parse(text)) {
    const auto& toks = module_.lexed.tokens;
    v_.src = text;
    to_code_.assign(toks.size() + 1, 0);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      to_code_[i] = v_.code.size();
      if (syntax::is_code(toks[i].kind)) v_.code.push_back(toks[i]);
    }
    to_code_[toks.size()] = v_.code.size();
    v_.build_match();
    unit_indent_ = indent_unit(text);
  }

  std::vector<Edit> run() {
    for (const auto& s : module_.body) {
      if (s.keyword == "def") {
        fn_b_ = c(s.begin);
        fn_e_ = c(s.last) + 1;
        walk(s.body);
        break;
      }
    }
    std::stable_sort(out_.begin(), out_.end(),
                     [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
    return std::move(out_);
  }

 private:
  std::size_t c(std::size_t lexed_index) const { return to_code_[lexed_index]; }
  std::size_t off(std::size_t i) const { return v_.code[i].begin; }
  std::size_t end_off(std::size_t i) const { return v_.code[i].end; }
  std::string_view between(std::size_t from, std::size_t to) const { return text_.substr(from, to - from); }
  std::string indent_of(std::size_t i) const { return std::string(line_indent(text_, off(i))); }
  std::string span(std::size_t b, std::size_t e) const { return std::string(v_.span(b, e)); }

  void emit(std::size_t begin, std::size_t end, std::string text, Pattern p) {
    out_.push_back({begin, end, std::move(text), p});
  }

  bool contains(std::size_t b, std::size_t e, std::string_view w) const {
    for (std::size_t i = b; i < e; ++i)
      if (v_.is(i, w)) return true;
    return false;
  }

  // ---- traversal ---------------------------------------------------------------

  void walk(const std::vector<Stmt>& body) {
    for (std::size_t k = 0; k < body.size(); ++k) {
      const Stmt& s = body[k];
      const Stmt* next = k + 1 < body.size() ? &body[k + 1] : nullptr;
      const std::size_t b = c(s.begin);
      const bool own_line = !s.shares_line && starts_line(text_, off(b));
      const auto kw = s.keyword;
      if (syntax::py::is_compound_keyword(kw)) {
        if (s.inline_body || s.colon == npos) continue;
        const std::size_t colon = c(s.colon);
        if (kw == "if" || kw == "elif") {
          de_morgan(s, next);
          if (kw == "if") conditional_reverse(s, next);
        }
        if (kw == "for" && own_line) {
          for_to_while(s, next);
          for_iter_to_while(s, next);
        }
        if ((kw == "if" || kw == "while" || kw == "for") && own_line) extract_literal(b, b + 1, colon);
        if ((kw == "if" || kw == "for") && own_line) header_call_chain(s);
        if (kw != "class") walk(s.body);
        continue;
      }
      if (kw == "@" || kw == "global" || kw == "nonlocal" || kw == "import" || kw == "from" || kw == "del")
        continue;
      const std::size_t e = c(s.last) + 1;
      aug_forward(b, e);
      aug_reverse(b, e);
      if (!own_line) continue;
      conditional_forward(b, e);
      extract_literal(b, b, e);
      call_chain(b, e);
    }
  }

  // Top-level assignment operators in [b, e).
  std::vector<std::size_t> assigns(std::size_t b, std::size_t e) const {
    std::vector<std::size_t> out;
    for (std::size_t i = b; i < e; ++i) {
      if (v_.open(i) && v_.match[i] != npos && v_.match[i] < e) {
        i = v_.match[i];
        continue;
      }
      if (v_.is(i, "lambda")) break;  // defaults after this are not assignments
      if (assign_op(v_.text(i))) out.push_back(i);
    }
    return out;
  }

  // `a`, `a.b`, `a[i]`; no calls.
  bool simple_target(std::size_t b, std::size_t e) const {
    if (b >= e || !v_.ident(b)) return false;
    for (std::size_t i = b + 1; i < e;) {
      if (v_.is(i, ".") && v_.ident(i + 1)) {
        i += 2;
      } else if (v_.is(i, "[") && v_.match[i] != npos && v_.match[i] < e) {
        if (contains(i, v_.match[i], "(")) return false;
        i = v_.match[i] + 1;
      } else {
        return false;
      }
    }
    return true;
  }

  // `name` starts out as a number or string literal somewhere in the function,
  // so `name op= e` cannot mutate a shared object.
  bool scalar_name(std::string_view name) const {
    for (std::size_t j = fn_b_; j + 2 < fn_e_; ++j) {
      if (v_.text(j) != name || !v_.is(j + 1, "=")) continue;
      if (j > 0 && v_.code[j - 1].line == v_.code[j].line) continue;
      std::size_t lit = j + 2;
      if (v_.is(lit, "-")) ++lit;
      if (lit >= fn_e_) continue;
      const auto kind = v_.code[lit].kind;
      if (kind != TokenKind::number && !(kind == TokenKind::string && !fstring(v_.text(lit)))) continue;
      if (lit + 1 < v_.code.size() && v_.code[lit + 1].line == v_.code[lit].line) continue;
      return true;
    }
    return false;
  }

  bool number_only(std::size_t b, std::size_t e) const {
    return e == b + 1 && v_.code[b].kind == TokenKind::number;
  }

  // ---- aug_assign ----------------------------------------------------------------

  void aug_forward(std::size_t b, std::size_t e) {
    const auto ops = assigns(b, e);
    if (ops.size() != 1 || ops[0] != b + 1 || !aug_op(v_.text(b + 1)) || !v_.ident(b) || b + 2 >= e) return;
    if (!number_only(b + 2, e) && !scalar_name(v_.text(b))) return;
    const auto full = v_.text(b + 1);
    const std::string op(full.substr(0, full.size() - 1));
    std::string rhs = span(b + 2, e);
    if (root_prec(v_, b + 2, e, kPy) <= op_prec(op) && !wrapped_in_parens(v_, b + 2, e)) rhs = "(" + rhs + ")";
    const std::string name(v_.text(b));
    emit(off(b), end_off(e - 1), name + " = " + name + " " + op + " " + rhs, Pattern::aug_assign);
  }

  void aug_reverse(std::size_t b, std::size_t e) {
    const auto ops = assigns(b, e);
    if (ops.size() != 1 || ops[0] != b + 1 || !v_.is(b + 1, "=") || !v_.ident(b)) return;
    if (b + 4 >= e + 0 || v_.text(b + 2) != v_.text(b)) return;
    const std::size_t op = b + 3;
    const int p = op_prec(v_.text(op));
    if (p == 0 || binary_prec(v_, b + 2, op, kPy) == 0 || op + 1 >= e) return;
    if (root_prec(v_, op + 1, e, kPy) <= p) return;
    if (!number_only(op + 1, e) && !scalar_name(v_.text(b))) return;
    emit(off(b), end_off(e - 1),
         std::string(v_.text(b)) + " " + std::string(v_.text(op)) + "= " + span(op + 1, e),
         Pattern::aug_assign);
  }

  // ---- loop_form -----------------------------------------------------------------

  bool rebinds(std::size_t b, std::size_t e, std::string_view name) const {
    for (std::size_t i = b; i < e; ++i) {
      if (v_.text(i) != name) continue;
      if (i + 1 < e && assign_op(v_.text(i + 1))) return true;
      if (i > b && (v_.is(i - 1, "for") || v_.is(i - 1, "as") || v_.is(i - 1, "del") || v_.is(i - 1, ",")))
        return true;
      if (i + 1 < e && v_.is(i + 1, ",")) return true;  // tuple targets
    }
    return false;
  }

  static bool ends_abruptly(const Stmt& s, const Catalog& self) {
    const auto kw = s.keyword;
    if (kw == "return" || kw == "break" || kw == "raise" || kw == "continue") return true;
    (void)self;
    return false;
  }

  void for_to_while(const Stmt& s, const Stmt* next) {
    const std::size_t b = c(s.begin), colon = c(s.colon), last = c(s.last);
    if (next && next->keyword == "else") return;
    if (!v_.ident(b + 1) || !v_.is(b + 2, "in") || !v_.is(b + 3, "range") || !v_.is(b + 4, "(")) return;
    const std::size_t close = v_.match[b + 4];
    if (close == npos || close + 1 != colon || s.body.empty()) return;
    if (ends_abruptly(s.body.back(), *this)) return;
    const std::string_view var = v_.text(b + 1);
    const std::size_t body_b = colon + 1, body_e = last + 1;
    if (contains(body_b, body_e, "continue") || contains(body_b, body_e, "yield")) return;
    for (std::size_t j = fn_b_; j < fn_e_; ++j)
      if ((j < b || j > last) && v_.text(j) == var) return;
    if (rebinds(body_b, body_e, var)) return;

    auto args = top_level(v_, b + 5, close, ",");
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    std::size_t from = b + 5;
    args.push_back(close);
    for (std::size_t a : args) {
      if (a <= from) return;
      parts.emplace_back(from, a);
      from = a + 1;
    }
    if (parts.empty() || parts.size() > 3) return;
    std::string start = "0", step = "1";
    auto [end_b, end_e] = parts.size() == 1 ? parts[0] : parts[1];
    if (parts.size() >= 2) start = span(parts[0].first, parts[0].second);
    if (parts.size() == 3) {
      auto [sb, se] = parts[2];
      if (se != sb + 1 || v_.code[sb].kind != TokenKind::number) return;
      const auto w = v_.text(sb);
      if (w.find_first_not_of("0123456789") != std::string_view::npos || w == "0") return;
      step = std::string(w);
    }
    // The bound is re-evaluated on every test; it must not change in the body.
    for (std::size_t i = end_b; i < end_e; ++i) {
      const auto w = v_.text(i);
      if (v_.is(i, "len") && v_.is(i + 1, "(") && v_.ident(i + 2) && v_.is(i + 3, ")")) {
        const auto seq = v_.text(i + 2);
        for (std::size_t j = body_b; j < body_e; ++j) {
          if (v_.text(j) != seq) continue;
          if (!v_.is(j + 1, "[") || v_.is(j - 1, "del") || v_.is(j - 1, ".")) return;
        }
        if (rebinds(body_b, body_e, seq)) return;
        i += 3;
        continue;
      }
      if (v_.ident(i)) {
        if (w == var || rebinds(body_b, body_e, w)) return;
        continue;
      }
      if (v_.code[i].kind == TokenKind::number || w == "+" || w == "-" || w == "*" || w == "//") continue;
      return;
    }
    std::string bound = span(end_b, end_e);
    if (root_prec(v_, end_b, end_e, kPy) <= 6) bound = "(" + bound + ")";

    const std::string ind = indent_of(b);
    const std::string body_ind = indent_of(c(s.body.front().begin));
    const std::size_t stop = line_end(text_, off(last));
    std::string out = std::string(var) + " = " + start + "\n" + ind + "while " + std::string(var) + " < " +
                      bound + ":";
    out += between(end_off(colon), stop);
    const std::string inc = body_ind + std::string(var) + " += " + step;
    if (!out.empty() && out.back() == '\n') out += inc + "\n";
    else out += "\n" + inc;
    emit(off(b), stop, std::move(out), Pattern::loop_form);
  }

  // ---- conditional -----------------------------------------------------------------

  // Expression start and the assignment prefix (`target = ` / `return `).
  bool split_target(std::size_t b, std::size_t e, std::size_t& xb, std::string& target) const {
    if (v_.is(b, "return")) {
      xb = b + 1;
      target = "return ";
      return xb < e;
    }
    const auto ops = assigns(b, e);
    if (ops.size() != 1 || !v_.is(ops[0], "=") || !simple_target(b, ops[0])) return false;
    xb = ops[0] + 1;
    target = span(b, ops[0]) + " = ";
    return xb < e;
  }

  void conditional_forward(std::size_t b, std::size_t e) {
    std::size_t xb;
    std::string target;
    if (!split_target(b, e, xb, target)) return;
    if (!top_level(v_, xb, e, "lambda").empty() || !top_level(v_, xb, e, "yield").empty()) return;
    std::size_t q = npos;
    for (auto i : top_level(v_, xb, e, "if"))
      if (binary_prec(v_, xb, i, kPy) > 0) {
        q = i;
        break;
      }
    if (q == npos) return;
    std::size_t el = npos;
    for (auto i : top_level(v_, q + 1, e, "else")) {
      el = i;
      break;
    }
    if (el == npos || el == q + 1 || el + 1 >= e || q == xb) return;
    const std::string ind = indent_of(b), inner = ind + unit_indent_;
    std::string out = "if " + span(q + 1, el) + ":\n" + inner + target + span(xb, q) + "\n" + ind +
                      "else:\n" + inner + target + span(el + 1, e);
    emit(off(b), end_off(e - 1), std::move(out), Pattern::conditional);
  }

  bool has_comment(std::size_t lexed_b, std::size_t lexed_e) const {
    for (std::size_t i = lexed_b; i < lexed_e && i < module_.lexed.tokens.size(); ++i)
      if (module_.lexed.tokens[i].kind == TokenKind::comment) return true;
    return false;
  }

  std::string paren_if(std::size_t b, std::size_t e, int at_most) const {
    std::string t = span(b, e);
    if (root_prec(v_, b, e, kPy) <= at_most && !wrapped_in_parens(v_, b, e)) return "(" + t + ")";
    return t;
  }

  void conditional_reverse(const Stmt& s, const Stmt* next) {
    if (!next || next->keyword != "else" || next->inline_body) return;
    if (s.body.size() != 1 || next->body.size() != 1) return;
    const Stmt& a = s.body[0];
    const Stmt& o = next->body[0];
    if (!a.keyword.empty() && a.keyword != "return") return;
    if (!o.keyword.empty() && o.keyword != "return") return;
    if (has_comment(s.begin, next->last + 1)) return;
    const std::size_t ab = c(a.begin), ae = c(a.last) + 1, ob = c(o.begin), oe = c(o.last) + 1;
    std::size_t ax, ox;
    std::string at, ot;
    if (!split_target(ab, ae, ax, at) || !split_target(ob, oe, ox, ot)) return;
    if (ax - ab != ox - ob) return;
    for (std::size_t i = 0; i < ax - ab; ++i)
      if (v_.text(ab + i) != v_.text(ob + i)) return;
    const std::size_t cb = c(s.begin) + 1, ce = c(s.colon);
    if (contains(cb, ce, ":=")) return;
    std::string out = at + paren_if(ax, ae, 2) + " if " + paren_if(cb, ce, 2) + " else " + paren_if(ox, oe, 1);
    emit(off(c(s.begin)), end_off(c(next->last)), std::move(out), Pattern::conditional);
  }

  // ---- extract_literal -------------------------------------------------------------

  void extract_literal(std::size_t stmt_b, std::size_t b, std::size_t e) {
    bool docstring = true;
    for (std::size_t i = b; i < e; ++i)
      if (v_.code[i].kind != TokenKind::string) docstring = false;
    if (docstring) return;
    const std::size_t line = line_begin(text_, off(stmt_b));
    const std::string ind = indent_of(stmt_b);
    for (std::size_t i = b; i < e; ++i) {
      const auto kind = v_.code[i].kind;
      if (kind != TokenKind::number && kind != TokenKind::string) continue;
      const auto w = v_.text(i);
      if (trivial_literal(w)) continue;
      if (kind == TokenKind::string) {
        if (fstring(w)) continue;
        if ((i > 0 && v_.code[i - 1].kind == TokenKind::string) ||
            (i + 1 < v_.code.size() && v_.code[i + 1].kind == TokenKind::string))
          continue;
      }
      const std::string name = kind == TokenKind::number
                                   ? fresh_name(v_, kPy, {"limit", "factor", "offset", "base", "width", "step", "scale", "bound"})
                                   : fresh_name(v_, kPy, {"label", "prefix", "text", "marker", "message", "pattern"});
      emit(line, end_off(i), ind + name + " = " + std::string(w) + "\n" + std::string(between(line, off(i))) + name,
           Pattern::extract_literal);
    }
  }

  // ---- de_morgan -------------------------------------------------------------------

  Negation negate(std::size_t b, std::size_t e) const {
    if (wrapped_in_parens(v_, b, e)) return negate(b + 1, e - 1);
    const int root = root_prec(v_, b, e, kPy);
    const std::string all = span(b, e);
    if (v_.is(b, "not") && root_prec(v_, b + 1, e, kPy) > 5) {
      if (wrapped_in_parens(v_, b + 1, e)) return {span(b + 2, e - 1), root_prec(v_, b + 2, e - 1, kPy)};
      return {span(b + 1, e), root_prec(v_, b + 1, e, kPy)};
    }
    if (root == 3 || root == 4) {
      const auto ops = top_level(v_, b, e, root == 3 ? "or" : "and");
      const std::string joiner = root == 3 ? " and " : " or ";
      const int bound = root == 3 ? 4 : 3;
      std::string out;
      std::size_t part = b;
      for (std::size_t k = 0; k <= ops.size(); ++k) {
        const std::size_t pe = k < ops.size() ? ops[k] : e;
        if (pe <= part) return {"not (" + all + ")", 5};
        auto n = negate(part, pe);
        if (!out.empty()) out += joiner;
        out += n.prec <= bound ? "(" + n.text + ")" : n.text;
        part = pe + 1;
      }
      return {out, bound};
    }
    if (root == 6) {
      std::size_t k = npos;
      int count = 0;
      for (std::size_t i = b; i < e; ++i) {
        if (v_.open(i) && v_.match[i] != npos && v_.match[i] < e) {
          i = v_.match[i];
          continue;
        }
        if (binary_prec(v_, b, i, kPy) == 6) {
          k = i;
          ++count;
        }
      }
      if (count == 1) {
        const auto w = v_.text(k);
        std::size_t after = k + 1;
        std::string flipped;
        if (w == "==") flipped = "!=";
        else if (w == "!=") flipped = "==";
        else if (w == "in") flipped = "not in";
        else if (w == "not") flipped = "in", after = k + 2;
        else if (w == "is" && v_.is(k + 1, "not")) flipped = "is", after = k + 2;
        else if (w == "is") flipped = "is not";
        if (!flipped.empty()) return {span(b, k) + " " + flipped + " " + span(after, e), 6};
      }
    }
    if (root > 5) return {"not " + all, 5};
    return {"not (" + all + ")", 5};
  }

  void de_morgan(const Stmt& s, const Stmt* next) {
    if (!next || next->keyword != "else" || next->inline_body || next->colon == npos) return;
    const std::size_t b = c(s.begin), colon = c(s.colon);
    if (colon <= b + 1 || contains(b + 1, colon, ":=") || root_prec(v_, b + 1, colon, kPy) <= 2) return;
    const std::size_t else_kw = c(next->begin), else_colon = c(next->colon), else_last = c(next->last);
    const std::size_t then_b = line_end(text_, off(colon));
    const std::size_t else_line = line_begin(text_, off(else_kw));
    const std::size_t else_b = line_end(text_, off(else_colon));
    const std::size_t stop = line_end(text_, off(else_last));
    if (then_b > else_line || else_b > stop) return;
    std::string else_body(between(else_b, stop));
    std::string then_body(between(then_b, else_line));
    const bool final_newline = !else_body.empty() && else_body.back() == '\n';
    if (!final_newline) else_body += "\n";
    if (!final_newline && !then_body.empty() && then_body.back() == '\n') then_body.pop_back();
    std::string out(between(off(b), off(b + 1)));
    out += negate(b + 1, colon).text;
    out += between(end_off(colon - 1), then_b);
    out += else_body;
    out += between(else_line, else_b);
    out += then_body;
    emit(off(b), stop, std::move(out), Pattern::de_morgan);
  }

  // ---- call_chain ------------------------------------------------------------------

  // End of the postfix chain starting at `b`; collects its call parentheses.
  std::size_t chain_end(std::size_t b, std::size_t e, std::vector<std::size_t>& calls) const {
    std::size_t i = b + 1;
    while (i < e) {
      if (v_.is(i, ".") && v_.ident(i + 1)) {
        i += 2;
      } else if ((v_.is(i, "(") || v_.is(i, "[")) && v_.match[i] != npos && v_.match[i] < e) {
        if (v_.is(i, "(")) calls.push_back(i);
        i = v_.match[i] + 1;
      } else {
        break;
      }
    }
    return i;
  }

  bool hoistable(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      const auto w = v_.text(i);
      if (w == "lambda" || w == "yield" || w == "await" || w == ":=") return false;
      if (v_.open(i) && v_.match[i] != npos && !top_level(v_, i + 1, v_.match[i], "for").empty()) return false;
    }
    return true;
  }

  // Calls in [rb, re) evaluated first and unconditionally; see the C-family
  // catalog. `whole_b` starts an expression that must stay inline.
  void hoist_sites(std::size_t stmt_b, std::size_t rb, std::size_t re, std::size_t whole_b) {
    std::vector<std::pair<std::size_t, std::size_t>> hoists;
    for (std::size_t i = rb; i < re; ++i) {
      const auto w = v_.text(i);
      if (w == "and" || w == "or" || w == "if" || w == "else" || w == "lambda" || w == "yield" ||
          w == "await" || w == ":=" || w == "for")
        break;
      if (v_.open(i) && v_.match[i] != npos && !top_level(v_, i + 1, v_.match[i], "for").empty()) break;
      if (w == ")") {
        const std::size_t o = v_.match[i];
        if (o != npos && o > 0 && (v_.ident(o - 1) || v_.is(o - 1, ")") || v_.is(o - 1, "]") ||
                                   v_.code[o - 1].kind == TokenKind::string))
          break;
        continue;
      }
      if (!v_.ident(i) || (i > 0 && v_.is(i - 1, "."))) continue;
      std::vector<std::size_t> calls;
      const std::size_t ce = chain_end(i, re, calls);
      if (calls.empty()) continue;
      if (!(i == whole_b && ce == re) && hoistable(i, ce)) hoists.emplace_back(i, ce);
      const std::size_t first_close = v_.match[calls.front()];
      if (calls.size() > 1 && v_.is(first_close + 1, ".") && hoistable(i, first_close + 1))
        hoists.emplace_back(i, first_close + 1);
    }
    const std::size_t line = line_begin(text_, off(stmt_b));
    const std::string ind = indent_of(stmt_b);
    for (auto [hb, he] : hoists) {
      const std::string name = fresh_name(v_, kPy, {"tmp", "temp", "value", "current", "item", "res"});
      emit(line, end_off(he - 1),
           ind + name + " = " + span(hb, he) + "\n" + std::string(between(line, off(hb))) + name,
           Pattern::call_chain);
    }
  }

  void call_chain(std::size_t b, std::size_t e) {
    if (v_.is(b, "return")) {
      hoist_sites(b, b + 1, e, npos);
      return;
    }
    if (v_.is(b, "raise")) {
      hoist_sites(b, b + 1, e, b + 1);
      return;
    }
    if (v_.kw(b) && !v_.is(b, "not") && !v_.is(b, "await")) return;
    const auto ops = assigns(b, e);
    if (ops.size() > 1) return;
    if (ops.empty()) {
      hoist_sites(b, b, e, b);
    } else {
      for (std::size_t i = b; i < ops[0]; ++i)
        if (v_.is(i, "(")) return;
      hoist_sites(b, ops[0] + 1, e, v_.is(ops[0], "=") ? ops[0] + 1 : npos);
    }
  }

  void header_call_chain(const Stmt& s) {
    const std::size_t b = c(s.begin), colon = c(s.colon);
    if (s.keyword == "if") {
      hoist_sites(b, b + 1, colon, npos);
    } else if (s.keyword == "for") {
      const auto ins = top_level(v_, b + 1, colon, "in");
      if (!ins.empty()) hoist_sites(b, ins.front() + 1, colon, npos);
    }
  }

  // for x in xs: ...  ->  explicit iterator driven by a while loop.
  void for_iter_to_while(const Stmt& s, const Stmt* next) {
    if (next && next->keyword == "else") return;
    const std::size_t b = c(s.begin), colon = c(s.colon);
    const auto ins = top_level(v_, b + 1, colon, "in");
    if (ins.empty() || ins.front() == b + 1 || ins.front() + 1 >= colon || s.body.empty()) return;
    const std::size_t in = ins.front();
    std::string iterable = span(in + 1, colon);
    if (!top_level(v_, in + 1, colon, ",").empty()) iterable = "(" + iterable + ")";
    const std::string it = fresh_name(v_, kPy, {"it", "iterator", "cursor"});
    const std::string ind = indent_of(b);
    const std::string body_ind = indent_of(c(s.body.front().begin));
    const std::string inner = body_ind + unit_indent_;
    const std::size_t stop = line_end(text_, off(colon));
    std::string out = it + " = iter(" + iterable + ")\n" + ind + "while True:";
    out += between(end_off(colon), stop);
    if (out.back() != '\n') out += "\n";
    out += body_ind + "try:\n" + inner + span(b + 1, in) + " = next(" + it + ")\n" + body_ind +
           "except StopIteration:\n" + inner + "break\n";
    emit(off(b), stop, std::move(out), Pattern::loop_form);
  }

  std::string_view text_;
  syntax::py::Module module_;
  View v_;
  std::vector<std::size_t> to_code_;
  std::size_t fn_b_ = 0, fn_e_ = 0;
  std::string unit_indent_;
  std::vector<Edit> out_;
};

}  // namespace

std::vector<Edit> python_sites(std::string_view text) { return Catalog(text).run(); }

}  // namespace memprobe::mutator
