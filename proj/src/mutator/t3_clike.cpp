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

// Statement rewrites for Java and C++ function bodies.
#include <algorithm>
#include <set>

#include "memprobe/syntax/clike_tree.hpp"
#include "mutator/t3_sites.hpp"
#include "mutator/text_util.hpp"

namespace memprobe::mutator {
namespace {

using syntax::TokenKind;
using syntax::clike::Kind;
using syntax::clike::Stmt;

enum class TypeClass { unknown, integral, small, floating, string, other };

struct Negation {
  std::string text;
  int prec = 100;
};

bool is_assign_op(std::string_view w) {
  return w == "=" || w == "+=" || w == "-=" || w == "*=" || w == "/=" || w == "%=" || w == "&=" ||
         w == "|=" || w == "^=" || w == "<<=" || w == ">>=" || w == ">>>=";
}

bool compoundable(std::string_view op) {
  return op == "+" || op == "-" || op == "*" || op == "/" || op == "%" || op == "&" || op == "|" ||
         op == "^" || op == "<<" || op == ">>" || op == ">>>";
}

bool floating_literal(std::string_view w) {
  if (w.size() > 1 && w[0] == '0' && (w[1] == 'x' || w[1] == 'X')) return false;
  return w.find_first_of(".eE") != std::string_view::npos || w.back() == 'f' || w.back() == 'F' ||
         w.back() == 'd' || w.back() == 'D';
}

class Catalog {
 public:
  Catalog(std::string_view text, Language language)
      : text_(text), lang_(language), unit_(syntax::clike::parse_unit(text, language)) {
    v_.src = text;
    v_.code = unit_.code;
    v_.build_match();
    fn_ = &unit_.functions.front();
    unit_indent_ = indent_unit(text);
    kw_space_ = text.find("if(") == std::string_view::npos &&
                text.find("for(") == std::string_view::npos &&
                text.find("while(") == std::string_view::npos;
    for (std::size_t i = fn_->body_open; i <= fn_->body_close; ++i)
      if (v_.is(i, "{") && i != fn_->body_open && starts_line(text_, v_.code[i].begin)) next_line_ = true;
  }

  std::vector<Edit> run() {
    collect_loops(fn_->body);
    walk(fn_->body, false, false);
    std::stable_sort(out_.begin(), out_.end(),
                     [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
    return std::move(out_);
  }

 private:
  // ---- traversal ---------------------------------------------------------------

  void walk(const Stmt& s, bool in_block, bool switch_body) {
    switch (s.kind) {
      case Kind::block:
        for (const auto& c : s.children) walk(c, !switch_body, false);
        return;
      case Kind::simple:
        aug_forward(s);
        aug_reverse(s);
        if (in_block && insertable(s)) {
          conditional_forward(s);
          extract_literal(s, s.begin, s.end - 1);
          call_chain(s);
        }
        return;
      case Kind::if_:
        de_morgan(s);
        conditional_reverse(s);
        if (in_block && insertable(s)) {
          extract_literal(s, s.lparen + 1, s.rparen);
          call_chain(s);
        }
        break;
      case Kind::for_:
        if (in_block && insertable(s)) {
          for_to_while(s);
          extract_literal(s, s.lparen + 1, s.rparen);
        }
        break;
      case Kind::foreach:
        if (in_block && insertable(s)) {
          foreach_to_while(s);
          call_chain(s);
        }
        break;
      case Kind::while_:
        while_to_for(s);
        if (in_block && insertable(s)) extract_literal(s, s.lparen + 1, s.rparen);
        break;
      case Kind::switch_:
        if (in_block && insertable(s)) {
          extract_literal(s, s.lparen + 1, s.rparen);
          call_chain(s);
        }
        for (const auto& c : s.children) walk(c, false, c.kind == Kind::block);
        return;
      default:
        break;
    }
    for (const auto& c : s.children) walk(c, false, false);
  }

  // A new statement can go on its own line right before `s`.
  bool insertable(const Stmt& s) const {
    if (s.begin == 0 || !starts_line(text_, v_.code[s.begin].begin)) return false;
    const auto prev = v_.text(s.begin - 1);
    return prev == ";" || prev == "{" || prev == "}";
  }

  std::size_t off(std::size_t i) const { return v_.code[i].begin; }
  std::size_t end_off(std::size_t i) const { return v_.code[i].end; }
  std::string_view between(std::size_t from, std::size_t to) const { return text_.substr(from, to - from); }
  std::string indent_of(std::size_t i) const { return std::string(line_indent(text_, off(i))); }

  void emit(std::size_t begin, std::size_t end, std::string text, Pattern p) {
    out_.push_back({begin, end, std::move(text), p});
  }

  bool contains(std::size_t b, std::size_t e, std::string_view w) const {
    for (std::size_t i = b; i < e; ++i)
      if (v_.is(i, w)) return true;
    return false;
  }

  // No comments or preprocessor lines inside the statement.
  bool plain(const Stmt& s) const {
    return unit_.code_to_lexed[s.end - 1] - unit_.code_to_lexed[s.begin] == s.end - 1 - s.begin;
  }

  bool lambda_free(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      if (lang_ == Language::java && (v_.is(i, "->") || v_.is(i, "::"))) return false;
      if (v_.is(i, "{")) return false;
      if (lang_ == Language::cpp && v_.is(i, "[") && i > b &&
          (v_.is(i - 1, "(") || v_.is(i - 1, ",") || v_.is(i - 1, "=")))
        return false;
    }
    return true;
  }

  std::string paren_if(std::size_t b, std::size_t e, int at_most) const {
    std::string t(v_.span(b, e));
    if (root_prec(v_, b, e, lang_) <= at_most && !wrapped_in_parens(v_, b, e)) return "(" + t + ")";
    return t;
  }

  std::string open_brace(const std::string& indent) const { return next_line_ ? "\n" + indent + "{" : " {"; }
  std::string kw(std::string_view word) const { return std::string(word) + (kw_space_ ? " (" : "("); }

  // ---- types -------------------------------------------------------------------

  // `a`, `a.b`, `this.a`, `a[i]`, `a->b[i + 1]`; no calls. Returns the base
  // name token or npos.
  std::size_t simple_lvalue(std::size_t b, std::size_t e) const {
    if (b >= e) return npos;
    std::size_t i = b;
    std::size_t base = npos;
    if (v_.is(i, "this") && (v_.is(i + 1, ".") || v_.is(i + 1, "->"))) {
      i += 2;
    }
    if (!v_.ident(i)) return npos;
    base = i++;
    while (i < e) {
      if ((v_.is(i, ".") || v_.is(i, "->")) && v_.ident(i + 1)) {
        i += 2;
      } else if (v_.is(i, "[") && v_.match[i] != npos && v_.match[i] < e) {
        for (std::size_t j = i + 1; j < v_.match[i]; ++j) {
          const auto w = v_.text(j);
          if (!v_.ident(j) && v_.code[j].kind != TokenKind::number && w != "+" && w != "-" && w != "*")
            return npos;
        }
        i = v_.match[i] + 1;
      } else {
        return npos;
      }
    }
    return base;
  }

  static TypeClass classify_words(const std::vector<std::string_view>& words, Language lang) {
    TypeClass c = TypeClass::unknown;
    for (auto w : words) {
      if (w == "*") return TypeClass::other;
      if (w == "double" || w == "float") return TypeClass::floating;
      if (w == "String" || w == "string") return TypeClass::string;
      if (w == "bool" || w == "boolean") return TypeClass::other;
      if (lang == Language::java && (w == "char" || w == "short" || w == "byte")) return TypeClass::small;
      if (w == "int" || w == "long" || w == "short" || w == "unsigned" || w == "char" ||
          w == "size_t" || w == "ptrdiff_t" || (w.size() > 2 && w.substr(w.size() - 2) == "_t"))
        c = TypeClass::integral;
    }
    return c == TypeClass::unknown && !words.empty() ? TypeClass::other : c;
  }

  // Declaration of `name` inside the function: the declarator token and the
  // type tokens before it. Returns npos when there is none.
  std::size_t find_decl(std::string_view name, std::vector<std::size_t>& type) const {
    for (std::size_t j = fn_->lparen + 1; j < fn_->body_close; ++j) {
      if (v_.text(j) != name || j == 0) continue;
      const auto prev = v_.text(j - 1);
      const bool type_end = v_.ident(j - 1) || (v_.kw(j - 1) && prev != "return" && prev != "new" &&
                                                prev != "case" && prev != "else" && prev != "throw" &&
                                                prev != "delete" && prev != "goto") ||
                            prev == ">" || prev == ">>" || prev == "&" || prev == "*" || prev == "]" ||
                            prev == "...";
      const auto next = v_.text(j + 1);
      const bool decl_next = next == "=" || next == ";" || next == "," || next == ")" || next == ":" ||
                             next == "{" || next == "[" || next == "(";
      if (!type_end || !decl_next) continue;
      type.clear();
      int angle = 0;
      for (std::size_t k = j; k-- > 0;) {
        const auto w = v_.text(k);
        if (w == ">") ++angle;
        else if (w == ">>") angle += 2;
        else if (w == "<") --angle;
        else if (angle == 0 && (w == "(" || w == "," || w == ";" || w == "{" || w == "}")) break;
        else if (angle == 0 && !v_.ident(k) && !v_.kw(k) && w != "::" && w != "&" && w != "*" &&
                 w != "[" && w != "]" && w != "&&" && w != "...")
          break;
        type.insert(type.begin(), k);
      }
      if (!type.empty()) return j;
    }
    return npos;
  }

  // Class of the value designated by an lvalue whose base is token `base`.
  TypeClass lvalue_class(std::size_t base, std::size_t e) const {
    const bool member = base + 1 < e && (v_.is(base + 1, ".") || v_.is(base + 1, "->"));
    if (member || (base > 0 && (v_.is(base - 1, ".") || v_.is(base - 1, "->")))) return TypeClass::unknown;
    const bool subscript = base + 1 < e && v_.is(base + 1, "[");
    std::vector<std::size_t> type;
    const std::size_t j = find_decl(v_.text(base), type);
    if (j == npos) return TypeClass::unknown;
    std::vector<std::string_view> words;
    bool java_array = false;
    std::size_t first_arg_b = npos, first_arg_e = npos;
    for (std::size_t t : type) {
      const auto w = v_.text(t);
      if (w == "[" || w == "...") java_array = true;
      if (w == "<" && first_arg_b == npos) first_arg_b = t + 1;
      if ((w == "," || w == ">" || w == ">>") && first_arg_b != npos && first_arg_e == npos) first_arg_e = t;
    }
    if (subscript) {
      if (java_array) {
        for (std::size_t t : type)
          if (v_.text(t) != "[" && v_.text(t) != "]" && v_.text(t) != "...") words.push_back(v_.text(t));
        return classify_words(words, lang_);
      }
      if (first_arg_b == npos || first_arg_e == npos) return TypeClass::other;
      for (std::size_t t = first_arg_b; t < first_arg_e; ++t) words.push_back(v_.text(t));
      return classify_words(words, lang_);
    }
    if (java_array) return TypeClass::other;
    for (std::size_t t : type) {
      if (v_.text(t) == "<") break;  // template types are classes
      words.push_back(v_.text(t));
    }
    if (words.size() != type.size()) return TypeClass::other;
    if (words.size() == 1 && (words[0] == "auto" || words[0] == "var")) {
      if (v_.is(j + 1, "=") && v_.code[j + 2].kind == TokenKind::number && v_.is(j + 3, ";"))
        return floating_literal(v_.text(j + 2)) ? TypeClass::floating : TypeClass::integral;
      return TypeClass::other;
    }
    return classify_words(words, lang_);
  }

  bool int_literal_only(std::size_t b, std::size_t e) const {
    return e == b + 1 && v_.code[b].kind == TokenKind::number && !floating_literal(v_.text(b));
  }

  bool has_floating(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      if (v_.code[i].kind == TokenKind::number && floating_literal(v_.text(i))) return true;
      if (v_.ident(i) && !(i > b && (v_.is(i - 1, ".") || v_.is(i - 1, "->"))) &&
          lvalue_class(i, i + 1) == TypeClass::floating)
        return true;
    }
    return false;
  }

  // `x op= rhs` and `x = x op rhs` are interchangeable for this target.
  bool aug_ok(std::size_t base, std::size_t lhs_e, std::size_t rb, std::size_t re, bool forward) const {
    const TypeClass c = lvalue_class(base, lhs_e);
    if (lang_ == Language::java) {
      if (!forward) return true;  // the compound form always compiles
      switch (c) {
        case TypeClass::floating:
        case TypeClass::string: return true;
        case TypeClass::integral: return !has_floating(rb, re);
        case TypeClass::unknown: return int_literal_only(rb, re);
        default: return false;
      }
    }
    switch (c) {
      case TypeClass::integral:
      case TypeClass::floating:
      case TypeClass::string: return true;
      case TypeClass::unknown: return int_literal_only(rb, re);
      default: return false;
    }
  }

  // ---- aug_assign ----------------------------------------------------------------

  void aug_forward(const Stmt& s) {
    const std::size_t b = s.begin, e = s.end - 1;
    std::size_t k = npos;
    for (std::size_t i = b; i < e; ++i) {
      if (v_.open(i) && v_.match[i] != npos) {
        i = v_.match[i];
        continue;
      }
      if (is_assign_op(v_.text(i))) {
        if (k != npos) return;
        k = i;
      }
    }
    if (k == npos || v_.is(k, "=") || k + 1 >= e) return;
    const std::size_t base = simple_lvalue(b, k);
    if (base == npos || !aug_ok(base, k, k + 1, e, true)) return;
    const auto op_full = v_.text(k);
    const std::string op(op_full.substr(0, op_full.size() - 1));
    std::string rhs(v_.span(k + 1, e));
    if (root_prec(v_, k + 1, e, lang_) <= op_prec(op) && !wrapped_in_parens(v_, k + 1, e)) rhs = "(" + rhs + ")";
    const std::string lhs(v_.span(b, k));
    emit(off(b), end_off(e - 1), lhs + " = " + lhs + " " + op + " " + rhs, Pattern::aug_assign);
  }

  static int op_prec(std::string_view op) {
    if (op == "*" || op == "/" || op == "%") return 13;
    if (op == "+" || op == "-") return 12;
    if (op == "<<" || op == ">>" || op == ">>>") return 11;
    if (op == "&") return 8;
    if (op == "^") return 7;
    if (op == "|") return 6;
    return 100;
  }

  void aug_reverse(const Stmt& s) {
    const std::size_t b = s.begin, e = s.end - 1;
    const auto eqs = top_level(v_, b, e, "=");
    if (eqs.size() != 1) return;
    const std::size_t k = eqs[0];
    for (std::size_t i = b; i < e; ++i)
      if (i != k && is_assign_op(v_.text(i))) return;
    const std::size_t base = simple_lvalue(b, k);
    if (base == npos) return;
    const std::size_t n = k - b;
    if (k + 1 + n + 1 >= e) return;
    for (std::size_t i = 0; i < n; ++i)
      if (v_.text(b + i) != v_.text(k + 1 + i)) return;
    const std::size_t op = k + 1 + n;
    if (!compoundable(v_.text(op)) || binary_prec(v_, k + 1, op, lang_) == 0) return;
    const std::size_t rb = op + 1;
    if (root_prec(v_, rb, e, lang_) <= op_prec(v_.text(op))) return;
    if (!aug_ok(base, k, rb, e, false)) return;
    emit(off(b), end_off(e - 1),
         std::string(v_.span(b, k)) + " " + std::string(v_.text(op)) + "= " + std::string(v_.span(rb, e)),
         Pattern::aug_assign);
  }

  // ---- loop_form -----------------------------------------------------------------

  bool ends_abruptly(const Stmt& s) const {
    switch (s.kind) {
      case Kind::simple: {
        const auto w = v_.text(s.begin);
        return w == "return" || w == "throw" || w == "break" || w == "continue";
      }
      case Kind::block: return !s.children.empty() && ends_abruptly(s.children.back());
      case Kind::if_:
        return s.children.size() == 2 && ends_abruptly(s.children[0]) && ends_abruptly(s.children[1]);
      default: return false;
    }
  }

  void for_to_while(const Stmt& s) {
    if (s.children.empty() || s.children[0].kind != Kind::block) return;
    const Stmt& body = s.children[0];
    const std::size_t open = body.begin, close = body.end - 1;
    if (!starts_line(text_, off(close)) || v_.code[open].line == v_.code[close].line) return;
    if (contains(body.begin, body.end, "continue") || ends_abruptly(body)) return;
    const auto semis = top_level(v_, s.lparen + 1, s.rparen, ";");
    if (semis.size() != 2) return;
    const std::size_t ib = s.lparen + 1, ie = semis[0], cb = semis[0] + 1, ce = semis[1],
                      ub = semis[1] + 1, ue = s.rparen;
    // Declared loop variables must not be used outside the loop.
    for (std::size_t i = ib; i < ie; ++i) {
      if (!v_.ident(i) || i == ib) continue;
      const auto prev = v_.text(i - 1);
      const bool declared = v_.ident(i - 1) || v_.kw(i - 1) || prev == ">" || prev == "*" || prev == "&" ||
                            (prev == "," && i + 1 <= ie);
      const bool next_ok = i + 1 == ie || v_.is(i + 1, "=") || v_.is(i + 1, ",") || v_.is(i + 1, "{");
      if (!declared || !next_ok) continue;
      if (!can_hoist_decl(s, v_.text(i))) return;
    }
    const std::string ind = indent_of(s.begin);
    std::string body_ind = ind + unit_indent_;
    if (!body.children.empty()) body_ind = indent_of(body.children.front().begin);
    std::string out;
    if (ie > ib) out += std::string(v_.span(ib, ie)) + ";\n" + ind;
    out += kw("while") + (ce > cb ? std::string(v_.span(cb, ce)) : std::string("true")) + ")";
    const std::size_t close_line = line_begin(text_, off(close));
    out += between(end_off(s.rparen), close_line);
    std::size_t part = ub;
    for (std::size_t comma : [&] {
           auto c = top_level(v_, ub, ue, ",");
           c.push_back(ue);
           return c;
         }()) {
      if (comma > part) out += body_ind + std::string(v_.span(part, comma)) + ";\n";
      part = comma + 1;
    }
    out += between(close_line, end_off(close));
    emit(off(s.begin), end_off(close), std::move(out), Pattern::loop_form);
  }

  // Names a loop header declares: for-init declarators, range-for variables.
  std::vector<std::string_view> header_decls(const Stmt& s) const {
    std::vector<std::string_view> out;
    if (s.lparen == npos) return out;
    const std::size_t b = s.lparen + 1;
    std::size_t e = s.rparen;
    if (s.kind == Kind::for_) {
      const auto semis = top_level(v_, b, e, ";");
      if (semis.empty()) return out;
      e = semis[0];
    } else if (s.kind == Kind::foreach) {
      const auto colons = top_level(v_, b, e, ":");
      if (colons.size() != 1) return out;
      e = colons[0];
    } else {
      return out;
    }
    for (std::size_t i = b + 1; i < e; ++i) {
      if (!v_.ident(i)) continue;
      const auto prev = v_.text(i - 1);
      const bool declared = v_.ident(i - 1) || v_.kw(i - 1) || prev == ">" || prev == "*" || prev == "&" ||
                            prev == "&&" || prev == "," || prev == "[";
      const auto next = v_.text(i + 1);
      const bool next_ok = i + 1 == e || next == "=" || next == "," || next == "{" || next == "]";
      if (declared && next_ok) out.push_back(v_.text(i));
    }
    return out;
  }

  void collect_loops(const Stmt& s) {
    if (s.kind == Kind::for_ || s.kind == Kind::foreach) loops_.push_back({s.begin, s.end, header_decls(s)});
    for (const auto& c : s.children) collect_loops(c);
  }

  // `name`, declared by loop `s`, may instead be declared right before it.
  bool can_hoist_decl(const Stmt& s, std::string_view name) const {
    for (std::size_t j = fn_->lparen; j <= fn_->body_close; ++j) {
      if ((j >= s.begin && j < s.end) || v_.text(j) != name) continue;
      if (j < fn_->body_open) return false;  // a parameter
      if (lang_ == Language::java && j > s.begin) return false;
      bool scoped = false;
      for (const auto& l : loops_)
        if (l.begin != s.begin && l.begin <= j && j < l.end &&
            std::find(l.names.begin(), l.names.end(), name) != l.names.end())
          scoped = true;
      if (!scoped) return false;
    }
    return true;
  }

  void foreach_to_while(const Stmt& s) {
    if (s.children.empty() || s.children[0].kind != Kind::block) return;
    const Stmt& body = s.children[0];
    const std::size_t open = body.begin, close = body.end - 1;
    if (!starts_line(text_, off(close)) || v_.code[open].line == v_.code[close].line) return;
    if (ends_abruptly(body)) return;
    const auto colons = top_level(v_, s.lparen + 1, s.rparen, ":");
    if (colons.size() != 1 || colons[0] + 1 >= s.rparen) return;
    const std::string decl(v_.span(s.lparen + 1, colons[0]));
    const std::size_t rb = colons[0] + 1, re = s.rparen;
    const std::string range(v_.span(rb, re));
    const std::string ind = indent_of(s.begin);
    std::string body_ind = ind + unit_indent_;
    if (!body.children.empty()) body_ind = indent_of(body.children.front().begin);
    const std::size_t close_line = line_begin(text_, off(close));
    const std::string head(between(end_off(s.rparen), end_off(open)));
    const bool has_continue = contains(body.begin, body.end, "continue");
    std::string out;
    if (lang_ == Language::cpp) {
      if (has_continue || simple_lvalue(rb, re) == npos) return;
      const std::string it = fresh_name(v_, lang_, {"it", "iter", "cursor", "pos"});
      out = "auto " + it + " = std::begin(" + range + ");\n" + ind + kw("while") + it + " != std::end(" + range +
            "))" + head + "\n" + body_ind + decl + " = *" + it + ";" +
            std::string(between(end_off(open), close_line)) + body_ind + "++" + it + ";\n" +
            std::string(between(close_line, end_off(close)));
    } else {
      bool array = false, iterable = false;
      if (re == rb + 1 && v_.ident(rb)) {
        std::vector<std::size_t> type;
        if (find_decl(v_.text(rb), type) == npos) return;
        for (std::size_t t : type)
          if (v_.is(t, "[") || v_.is(t, "...")) array = true;
        static const std::set<std::string_view> kIterables = {
            "List", "ArrayList", "LinkedList", "Set", "HashSet", "TreeSet", "LinkedHashSet",
            "Collection", "Iterable", "Deque", "ArrayDeque", "Queue", "SortedSet", "NavigableSet"};
        for (std::size_t t : type)
          if (kIterables.count(v_.text(t))) iterable = true;
      } else if (re >= rb + 4 && v_.is(re - 1, ")") && v_.is(re - 2, "(") && v_.is(re - 4, ".") &&
                 (v_.is(re - 3, "entrySet") || v_.is(re - 3, "keySet"))) {
        iterable = true;
      }
      if (array && !has_continue) {
        const std::string idx = fresh_name(v_, lang_, {"idx", "pos", "index", "cursor"});
        out = "int " + idx + " = 0;\n" + ind + kw("while") + idx + " < " + range + ".length)" + head + "\n" +
              body_ind + decl + " = " + range + "[" + idx + "];" +
              std::string(between(end_off(open), close_line)) + body_ind + idx + "++;\n" +
              std::string(between(close_line, end_off(close)));
      } else if (iterable && !array) {
        const std::string it = fresh_name(v_, lang_, {"it", "iter", "cursor"});
        out = "var " + it + " = " + range + ".iterator();\n" + ind + kw("while") + it + ".hasNext())" + head +
              "\n" + body_ind + decl + " = " + it + ".next();" + std::string(between(end_off(open), end_off(close)));
      } else {
        return;
      }
    }
    emit(off(s.begin), end_off(close), std::move(out), Pattern::loop_form);
  }

  void while_to_for(const Stmt& s) {
    if (s.lparen == npos || s.rparen <= s.lparen + 1) return;
    emit(off(s.begin), end_off(s.rparen),
         "for" + std::string(between(end_off(s.begin), end_off(s.lparen))) + "; " +
             std::string(v_.span(s.lparen + 1, s.rparen)) + ";)",
         Pattern::loop_form);
  }

  // ---- conditional -----------------------------------------------------------------

  // Index of the ':' matching the '?' at q, or npos.
  std::size_t matching_colon(std::size_t q, std::size_t e) const {
    int depth = 0;
    for (std::size_t i = q + 1; i < e; ++i) {
      if (v_.open(i) && v_.match[i] != npos) {
        i = v_.match[i];
        continue;
      }
      if (v_.is(i, "?")) ++depth;
      if (v_.is(i, ":") && depth-- == 0) return i;
    }
    return npos;
  }

  bool plain_decl_type(std::size_t b, std::size_t e) const {
    static const std::set<std::string_view> kTypes = {"int", "long", "double", "float", "char",
                                                       "boolean", "bool", "short", "String"};
    if (e == b + 1) return kTypes.count(v_.text(b)) > 0;
    return lang_ == Language::cpp && e == b + 3 && v_.is(b, "std") && v_.is(b + 1, "::") &&
           v_.is(b + 2, "string");
  }

  void conditional_forward(const Stmt& s) {
    const std::size_t b = s.begin, e = s.end - 1;
    std::string decl, target;
    std::size_t xb;
    if (v_.is(b, "return")) {
      target = "return ";
      xb = b + 1;
    } else {
      const auto eqs = top_level(v_, b, e, "=");
      if (eqs.size() != 1) return;
      const std::size_t k = eqs[0];
      if (simple_lvalue(b, k) != npos) {
        target = std::string(v_.span(b, k)) + " = ";
      } else if (k >= b + 2 && v_.ident(k - 1) && plain_decl_type(b, k - 1)) {
        decl = std::string(v_.span(b, k)) + ";";
        target = std::string(v_.text(k - 1)) + " = ";
      } else {
        return;
      }
      xb = k + 1;
    }
    const auto qs = top_level(v_, xb, e, "?");
    if (qs.empty() || !lambda_free(xb, e)) return;
    const std::size_t q = qs.front();
    const std::size_t c = matching_colon(q, e);
    if (c == npos || q == xb || c == q + 1 || c + 1 >= e) return;
    if (root_prec(v_, xb, q, lang_) <= 3) return;
    std::string cond(wrapped_in_parens(v_, xb, q) ? v_.span(xb + 1, q - 1) : v_.span(xb, q));
    const std::string ind = indent_of(b), inner = ind + unit_indent_;
    std::string out;
    if (!decl.empty()) out += decl + "\n" + ind;
    out += kw("if") + cond + ")" + open_brace(ind) + "\n";
    out += inner + target + std::string(v_.span(q + 1, c)) + ";\n";
    out += ind + "}" + (next_line_ ? "\n" + ind : std::string(" ")) + "else" + open_brace(ind) + "\n";
    out += inner + target + std::string(v_.span(c + 1, e)) + ";\n" + ind + "}";
    emit(off(b), end_off(e), std::move(out), Pattern::conditional);
  }

  // Single simple statement of a braced branch, or nullptr.
  const Stmt* only_statement(const Stmt& branch) const {
    if (branch.kind != Kind::block || branch.children.size() != 1) return nullptr;
    const Stmt& s = branch.children[0];
    return s.kind == Kind::simple ? &s : nullptr;
  }

  void conditional_reverse(const Stmt& s) {
    if (s.else_token == npos || s.children.size() != 2 || !plain(s)) return;
    const Stmt* a = only_statement(s.children[0]);
    const Stmt* b = only_statement(s.children[1]);
    if (!a || !b) return;
    std::string target;
    std::size_t ab, bb;
    if (v_.is(a->begin, "return") && v_.is(b->begin, "return")) {
      target = "return ";
      ab = a->begin + 1;
      bb = b->begin + 1;
    } else {
      const auto ea = top_level(v_, a->begin, a->end - 1, "=");
      const auto eb = top_level(v_, b->begin, b->end - 1, "=");
      if (ea.size() != 1 || eb.size() != 1) return;
      if (simple_lvalue(a->begin, ea[0]) == npos) return;
      if (ea[0] - a->begin != eb[0] - b->begin) return;
      for (std::size_t i = 0; i < ea[0] - a->begin; ++i)
        if (v_.text(a->begin + i) != v_.text(b->begin + i)) return;
      target = std::string(v_.span(a->begin, ea[0])) + " = ";
      ab = ea[0] + 1;
      bb = eb[0] + 1;
    }
    const std::size_t ae = a->end - 1, be = b->end - 1;
    if (ab >= ae || bb >= be) return;
    if (!lambda_free(ab, ae) || !lambda_free(bb, be)) return;
    for (std::size_t i = ab; i < ae; ++i)
      if (is_assign_op(v_.text(i))) return;
    for (std::size_t i = bb; i < be; ++i)
      if (is_assign_op(v_.text(i))) return;
    const std::size_t cb = s.lparen + 1, ce = s.rparen;
    if (contains(cb, ce, "instanceof") || !v_.is(s.begin + 1, "(")) return;
    std::string out = target + paren_if(cb, ce, 3) + " ? " + paren_if(ab, ae, 3) + " : " + paren_if(bb, be, 3) + ";";
    emit(off(s.begin), end_off(s.end - 1), std::move(out), Pattern::conditional);
  }

  // ---- extract_literal -------------------------------------------------------------

  std::string java_literal_type(std::size_t i) const {
    const auto w = v_.text(i);
    if (v_.code[i].kind == TokenKind::string) return "String";
    if (v_.code[i].kind == TokenKind::character) return "char";
    if (w.back() == 'L' || w.back() == 'l') return "long";
    if (floating_literal(w)) return (w.back() == 'f' || w.back() == 'F') ? "float" : "double";
    return "int";
  }

  void extract_literal(const Stmt& s, std::size_t b, std::size_t e) {
    if (b >= e) return;
    const auto first = v_.text(s.begin);
    if (first == "case" || first == "default" || first == "static_assert") return;
    if ((first == "this" || first == "super") && v_.is(s.begin + 1, "(")) return;
    if (!lambda_free(b, e) || contains(b, e, "case")) return;
    for (std::size_t i = b; i + 1 < e; ++i)
      if (v_.is(i, "[") && v_.is(i + 1, "]")) return;
    const std::size_t line = line_begin(text_, off(s.begin));
    const std::string ind = indent_of(s.begin);
    for (std::size_t i = b; i < e; ++i) {
      const auto kind = v_.code[i].kind;
      if (kind != TokenKind::number && kind != TokenKind::string && kind != TokenKind::character) continue;
      if (trivial_literal(v_.text(i))) continue;
      if (kind == TokenKind::string &&
          ((i > 0 && v_.code[i - 1].kind == TokenKind::string) ||
           (i + 1 < v_.code.size() && v_.code[i + 1].kind == TokenKind::string)))
        continue;
      std::string name;
      if (kind == TokenKind::number)
        name = fresh_name(v_, lang_, {"limit", "factor", "offset", "base", "width", "step", "scale", "bound"});
      else if (kind == TokenKind::string)
        name = fresh_name(v_, lang_, {"label", "prefix", "text", "marker", "message", "pattern"});
      else
        name = fresh_name(v_, lang_, {"symbol", "marker", "delim", "sep"});
      std::string decl = lang_ == Language::java ? "final " + java_literal_type(i) + " " : std::string("const auto ");
      decl += name + " = " + std::string(v_.text(i)) + ";";
      emit(line, end_off(i), ind + decl + "\n" + std::string(between(line, off(i))) + name,
           Pattern::extract_literal);
    }
  }

  // ---- de_morgan -------------------------------------------------------------------

  Negation negate(std::size_t b, std::size_t e) const {
    if (wrapped_in_parens(v_, b, e)) return negate(b + 1, e - 1);
    const int root = root_prec(v_, b, e, lang_);
    const std::string all(v_.span(b, e));
    if (v_.is(b, "!") && root_prec(v_, b + 1, e, lang_) == 100) {
      if (wrapped_in_parens(v_, b + 1, e))
        return {std::string(v_.span(b + 2, e - 1)), root_prec(v_, b + 2, e - 1, lang_)};
      return {std::string(v_.span(b + 1, e)), 100};
    }
    if (root == 4 || root == 5) {
      const auto ops = top_level(v_, b, e, root == 4 ? "||" : "&&");
      const std::string joiner = root == 4 ? " && " : " || ";
      const int bound = root == 4 ? 5 : 4;  // parts must bind tighter than the joiner
      std::string out;
      std::size_t part = b;
      for (std::size_t k = 0; k <= ops.size(); ++k) {
        const std::size_t pe = k < ops.size() ? ops[k] : e;
        auto n = negate(part, pe);
        if (!out.empty()) out += joiner;
        out += n.prec <= bound ? "(" + n.text + ")" : n.text;
        part = pe + 1;
      }
      return {out, bound};
    }
    if (root == 9) {
      std::size_t k = npos;
      int count = 0;
      for (std::size_t i = b; i < e; ++i) {
        if (v_.open(i) && v_.match[i] != npos && v_.match[i] < e) {
          i = v_.match[i];
          continue;
        }
        if (binary_prec(v_, b, i, lang_) == 9) {
          k = i;
          ++count;
        }
      }
      if (count == 1) {
        return {std::string(v_.span(b, k)) + (v_.is(k, "==") ? " != " : " == ") +
                    std::string(v_.span(k + 1, e)),
                9};
      }
    }
    if (root == 100) return {"!" + all, 100};
    return {"!(" + all + ")", 100};
  }

  void de_morgan(const Stmt& s) {
    if (s.else_token == npos || s.children.size() != 2) return;
    const Stmt& then = s.children[0];
    const Stmt& other = s.children[1];
    if (then.kind != Kind::block || other.kind != Kind::block) return;
    if (!v_.is(s.begin + 1, "(")) return;  // if constexpr
    const std::size_t cb = s.lparen + 1, ce = s.rparen;
    if (cb >= ce || contains(cb, ce, "instanceof") || contains(cb, ce, ";")) return;
    if (root_prec(v_, cb, ce, lang_) <= 3 || !lambda_free(cb, ce)) return;
    const std::string neg = negate(cb, ce).text;
    std::string out(between(off(s.begin), end_off(s.lparen)));
    out += neg;
    out += between(off(s.rparen), off(then.begin));
    out += between(off(other.begin), end_off(other.end - 1));
    out += between(end_off(then.end - 1), off(other.begin));
    out += between(off(then.begin), end_off(then.end - 1));
    emit(off(s.begin), end_off(other.end - 1), std::move(out), Pattern::de_morgan);
  }

  // ---- call_chain ------------------------------------------------------------------

  // End of the postfix chain starting at `b` (exclusive) and whether it calls.
  std::size_t chain_end(std::size_t b, std::size_t e, std::vector<std::size_t>* calls) const {
    std::size_t i = b + 1;
    while (i < e) {
      const auto w = v_.text(i);
      if ((w == "." || w == "->" || (w == "::" && lang_ == Language::cpp)) && v_.ident(i + 1)) {
        i += 2;
      } else if ((w == "(" || w == "[") && v_.match[i] != npos && v_.match[i] < e) {
        if (w == "(" && calls) calls->push_back(i);
        i = v_.match[i] + 1;
      } else {
        break;
      }
    }
    return i;
  }

  bool chain_start(std::size_t i) const {
    if (!(v_.ident(i) || v_.is(i, "this"))) return false;
    if (i > 0 && (v_.is(i - 1, ".") || v_.is(i - 1, "->") || v_.is(i - 1, "::"))) return false;
    return !v_.is(i + 1, "::") || lang_ == Language::cpp;
  }

  // `i` names a variable being declared (`T x(args)`), not a callee.
  bool declarator(const Stmt& s, std::size_t i) const {
    if (i == 0) return false;
    const auto prev = v_.text(i - 1);
    if (v_.ident(i - 1)) return true;
    if (v_.kw(i - 1)) return !(prev == "return" || prev == "throw" || prev == "case" || prev == "co_return");
    if (prev != ">" && prev != ">>" && prev != "*" && prev != "&" && prev != "&&") return false;
    if (s.kind != Kind::simple || !(v_.ident(s.begin) || v_.kw(s.begin)) || v_.is(s.begin, "return")) return false;
    for (std::size_t k = s.begin; k < i; ++k)
      if (is_assign_op(v_.text(k)) || v_.is(k, "(")) return false;
    return true;
  }

  bool hoistable(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      const auto w = v_.text(i);
      if (w == "new" || w == "?" || w == "move" || w == "forward" || w == "make_unique" ||
          w == "make_shared" || w == "<" || w == "++" || w == "--" || is_assign_op(w))
        return false;
    }
    return lambda_free(b, e);
  }

  // Calls in [rb, re) that run before anything else with side effects and on
  // every execution of the statement, so they can move into a temporary.
  // `whole_b` starts the expression whose full value must stay inline
  // (expression statements, plain assignments).
  void hoist_sites(const Stmt& s, std::size_t rb, std::size_t re, std::size_t whole_b) {
    std::vector<std::pair<std::size_t, std::size_t>> hoists;
    for (std::size_t i = rb; i < re; ++i) {
      const auto w = v_.text(i);
      if (w == "&&" || w == "||" || w == "?" || w == ":" || w == "new" || w == "{" || w == "++" ||
          w == "--" || (lang_ == Language::java && (w == "->" || w == "::")))
        break;
      if (w == ")" || w == "]") {
        const std::size_t o = v_.match[i];
        if (w == ")" && o != npos && o > 0 && (v_.ident(o - 1) || v_.is(o - 1, ")") || v_.is(o - 1, "]") ||
                                               v_.is(o - 1, ">") || v_.kw(o - 1)))
          break;  // a call has completed
        continue;
      }
      if (!chain_start(i) || declarator(s, i)) continue;
      std::vector<std::size_t> calls;
      const std::size_t ce = chain_end(i, re, &calls);
      if (calls.empty()) continue;
      if (!(i == whole_b && ce == re) && hoistable(i, ce)) hoists.emplace_back(i, ce);
      const std::size_t first_close = v_.match[calls.front()];
      if (calls.size() > 1 && (v_.is(first_close + 1, ".") || v_.is(first_close + 1, "->")) &&
          hoistable(i, first_close + 1))
        hoists.emplace_back(i, first_close + 1);
    }
    const std::size_t line = line_begin(text_, off(s.begin));
    const std::string ind = indent_of(s.begin);
    for (auto [hb, he] : hoists) {
      const std::string name = fresh_name(v_, lang_, {"tmp", "temp", "value", "current", "item", "res"});
      const std::string decl = (lang_ == Language::java ? "var " : "auto&& ") + name + " = " +
                               std::string(v_.span(hb, he)) + ";";
      emit(line, end_off(he - 1), ind + decl + "\n" + std::string(between(line, off(hb))) + name,
           Pattern::call_chain);
    }
  }

  void call_chain(const Stmt& s) {
    const std::size_t b = s.begin;
    switch (s.kind) {
      case Kind::simple: {
        const std::size_t e = s.end - 1;
        if ((v_.is(b, "this") || v_.is(b, "super")) && v_.is(b + 1, "(")) return;
        if (v_.is(b, "return")) {
          hoist_sites(s, b + 1, e, npos);
          return;
        }
        const auto eqs = top_level(v_, b, e, "=");
        if (eqs.size() > 1) return;
        hoist_sites(s, b, e, eqs.empty() ? b : eqs[0] + 1);
        return;
      }
      case Kind::if_:
      case Kind::switch_:
        if (v_.is(b + 1, "(") && !contains(s.lparen, s.rparen, ";")) hoist_sites(s, s.lparen + 1, s.rparen, npos);
        return;
      case Kind::foreach: {
        const auto colons = top_level(v_, s.lparen + 1, s.rparen, ":");
        if (colons.size() == 1) hoist_sites(s, colons[0] + 1, s.rparen, npos);
        return;
      }
      default:
        return;
    }
  }

  std::string_view text_;
  Language lang_;
  syntax::clike::Unit unit_;
  View v_;
  const syntax::clike::Function* fn_ = nullptr;
  std::string unit_indent_;
  bool kw_space_ = true;
  bool next_line_ = false;
  struct Loop {
    std::size_t begin, end;
    std::vector<std::string_view> names;
  };
  std::vector<Loop> loops_;
  std::vector<Edit> out_;
};

}  // namespace

std::vector<Edit> clike_sites(std::string_view text, Language language) {
  return Catalog(text, language).run();
}

}  // namespace memprobe::mutator
