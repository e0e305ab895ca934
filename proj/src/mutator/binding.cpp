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

#include "mutator/binding.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "memprobe/error.hpp"
#include "memprobe/syntax/clike_tree.hpp"
#include "memprobe/syntax/functions.hpp"
#include "memprobe/syntax/lexer.hpp"
#include "mutator/tokens.hpp"

namespace memprobe::mutator {

using syntax::Token;
using syntax::TokenKind;

namespace {

bool ident_char(unsigned char c, bool first) {
  return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80 ||
         (!first && c >= '0' && c <= '9');
}

// Identifier-shaped runs inside arbitrary text (f-strings, macros).
std::vector<std::string> words_in(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (ident_char(c, true)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(static_cast<unsigned char>(text[j]), false)) ++j;
      out.emplace_back(text.substr(i, j - i));
      i = j;
    } else if (c >= '0' && c <= '9') {
      while (i < text.size() && ident_char(static_cast<unsigned char>(text[i]), false)) ++i;
    } else {
      ++i;
    }
  }
  return out;
}

class Collector {
 public:
  explicit Collector(const View& v) : v_(v), bound_(v.code.size(), false), skip_(v.code.size(), false) {}

  void bind(std::size_t i) {
    if (v_.ident(i)) names_.insert(std::string(v_.text(i)));
  }
  void exclude_name(std::string_view name) { excluded_.insert(std::string(name)); }
  void skip(std::size_t i) { skip_[i] = true; }

  Bindings finish() const {
    Bindings out;
    for (std::size_t i = 0; i < v_.code.size(); ++i)
      if (v_.ident(i)) out.taken.insert(std::string(v_.text(i)));
    for (const auto& w : extra_taken) out.taken.insert(w);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < v_.code.size(); ++i) {
      if (!v_.ident(i)) continue;
      std::string name(v_.text(i));
      if (!names_.count(name) || excluded_.count(name)) continue;
      if (seen.insert(name).second) out.names.push_back(name);
      if (skip_[i]) continue;
      out.occurrences.push_back({v_.code[i].begin, v_.code[i].end, name});
    }
    return out;
  }

  std::vector<std::string> extra_taken;

 private:
  const View& v_;
  std::set<std::string> names_;
  std::set<std::string> excluded_;
  std::vector<bool> bound_;
  std::vector<bool> skip_;
};

// ---- Python -----------------------------------------------------------------

class PythonAnalyzer {
 public:
  explicit PythonAnalyzer(std::string_view text) {
    lexed_ = syntax::lex(text, Language::python);
    v_.src = text;
    for (const auto& t : lexed_.tokens) {
      if (t.kind == TokenKind::newline) {
        if (!v_.code.empty()) line_ends_.push_back(v_.code.size());
        continue;
      }
      if (syntax::is_code(t.kind)) v_.code.push_back(t);
    }
    if (line_ends_.empty() || line_ends_.back() != v_.code.size()) line_ends_.push_back(v_.code.size());
    v_.build_match();
  }

  Bindings run() {
    Collector c(v_);
    collect_strings(c);
    std::size_t begin = 0;
    for (std::size_t end : line_ends_) {
      if (end > begin) logical_line(c, begin, end);
      begin = end;
    }
    scan_expressions(c);
    return c.finish();
  }

 private:
  bool grouping(std::size_t open) const {
    // '(' or '[' that does not follow an operand (so not a call/subscript).
    if (open == 0) return true;
    const std::size_t p = open - 1;
    const TokenKind k = v_.code[p].kind;
    if (k == TokenKind::identifier || k == TokenKind::string || k == TokenKind::number) return false;
    const auto w = v_.text(p);
    return !(w == ")" || w == "]" || w == "}");
  }

  // Binds simple-name targets in [b, e).
  void bind_targets(Collector& c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto w = v_.text(i);
      if ((w == "(" || w == "[" || w == "{") && !grouping(i)) {
        i = v_.match[i] == npos ? e : v_.match[i];
        continue;
      }
      if (!v_.ident(i)) continue;
      if (i > 0 && v_.is(i - 1, ".")) continue;
      if (v_.is(i + 1, ".") || v_.is(i + 1, "(") || v_.is(i + 1, "[")) continue;
      c.bind(i);
    }
  }

  // First top-level (within [b, e)) occurrence of `what`, lambda colons skipped.
  std::size_t top_level(std::size_t b, std::size_t e, std::string_view what) const {
    int lambdas = 0;
    for (std::size_t i = b; i < e; ++i) {
      const auto w = v_.text(i);
      if (w == "(" || w == "[" || w == "{") {
        if (v_.match[i] == npos) return npos;
        i = v_.match[i];
        continue;
      }
      if (w == "lambda" && v_.kw(i)) ++lambdas;
      if (w == ":" && lambdas > 0) {
        --lambdas;
        continue;
      }
      if (w == what) return i;
    }
    return npos;
  }

  void def_header(Collector& c, std::size_t b, std::size_t e) {
    std::size_t i = b;
    if (v_.is(i, "async")) ++i;
    if (!v_.is(i, "def")) return;
    const std::size_t name = i + 1;
    def_names_.insert(std::string(v_.text(name)));
    c.bind(name);
    const std::size_t lp = name + 1;
    if (!v_.is(lp, "(") || v_.match[lp] == npos) return;
    const std::size_t rp = v_.match[lp];
    def_parens_.insert(lp);
    bool expect = true;
    for (std::size_t k = lp + 1; k < rp && k < e; ++k) {
      const auto w = v_.text(k);
      if (w == "(" || w == "[" || w == "{") {
        k = v_.match[k];
        continue;
      }
      if (w == ",") {
        expect = true;
        continue;
      }
      if (w == "*" || w == "**") continue;
      if (expect && v_.ident(k)) c.bind(k);
      expect = false;
    }
  }

  void logical_line(Collector& c, std::size_t b, std::size_t e) {
    const auto first = v_.text(b);
    if (first == "import" || first == "from") {
      for (std::size_t i = b; i < e; ++i)
        if (v_.ident(i)) c.exclude_name(v_.text(i));
      return;
    }
    if (first == "global" || first == "nonlocal") {
      for (std::size_t i = b; i < e; ++i)
        if (v_.ident(i)) c.exclude_name(v_.text(i));
      return;
    }
    if (first == "@") {
      // Decorator expressions refer to names outside the snippet.
      for (std::size_t i = b; i < e; ++i)
        if (v_.ident(i)) c.exclude_name(v_.text(i));
      return;
    }
    // Split on top-level ';'.
    std::size_t s = b;
    for (std::size_t i = b; i <= e; ++i) {
      if (i == e || (v_.is(i, ";") && depth_zero(b, i))) {
        if (i > s) statement(c, s, i);
        s = i + 1;
      }
    }
  }

  bool depth_zero(std::size_t b, std::size_t i) const {
    int d = 0;
    for (std::size_t k = b; k < i; ++k) {
      const auto w = v_.text(k);
      if (w == "(" || w == "[" || w == "{") ++d;
      if (w == ")" || w == "]" || w == "}") --d;
    }
    return d == 0;
  }

  void statement(Collector& c, std::size_t b, std::size_t e) {
    static const std::unordered_set<std::string_view> compound = {
        "if", "elif", "else", "while", "for", "with", "try", "except", "finally", "def", "class", "async"};
    while (b < e && v_.kw(b) && compound.count(v_.text(b))) {
      const std::size_t colon = top_level(b, e, ":");
      const std::size_t stop = colon == npos ? e : colon;
      const auto head = v_.text(b);
      std::size_t h = b;
      if (head == "async") ++h;
      const auto kind = v_.text(h);
      if (kind == "def") {
        def_header(c, b, stop);
      } else if (kind == "class") {
        if (v_.ident(h + 1)) c.exclude_name(v_.text(h + 1));
      } else if (kind == "for") {
        const std::size_t in = top_level(h + 1, stop, "in");
        if (in != npos) bind_targets(c, h + 1, in);
      } else if (kind == "with" || kind == "except") {
        for (std::size_t i = h + 1; i < stop; ++i) {
          if (!v_.is(i, "as")) continue;
          if (v_.is(i + 1, "(")) {
            bind_targets(c, i + 2, v_.match[i + 1]);
          } else {
            c.bind(i + 1);
          }
        }
      }
      if (colon == npos) return;
      b = colon + 1;
    }
    if (b >= e) return;
    // Assignment targets: every segment before the last top-level '='.
    std::size_t seg = b;
    std::vector<std::pair<std::size_t, std::size_t>> targets;
    for (std::size_t i = b; i < e;) {
      const std::size_t eq = top_level(i, e, "=");
      if (eq == npos) break;
      targets.emplace_back(seg, eq);
      seg = eq + 1;
      i = eq + 1;
    }
    for (auto [tb, te] : targets) {
      const std::size_t colon = top_level(tb, te, ":");  // annotated assignment
      bind_targets(c, tb, colon == npos ? te : colon);
    }
    if (targets.empty()) {
      const std::size_t colon = top_level(b, e, ":");
      if (colon != npos && !v_.kw(b)) bind_targets(c, b, colon);
    }
  }

  void collect_strings(Collector& c) {
    for (std::size_t i = 0; i < v_.code.size(); ++i) {
      if (v_.code[i].kind != TokenKind::string) continue;
      const auto t = v_.text(i);
      const auto q = t.find_first_of("'\"");
      const auto prefix = t.substr(0, q);
      if (prefix.find_first_of("fF") == std::string_view::npos) continue;
      for (auto& w : words_in(t.substr(q))) {
        c.exclude_name(w);
        c.extra_taken.push_back(w);
      }
    }
  }

  // Comprehension targets, lambda parameters, walrus targets, keyword
  // arguments and attribute names.
  void scan_expressions(Collector& c) {
    std::vector<std::size_t> opens;
    for (std::size_t i = 0; i < v_.code.size(); ++i) {
      const auto w = v_.text(i);
      if (w == "(" || w == "[" || w == "{") opens.push_back(i);
      if ((w == ")" || w == "]" || w == "}") && !opens.empty()) opens.pop_back();
      if (w == "for" && v_.kw(i) && !opens.empty()) {
        const std::size_t close = v_.match[opens.back()];
        const std::size_t in = top_level(i + 1, close, "in");
        if (in != npos) bind_targets(c, i + 1, in);
      }
      if (w == "lambda" && v_.kw(i)) {
        for (std::size_t k = i + 1; k < v_.code.size() && !v_.is(k, ":"); ++k) {
          if (v_.ident(k) && (v_.is(k - 1, "lambda") || v_.is(k - 1, ",") || v_.is(k - 1, "*") ||
                              v_.is(k - 1, "**")))
            c.bind(k);
          if (v_.is(k, "=")) {  // default value: skip to next comma
            while (k + 1 < v_.code.size() && !v_.is(k + 1, ",") && !v_.is(k + 1, ":")) ++k;
          }
        }
      }
      if (w == ":=" && i > 0) c.bind(i - 1);
      if (v_.ident(i)) {
        if (i > 0 && v_.is(i - 1, ".")) c.skip(i);
        if (dunder(v_.text(i))) c.exclude_name(v_.text(i));
        // keyword argument of an external call
        if (v_.is(i + 1, "=") && !opens.empty() && v_.is(opens.back(), "(") &&
            !def_parens_.count(opens.back()) && !grouping(opens.back())) {
          const std::size_t callee = opens.back() - 1;
          const bool internal = v_.ident(callee) && !(callee > 0 && v_.is(callee - 1, ".")) &&
                                def_names_.count(std::string(v_.text(callee)));
          if (!internal) c.skip(i);
        }
      }
    }
    // A function reached through an attribute (self.f) keeps its name.
    for (std::size_t i = 1; i < v_.code.size(); ++i)
      if (v_.ident(i) && v_.is(i - 1, ".") && def_names_.count(std::string(v_.text(i))))
        c.exclude_name(v_.text(i));
  }

  static bool dunder(std::string_view w) {
    return w.size() > 4 && w.substr(0, 2) == "__" && w.substr(w.size() - 2) == "__";
  }

  syntax::Lexed lexed_;
  View v_;
  std::vector<std::size_t> line_ends_;
  std::set<std::size_t> def_parens_;
  std::set<std::string> def_names_;
};

// ---- Java / C++ ---------------------------------------------------------------

class ClikeAnalyzer {
 public:
  ClikeAnalyzer(std::string_view text, Language lang) : unit_(syntax::clike::parse_unit(text, lang)), lang_(lang) {
    v_.src = text;
    v_.code = unit_.code;
    v_.build_match();
  }

  Bindings run() {
    if (unit_.functions.size() != 1) throw ParseFailure(lang_, 0, "expected exactly one function");
    const auto& f = unit_.functions.front();
    Collector c(v_);
    const bool java = lang_ == Language::java;

    // Function name.
    const std::string fname(v_.text(f.name));
    bool name_ok = !f.is_operator && !f.qualified && !f.is_constructor && !f.overrides &&
                   fname != "main" && has_return_type(f);
    if (name_ok) c.bind(f.name);

    // Template / generic parameters in the header.
    for (std::size_t i = f.begin; i < f.name; ++i) {
      if (v_.is(i, "typename") || v_.is(i, "class")) {
        if (v_.ident(i + 1) && (v_.is(i + 2, ",") || v_.is(i + 2, ">") || v_.is(i + 2, "=") ||
                                v_.is(i + 2, "...")))
          c.bind(i + 1);
        if (v_.is(i + 1, "...") && v_.ident(i + 2)) c.bind(i + 2);
      }
      if (java && v_.is(i, "<") && i + 1 < f.name && (i == f.begin || generic_intro(i - 1))) {
        // <T, U extends X>
        int depth = 0;
        std::size_t k = i;
        for (; k < f.name; ++k) {
          if (v_.is(k, "<")) ++depth;
          else if (v_.is(k, ">")) --depth;
          else if (v_.is(k, ">>")) depth -= 2;
          if (depth == 1 && (v_.is(k, "<") || v_.is(k, ",")) && v_.ident(k + 1)) c.bind(k + 1);
          if (depth <= 0) break;
        }
        i = k;
      }
    }

    // Parameters.
    params(c, f.lparen + 1, f.rparen);

    // Statement starts in the body.
    std::set<std::size_t> label_colons;
    collect_labels(f.body, label_colons);
    for (std::size_t i = f.body_open; i < f.body_close; ++i) {
      const auto w = v_.text(i);
      const bool after_stmt = w == ";" || w == "{" || w == "}" || label_colons.count(i);
      if (after_stmt) {
        declaration(c, i + 1, Context::statement);
        continue;
      }
      if (w == "(" && i > 0) {
        const auto p = v_.text(i - 1);
        if (p == "for") declaration(c, i + 1, Context::for_init);
        else if (p == "if" || p == "while" || p == "switch") declaration(c, i + 1, Context::condition);
        else if (p == "catch") catch_param(c, i);
        else if (p == "try") resources(c, i);
      }
      if (w == "[" && !java) lambda(c, i);
      if (w == "->" && java) java_lambda(c, i);
    }

    // Occurrence exclusions.
    for (std::size_t i = f.begin; i <= f.body_close && i < v_.code.size(); ++i) {
      if (!v_.ident(i)) continue;
      const auto p = i > 0 ? v_.text(i - 1) : std::string_view{};
      if (p == "." || p == "->" || p == "::" || p == ".*" || p == "->*" || p == "@") c.skip(i);
      if (v_.is(i + 1, "::")) c.skip(i);
      if (java && v_.is(i + 1, "(") && i != f.name && v_.text(i) != fname) c.skip(i);
      if (java && v_.is(i + 1, "(") && v_.text(i) == fname && !name_ok) c.skip(i);
      // Member initializers name members, not locals.
      if (i > f.rparen && i < f.body_open && (v_.is(i + 1, "(") || v_.is(i + 1, "{"))) c.skip(i);
    }
    // The function reached through an object keeps its name.
    for (std::size_t i = 1; i < v_.code.size(); ++i) {
      const auto p = v_.text(i - 1);
      if (v_.ident(i) && (p == "." || p == "->" || p == "::") && v_.text(i) == fname) c.exclude_name(fname);
    }
    // Macro text may mention names.
    for (const auto& t : v_.code) {
      if (t.kind != TokenKind::preprocessor) continue;
      for (auto& w : words_in(v_.src.substr(t.begin, t.end - t.begin))) {
        c.exclude_name(w);
        c.extra_taken.push_back(w);
      }
    }
    return c.finish();
  }

 private:
  enum class Context { statement, for_init, condition, param };

  bool generic_intro(std::size_t i) const {
    static const std::unordered_set<std::string_view> mods = {
        "public", "private", "protected", "static", "final", "abstract", "synchronized",
        "native", "default", "strictfp"};
    return (v_.kw(i) && mods.count(v_.text(i))) || v_.is(i, ")");  // ')' ends an annotation
  }

  // Constructors (and destructors) have no return type; standalone snippets
  // carry no class to compare the name against.
  bool has_return_type(const syntax::clike::Function& f) const {
    static const std::unordered_set<std::string_view> mods = {
        "public", "private", "protected", "static", "final", "abstract", "synchronized", "native",
        "default", "strictfp", "inline", "explicit", "constexpr", "consteval", "virtual", "friend",
        "extern"};
    if (f.name > 0 && v_.is(f.name - 1, "~")) return false;
    for (std::size_t i = f.begin; i < f.name; ++i) {
      if (v_.is(i, "@") && v_.ident(i + 1)) {
        ++i;
        if (v_.is(i + 1, "(") && v_.match[i + 1] != npos) i = v_.match[i + 1];
        continue;
      }
      if (v_.is(i, "template") && v_.is(i + 1, "<")) {
        const std::size_t after = skip_angles(i + 1, f.name);
        if (after == npos) return true;
        i = after - 1;
        continue;
      }
      if (v_.is(i, "<") && (i == f.begin || generic_intro(i - 1))) {
        const std::size_t after = skip_angles(i, f.name);
        if (after == npos) return true;
        i = after - 1;
        continue;
      }
      if (v_.kw(i) && mods.count(v_.text(i))) continue;
      return true;
    }
    return false;
  }

  void collect_labels(const syntax::clike::Stmt& s, std::set<std::size_t>& out) const {
    if (s.kind == syntax::clike::Kind::label && s.end > s.begin) out.insert(s.end - 1);
    for (const auto& c : s.children) collect_labels(c, out);
  }

  bool type_keyword(std::string_view w) const {
    static const std::unordered_set<std::string_view> kw = {
        "int",      "long",     "short",    "char",     "byte",     "boolean", "float",
        "double",   "unsigned", "signed",   "bool",     "auto",     "wchar_t", "char8_t",
        "char16_t", "char32_t", "void"};
    return kw.count(w) > 0;
  }

  bool modifier(std::string_view w) const {
    static const std::unordered_set<std::string_view> kw = {
        "const", "static", "final", "volatile", "constexpr", "register", "mutable", "thread_local",
        "inline", "struct", "class", "enum", "typename", "constinit"};
    return kw.count(w) > 0;
  }

  // Skips a balanced <...> starting at i; returns the index after it or npos.
  std::size_t skip_angles(std::size_t i, std::size_t limit) const {
    int depth = 0;
    for (std::size_t k = i; k < limit; ++k) {
      const auto w = v_.text(k);
      const TokenKind kind = v_.code[k].kind;
      if (w == "<") ++depth;
      else if (w == ">") --depth;
      else if (w == ">>") depth -= 2;
      else if (w == ">>>") depth -= 3;
      else if (w == "(" || w == "[") {
        if (v_.match[k] == npos) return npos;
        k = v_.match[k];
        continue;
      } else if (!(kind == TokenKind::identifier || kind == TokenKind::keyword ||
                   kind == TokenKind::number || w == "::" || w == "," || w == "*" || w == "&" ||
                   w == "." || w == "..." || w == "?" || w == "&&")) {
        return npos;
      }
      if (depth < 0) return npos;
      if (depth == 0) return k + 1;
    }
    return npos;
  }

  // Parses `type name` at i. Returns the name index (or the '[' of a
  // structured binding), or npos.
  std::size_t declarator(std::size_t i, std::size_t limit, bool& structured) const {
    structured = false;
    const bool java = lang_ == Language::java;
    // Annotations and modifiers.
    while (i < limit) {
      if (v_.is(i, "@") && v_.ident(i + 1)) {
        i += 2;
        if (v_.is(i, "(") && v_.match[i] != npos) i = v_.match[i] + 1;
        continue;
      }
      if (v_.kw(i) && modifier(v_.text(i))) {
        ++i;
        continue;
      }
      break;
    }
    if (i >= limit) return npos;
    // Base type.
    bool base = false;
    bool is_auto = false;
    while (i < limit && v_.kw(i) && type_keyword(v_.text(i))) {
      is_auto = is_auto || v_.is(i, "auto");
      base = true;
      ++i;
    }
    if (!base) {
      if (v_.is(i, "::")) ++i;
      if (!v_.ident(i)) {
        if (v_.is(i, "decltype") && v_.is(i + 1, "(") && v_.match[i + 1] != npos) {
          i = v_.match[i + 1] + 1;
          base = true;
        } else {
          return npos;
        }
      } else {
        if (java && v_.is(i, "yield")) return npos;
        ++i;
        base = true;
      }
      while (i < limit) {
        if ((v_.is(i, "::") || (java && v_.is(i, "."))) && v_.ident(i + 1)) {
          i += 2;
          continue;
        }
        if (v_.is(i, "<")) {
          const std::size_t after = skip_angles(i, limit);
          if (after == npos) return npos;
          i = after;
          continue;
        }
        break;
      }
    }
    // Suffixes.
    while (i < limit) {
      const auto w = v_.text(i);
      if (w == "*" || w == "&" || w == "&&" || w == "const" || w == "volatile" || w == "...") {
        ++i;
        continue;
      }
      if (java && w == "[" && v_.is(i + 1, "]")) {
        i += 2;
        continue;
      }
      break;
    }
    if (i >= limit) return npos;
    if (!java && is_auto && v_.is(i, "[")) {
      structured = true;
      return i;
    }
    if (!v_.ident(i)) return npos;
    return i;
  }

  void bind_structured(Collector& c, std::size_t open) {
    const std::size_t close = v_.match[open];
    if (close == npos) return;
    for (std::size_t k = open + 1; k < close; ++k)
      if (v_.ident(k)) c.bind(k);
  }

  bool follows(std::size_t i, Context ctx) const {
    const auto w = v_.text(i);
    switch (ctx) {
      case Context::statement:
        return w == "=" || w == ";" || w == "," || w == "(" || w == "{" || w == "[";
      case Context::for_init:
        return w == "=" || w == ";" || w == "," || w == "(" || w == "{" || w == "[" || w == ":";
      case Context::condition:
        return w == "=" || w == "{" || (w == ";" && lang_ == Language::cpp);
      case Context::param:
        return w == "," || w == ")" || w == "=" || w == "[";
    }
    return false;
  }

  void declaration(Collector& c, std::size_t i, Context ctx) {
    const std::size_t limit = v_.code.size();
    bool structured = false;
    const std::size_t name = declarator(i, limit, structured);
    if (name == npos) return;
    if (structured) {
      const std::size_t close = v_.match[name];
      if (close == npos || !(v_.is(close + 1, "=") || v_.is(close + 1, ":") || v_.is(close + 1, "{")))
        return;
      bind_structured(c, name);
      return;
    }
    if (!follows(name + 1, ctx)) return;
    // `a < b;`-style expressions never reach here; `a * b;` would, harmlessly.
    c.bind(name);
    if (ctx == Context::param || v_.is(name + 1, ":")) return;
    // Further declarators: skip initializers to top-level ',' or ';'.
    std::size_t k = name + 1;
    while (k < limit) {
      const auto w = v_.text(k);
      if (w == "(" || w == "[" || w == "{") {
        if (v_.match[k] == npos) return;
        k = v_.match[k] + 1;
        continue;
      }
      if (w == "<") {  // possible template argument inside an initializer
        ++k;
        continue;
      }
      if (w == ";" || w == ")") return;
      if (w == ",") {
        std::size_t n = k + 1;
        while (v_.is(n, "*") || v_.is(n, "&")) ++n;
        if (v_.ident(n) && follows(n + 1, Context::statement)) c.bind(n);
        k = n + 1;
        continue;
      }
      ++k;
    }
  }

  void params(Collector& c, std::size_t b, std::size_t e) {
    std::size_t s = b;
    for (std::size_t k = b; k <= e; ++k) {
      if (k < e) {
        const auto w = v_.text(k);
        if ((w == "(" || w == "[" || w == "{") && v_.match[k] != npos) {
          k = v_.match[k];
          continue;
        }
        if (w == "<") {
          const std::size_t after = skip_angles(k, e);
          if (after != npos) {
            k = after - 1;
            continue;
          }
        }
        if (w != ",") continue;
      }
      if (k > s) {
        bool structured = false;
        const std::size_t name = declarator(s, k, structured);
        if (name != npos && !structured && name > s && (name + 1 == k || follows(name + 1, Context::param)))
          c.bind(name);
      }
      s = k + 1;
    }
  }

  void catch_param(Collector& c, std::size_t open) {
    const std::size_t close = v_.match[open];
    if (close == npos || close < 2) return;
    if (v_.ident(close - 1) && close - 1 > open + 1 && !v_.is(close - 2, "::") && !v_.is(close - 2, "."))
      c.bind(close - 1);
  }

  void resources(Collector& c, std::size_t open) {
    const std::size_t close = v_.match[open];
    if (close == npos) return;
    std::size_t s = open + 1;
    for (std::size_t k = s; k <= close; ++k) {
      if (k < close && v_.match[k] != npos && (v_.is(k, "(") || v_.is(k, "[") || v_.is(k, "{"))) {
        k = v_.match[k];
        continue;
      }
      if (k == close || v_.is(k, ";")) {
        bool structured = false;
        const std::size_t name = declarator(s, k, structured);
        if (name != npos && !structured && v_.is(name + 1, "=")) c.bind(name);
        s = k + 1;
      }
    }
  }

  // C++ lambda: [captures](params)
  void lambda(Collector& c, std::size_t open) {
    if (open > 0) {
      const std::size_t p = open - 1;
      const TokenKind k = v_.code[p].kind;
      const auto w = v_.text(p);
      if (k == TokenKind::identifier || k == TokenKind::string || w == ")" || w == "]" ||
          (k == TokenKind::keyword && w != "return") || w == "operator" || w == "[")
        return;
    }
    const std::size_t close = v_.match[open];
    if (close == npos || !v_.is(close + 1, "(")) return;
    const std::size_t rp = v_.match[close + 1];
    if (rp == npos) return;
    params(c, close + 2, rp);
  }

  // Java lambda: x -> ..., (a, b) -> ..., (int a, int b) -> ...
  void java_lambda(Collector& c, std::size_t arrow) {
    if (arrow == 0) return;
    // Not a switch rule: look back to the start of the statement.
    for (std::size_t k = arrow; k-- > 0;) {
      const auto w = v_.text(k);
      if (w == ";" || w == "{" || w == "}") break;
      if (w == "(" || w == "[") {
        if (v_.match[k] != npos && v_.match[k] > arrow) break;  // we are inside these brackets
      }
      if ((w == "case" || w == "default") && v_.kw(k)) {
        // `case` inside a nested switch expression argument is still a rule.
        return;
      }
    }
    const std::size_t p = arrow - 1;
    if (v_.ident(p)) {
      c.bind(p);
      return;
    }
    if (!v_.is(p, ")")) return;
    const std::size_t open = v_.match[p];
    if (open == npos) return;
    std::size_t s = open + 1;
    for (std::size_t k = s; k <= p; ++k) {
      if (k < p && v_.match[k] != npos && (v_.is(k, "(") || v_.is(k, "["))) {
        k = v_.match[k];
        continue;
      }
      if (k == p || v_.is(k, ",")) {
        if (k == s + 1 && v_.ident(s)) {
          c.bind(s);
        } else if (k > s) {
          bool structured = false;
          const std::size_t name = declarator(s, k, structured);
          if (name != npos && name + 1 == k) c.bind(name);
        }
        s = k + 1;
      }
    }
  }

  syntax::clike::Unit unit_;
  Language lang_;
  View v_;
};

}  // namespace

Bindings analyze_bindings(std::string_view text, Language language) {
  syntax::check_function(text, language);
  if (language == Language::python) return PythonAnalyzer(text).run();
  return ClikeAnalyzer(text, language).run();
}

std::string apply_renames(std::string_view text, const Bindings& bindings,
                          const std::vector<std::pair<std::string, std::string>>& rename) {
  std::map<std::string, std::string> m(rename.begin(), rename.end());
  std::string out;
  out.reserve(text.size() + 16);
  std::size_t pos = 0;
  for (const auto& o : bindings.occurrences) {
    auto it = m.find(o.name);
    if (it == m.end()) continue;
    out.append(text.substr(pos, o.begin - pos));
    out += it->second;
    pos = o.end;
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace memprobe::mutator
