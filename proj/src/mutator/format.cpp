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

#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "memprobe/error.hpp"
#include "memprobe/mutator.hpp"
#include "memprobe/seed.hpp"
#include "memprobe/syntax/clike_tree.hpp"
#include "memprobe/syntax/functions.hpp"
#include "memprobe/syntax/lexer.hpp"

namespace memprobe {

using syntax::Lexed;
using syntax::Token;
using syntax::TokenKind;

FormatStyle draw_style(std::uint64_t seed, std::string_view sample_id) {
  Rng rng(derive_seed(seed, sample_id, "t1"));
  FormatStyle s;
  s.indent_width = std::vector<int>{2, 4, 8}[rng.below(3)];
  s.use_tabs = rng.coin();
  s.max_width = std::vector<int>{79, 100, 120}[rng.below(3)];
  s.braces = rng.coin() ? BraceStyle::next_line : BraceStyle::same_line;
  s.space_before_paren = rng.coin();
  return s;
}

namespace {

// Accumulates physical lines, wrapping at break opportunities.
class Writer {
 public:
  explicit Writer(const FormatStyle& style) : style_(style) {}

  std::string indent(int level) const {
    if (level < 0) level = 0;
    return style_.use_tabs ? std::string(level, '\t')
                           : std::string(static_cast<std::size_t>(level * style_.indent_width), ' ');
  }

  // Next piece starts a new line at `level`.
  void newline(int level) {
    flush();
    level_ = level;
    pending_break_ = false;
  }

  void blank() {
    flush();
    if (!out_.empty() && !last_blank_) {
      out_ += '\n';
      last_blank_ = true;
    }
  }

  bool line_empty() const { return !has_content_ && !pending_break_; }

  void put(std::string_view text, bool space, bool can_break, int cont_level) {
    if (pending_break_) {
      flush();
      level_ = pending_level_;
      pending_break_ = false;
    }
    if (!has_content_) {
      line_ = indent(level_);
      col_ = level_ * style_.indent_width;
      space = false;
    } else if (can_break &&
               col_ + (space ? 1 : 0) + static_cast<int>(first_segment(text)) > style_.max_width) {
      flush();
      level_ = cont_level;
      line_ = indent(level_);
      col_ = level_ * style_.indent_width;
      space = false;
    }
    if (space) {
      line_ += ' ';
      ++col_;
    }
    line_ += text;
    const auto nl = text.rfind('\n');
    col_ = nl == std::string_view::npos ? col_ + static_cast<int>(text.size())
                                        : static_cast<int>(text.size() - nl - 1);
    has_content_ = true;
  }

  // Ends the current line after the last piece; the next piece continues at `level`.
  void force_break(int level) {
    if (!has_content_) return;
    pending_break_ = true;
    pending_level_ = level;
  }

  std::string finish() {
    flush();
    while (!out_.empty() && out_.back() == '\n' && out_.size() >= 2 && out_[out_.size() - 2] == '\n')
      out_.pop_back();
    return out_;
  }

 private:
  static std::size_t first_segment(std::string_view text) {
    const auto nl = text.find('\n');
    return nl == std::string_view::npos ? text.size() : nl;
  }

  void flush() {
    if (!has_content_) return;
    out_ += line_;
    out_ += '\n';
    line_.clear();
    has_content_ = false;
    last_blank_ = false;
  }

  const FormatStyle& style_;
  std::string out_;
  std::string line_;
  int level_ = 0;
  int col_ = 0;
  bool has_content_ = false;
  bool last_blank_ = false;
  bool pending_break_ = false;
  int pending_level_ = 0;
};

bool is_word(TokenKind k) {
  return k == TokenKind::identifier || k == TokenKind::keyword || k == TokenKind::number ||
         k == TokenKind::string || k == TokenKind::character;
}

const std::unordered_set<std::string_view> kOperandKeywords = {
    "this", "true", "false", "null", "nullptr", "None", "True", "False", "super"};

const std::unordered_set<std::string_view> kTypeKeywords = {
    "int",     "long",     "short",    "byte",     "char", "boolean", "float", "double",
    "void",    "unsigned", "signed",   "bool",     "auto", "wchar_t", "char8_t", "char16_t",
    "char32_t", "delete",  "operator", "decltype", "new"};

const std::unordered_set<std::string_view> kUnaryCapable = {"-", "+", "*", "&", "!", "~", "++",
                                                             "--", "**", "@", "&&", "not"};

// Marks '<' / '>' tokens that delimit template or generic argument lists.
std::vector<bool> angle_tokens(const std::vector<Token>& code, const Lexed& lx, Language lang) {
  std::vector<bool> angle(code.size(), false);
  if (lang == Language::python) return angle;
  auto text = [&](std::size_t i) { return lx.text(code[i]); };
  static const std::unordered_set<std::string_view> openers = {
      "template", "static_cast", "dynamic_cast", "const_cast", "reinterpret_cast",
      "public",   "private",     "protected",    "static",     "final",
      "abstract", "synchronized", "default"};
  for (std::size_t i = 1; i < code.size(); ++i) {
    if (text(i) != "<" || angle[i]) continue;
    const TokenKind pk = code[i - 1].kind;
    const auto p = text(i - 1);
    if (!(pk == TokenKind::identifier || (pk == TokenKind::keyword && openers.count(p)) ||
          (lang == Language::java && p == ".")))
      continue;
    int depth = 1;
    std::vector<std::size_t> marks{i};
    std::size_t j = i + 1;
    bool ok = false;
    for (; j < code.size(); ++j) {
      const auto w = text(j);
      const TokenKind k = code[j].kind;
      if (k == TokenKind::identifier || k == TokenKind::keyword || k == TokenKind::number) continue;
      if (w == "<") {
        ++depth;
        marks.push_back(j);
      } else if (w == ">" || w == ">>" || w == ">>>") {
        depth -= static_cast<int>(w.size());
        marks.push_back(j);
        if (depth < 0) break;
        if (depth == 0) {
          ok = true;
          break;
        }
      } else if (w == "::" || w == "." || w == "," || w == "*" || w == "&" || w == "?" ||
                 w == "[" || w == "]" || w == "..." || w == "(" || w == ")") {
        continue;
      } else {
        break;
      }
    }
    if (ok)
      for (std::size_t m : marks) angle[m] = true;
  }
  return angle;
}

// Decides the space between consecutive code tokens.
class Spacer {
 public:
  Spacer(const Lexed& lx, const std::vector<Token>& code, Language lang, const FormatStyle& style)
      : lx_(lx), code_(code), lang_(lang), style_(style), angle_(angle_tokens(code, lx, lang)) {}

  void reset() {
    prev_ = npos;
    prev_unary_ = false;
    brackets_.clear();
  }

  void set_label(bool on) { label_ = on; }
  bool safe = false;  // space between every pair of tokens

  // Space before code token i; then records i as emitted.
  bool next(std::size_t i) {
    const bool space = decide(i);
    const auto w = text(i);
    bool unary = false;
    if (kUnaryCapable.count(w)) unary = is_unary_position();
    if ((w == "++" || w == "--") && prev_ != npos && is_operand(prev_)) unary = false;
    if (w == "(" || w == "[" || w == "{") brackets_.push_back(w[0]);
    if ((w == ")" || w == "]" || w == "}") && !brackets_.empty()) brackets_.pop_back();
    if (w == "->" && lang_ == Language::cpp) arrow_spaced_ = space;
    prev2_ = prev_;
    prev_ = i;
    prev_unary_ = unary;
    return space;
  }

  int depth() const { return static_cast<int>(brackets_.size()); }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::string_view text(std::size_t i) const { return lx_.text(code_[i]); }
  TokenKind kind(std::size_t i) const { return code_[i].kind; }

  bool is_operand(std::size_t i) const {
    const TokenKind k = kind(i);
    const auto w = text(i);
    if (k == TokenKind::identifier || k == TokenKind::number || k == TokenKind::string ||
        k == TokenKind::character)
      return true;
    if (k == TokenKind::keyword) return kOperandKeywords.count(w) > 0;
    return w == ")" || w == "]" || w == "}" || (angle_[i] && w != "<");
  }

  // Whether the token about to be emitted (after prev_) is a prefix operator.
  bool is_unary_position() const {
    if (prev_ == npos) return true;
    if (is_operand(prev_)) return false;
    const auto p = text(prev_);
    if ((p == "++" || p == "--") && !prev_unary_) return false;
    return true;
  }

  char top() const { return brackets_.empty() ? 0 : brackets_.back(); }

  // Whether two adjacent punctuators would lex as a different token.
  static bool glues(std::string_view a, std::string_view b) {
    static const std::unordered_set<std::string_view> pairs = {
        "--", "++", "-=", "+=", "*=", "/=", "%=", "&=", "|=", "^=", "<=", ">=", "==", "!=",
        "<<", ">>", "&&", "||", "->", "::", "//", "/*", "**", "..", "<:", ":>", "%>", "<%",
        "%:", ":=", "-<", ">="};
    const char pair[2] = {a.back(), b.front()};
    return pairs.count(std::string_view(pair, 2)) > 0;
  }

  bool decide(std::size_t i) const {
    if (prev_ == npos) return false;
    const auto P = text(prev_);
    const auto C = text(i);
    const TokenKind pk = kind(prev_);
    const TokenKind ck = kind(i);
    const bool py = lang_ == Language::python;
    if (safe) return true;
    auto wordish = [](TokenKind k) {
      return k == TokenKind::identifier || k == TokenKind::keyword || k == TokenKind::number;
    };
    if (wordish(pk) && wordish(ck)) return true;
    if (pk == TokenKind::punct && ck == TokenKind::punct && glues(P, C)) return true;
    if (pk == TokenKind::string && ck == TokenKind::string) return true;
    if (C == ")" || C == "]") return false;
    if (C == "}") return !py;
    if (P == "(" || P == "[") return false;
    if (P == "{") return !py;
    if (C == "," || C == ";") return false;
    if (P == "," || P == ";") return true;
    if (py && (P == "." || C == ".")) {
      if (C == "." && (pk == TokenKind::number || pk == TokenKind::keyword)) return true;
      if (P == "." && ck == TokenKind::keyword && C == "import") return true;
      return false;
    }
    if (!py) {
      if (P == "." || C == ".") return C == "." && pk == TokenKind::number;
      if (C == "...") return false;
      if (P == "...") return true;
      if (P == "::") return false;
      if (C == "::") return pk == TokenKind::keyword && !kTypeKeywords.count(P);
      if (C == "->") return lang_ == Language::java || P == ")";
      if (P == "->") return lang_ == Language::java || arrow_spaced_;
      if (angle_[i] && C == "<") return P == "template";
      if (angle_[prev_] && P == "<") return false;
      if (angle_[i]) return false;  // closing '>'
      if (angle_[prev_]) {
        if (is_word(ck)) return true;
        if (C == "&" || C == "*" || C == "&&" || C == "{") return true;
        return false;
      }
      if (P == "operator") return false;
      if (prev2_ != npos && text(prev2_) == "operator" && C == "(") return false;
      if (P == "@") return false;
      if (C == "?") return true;
      if (C == ":") return !label_;
    }
    if (C == "(") {
      if (pk == TokenKind::identifier || P == ")" || P == "]") return false;
      if (pk == TokenKind::string) return false;
      if (pk == TokenKind::keyword) {
        if (py) return true;
        if (P == "if" || P == "for" || P == "while" || P == "switch" || P == "catch" ||
            P == "synchronized" || P == "try")
          return style_.space_before_paren;
        if (P == "return" || P == "case" || P == "throw" || P == "new" || P == "else" ||
            P == "do" || P == "co_return" || P == "co_await" || P == "co_yield" || P == "and" ||
            P == "or" || P == "not")
          return true;
        return false;  // sizeof(, this(, super(, decltype(, int( ...
      }
      return !prev_unary_;
    }
    if (C == "[") {
      if (pk == TokenKind::identifier || pk == TokenKind::string || P == ")" || P == "]" ||
          P == "}")
        return false;
      if (pk == TokenKind::keyword) return py || !kTypeKeywords.count(P);
      return !prev_unary_;
    }
    if (prev_unary_) return false;
    if ((C == "++" || C == "--") && is_operand(prev_)) return false;
    if (py) {
      if (C == ":") return false;
      if (P == ":") return top() != '[';
      if ((C == "=" || P == "=") && top() == '(') return false;
      if (P == "@" && prev_unary_) return false;
    }
    if (!py && P == "?" ) return true;
    return true;
  }

  const Lexed& lx_;
  const std::vector<Token>& code_;
  Language lang_;
  const FormatStyle& style_;
  std::vector<bool> angle_;
  std::size_t prev_ = npos;
  std::size_t prev2_ = npos;
  bool prev_unary_ = false;
  bool label_ = false;
  bool arrow_spaced_ = false;
  std::string brackets_;
};

// ---- Python -------------------------------------------------------------------

std::string format_python(std::string_view src, const FormatStyle& style, bool strip, bool safe) {
  const Lexed lx = syntax::lex(src, Language::python);
  // Spacer works over code tokens; map lexed index -> code index.
  std::vector<Token> code;
  std::vector<std::size_t> code_index(lx.tokens.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < lx.tokens.size(); ++i) {
    if (syntax::is_code(lx.tokens[i].kind)) {
      code_index[i] = code.size();
      code.push_back(lx.tokens[i]);
    }
  }
  Spacer sp(lx, code, Language::python, style);
  sp.safe = safe;
  Writer w(style);
  int depth = 0;
  bool line_start = true;
  bool prev_comma = false;
  std::size_t last_line = 0;
  bool any = false;
  std::size_t last_code_line = static_cast<std::size_t>(-1);
  for (std::size_t k = 0; k < lx.tokens.size(); ++k) {
    const Token& t = lx.tokens[k];
    switch (t.kind) {
      case TokenKind::indent: ++depth; continue;
      case TokenKind::dedent: --depth; continue;
      case TokenKind::newline:
        w.newline(depth);
        line_start = true;
        sp.reset();
        prev_comma = false;
        continue;
      case TokenKind::comment: {
        if (strip) continue;
        const bool trailing = last_code_line == t.line;
        if (any && !trailing && t.line > last_line + 1 && line_start) w.blank();
        if (!trailing && line_start) {
          w.newline(depth);
          w.put(lx.text(t), false, false, depth);
          w.newline(depth);
        } else {
          w.put(lx.text(t), true, false, depth + 2);
          w.force_break(depth + 2);
        }
        last_line = t.end_line;
        any = true;
        continue;
      }
      default: break;
    }
    if (line_start) {
      if (any && t.line > last_line + 1) w.blank();
      w.newline(depth);
      line_start = false;
    }
    const bool space = sp.next(code_index[k]);
    const bool can_break = prev_comma && sp.depth() > 0;
    w.put(lx.text(t), space, can_break, depth + 2);
    prev_comma = lx.text(t) == ",";
    last_line = t.end_line;
    last_code_line = t.end_line;
    any = true;
  }
  return w.finish();
}

// ---- Java / C++ ---------------------------------------------------------------

class ClikeFormatter {
 public:
  ClikeFormatter(std::string_view src, Language lang, const FormatStyle& style, bool strip, bool safe)
      : unit_(syntax::clike::parse_unit(src, lang)),
        lang_(lang),
        style_(style),
        strip_(strip),
        w_(style),
        sp_(unit_.lexed, unit_.code, lang, style) {
    sp_.safe = safe;
  }

  std::string run() {
    const auto& f = unit_.functions.front();
    level_ = 0;
    emit_range(f.begin, f.body_open);
    emit_block(f.body, 0, true, false);
    emit_comments_upto(unit_.lexed.tokens.size());
    return w_.finish();
  }

 private:
  using Stmt = syntax::clike::Stmt;
  using Kind = syntax::clike::Kind;

  const Lexed& lx() const { return unit_.lexed; }
  bool next_line() const { return style_.braces == BraceStyle::next_line; }

  void emit_comment(const Token& t) {
    const bool trailing = any_ && t.line == last_line_;
    if (!trailing && w_.line_empty()) {
      if (t.line > last_line_ + 1 && any_) w_.blank();
      w_.newline(level_);
      w_.put(lx().text(t), false, false, level_);
      w_.newline(level_);
    } else {
      w_.put(lx().text(t), true, false, level_ + 2);
      const bool line_comment = lx().text(t).substr(0, 2) == "//";
      if (line_comment) w_.force_break(level_ + 2);
    }
    last_line_ = t.end_line;
    any_ = true;
  }

  void emit_comments_upto(std::size_t lexed_end) {
    for (; next_lexed_ < lexed_end; ++next_lexed_) {
      const Token& t = lx().tokens[next_lexed_];
      if (t.kind == TokenKind::comment && !strip_) emit_comment(t);
    }
  }

  void emit_code(std::size_t i) {
    const std::size_t li = unit_.code_to_lexed[i];
    emit_comments_upto(li);
    const Token& t = unit_.code[i];
    if (t.kind == TokenKind::preprocessor) {
      w_.newline(level_);
      sp_.next(i);
      w_.put(lx().text(t), false, false, level_);
      w_.newline(level_);
    } else {
      const bool space = sp_.next(i);
      w_.put(lx().text(t), space, prev_breakable_, level_ + 2);
      const auto s = lx().text(t);
      prev_breakable_ = s == "," || s == "&&" || s == "||";
    }
    next_lexed_ = li + 1;
    last_line_ = t.end_line;
    any_ = true;
    // Trailing comments on the same line.
    const std::size_t stop = i + 1 < unit_.code.size() ? unit_.code_to_lexed[i + 1] : lx().tokens.size();
    while (next_lexed_ < stop && lx().tokens[next_lexed_].line == t.end_line) {
      if (!strip_) emit_comment(lx().tokens[next_lexed_]);
      ++next_lexed_;
    }
  }

  void emit_range(std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) emit_code(i);
  }

  // Blank line before a statement if the source had one.
  void start_statement(std::size_t first_code, int level) {
    const std::size_t li = unit_.code_to_lexed[first_code];
    std::size_t first = li;
    for (std::size_t k = next_lexed_; k < li; ++k) {
      if (lx().tokens[k].kind == TokenKind::comment && !strip_) {
        first = k;
        break;
      }
    }
    if (any_ && lx().tokens[first].line > last_line_ + 1) w_.blank();
    level_ = level;
    w_.newline(level);
    prev_breakable_ = false;
  }

  void emit_body(const Stmt& s, int level, bool in_switch_parent = false) {
    if (s.kind == Kind::block) {
      emit_block(s, level, true, in_switch_parent);
    } else {
      start_statement(s.begin, level + 1);
      emit_statement(s, level + 1);
    }
  }

  void emit_block(const Stmt& b, int level, bool attached, bool is_switch) {
    level_ = level;
    if (attached && next_line()) w_.newline(level);
    emit_code(b.begin);
    int inner = level + 1;
    for (const auto& c : b.children) {
      int l = inner;
      if (is_switch) l = c.kind == Kind::label ? level + 1 : level + 2;
      start_statement(c.begin, l);
      emit_statement(c, l);
    }
    level_ = level;
    emit_comments_upto(unit_.code_to_lexed[b.end - 1]);
    w_.newline(level);
    emit_code(b.end - 1);
  }

  // Tokens between `from` and the first child; attached after a closing brace
  // when the style keeps `} else {` together.
  void emit_clause(std::size_t from, std::size_t to, const Stmt& previous, int level) {
    if (previous.kind == Kind::block && !next_line()) {
      level_ = level;
    } else {
      start_statement(from, level);
    }
    emit_range(from, to);
  }

  void emit_statement(const Stmt& s, int level) {
    level_ = level;
    switch (s.kind) {
      case Kind::block:
        emit_block(s, level, false, false);
        return;
      case Kind::if_: {
        emit_range(s.begin, s.children[0].begin);
        emit_body(s.children[0], level);
        if (s.else_token != syntax::clike::npos) {
          emit_clause(s.else_token, s.else_token + 1, s.children[0], level);
          const Stmt& e = s.children[1];
          if (e.kind == Kind::if_) {
            emit_statement(e, level);
          } else {
            emit_body(e, level);
          }
        }
        return;
      }
      case Kind::for_:
      case Kind::foreach:
      case Kind::while_:
      case Kind::synchronized_:
        emit_range(s.begin, s.children[0].begin);
        emit_body(s.children[0], level);
        return;
      case Kind::switch_:
        emit_range(s.begin, s.children[0].begin);
        emit_body(s.children[0], level, true);
        return;
      case Kind::do_while:
        emit_range(s.begin, s.children[0].begin);
        emit_body(s.children[0], level);
        emit_clause(s.children[0].end, s.end, s.children[0], level);
        return;
      case Kind::try_:
        emit_range(s.begin, s.children[0].begin);
        emit_body(s.children[0], level);
        for (std::size_t k = 1; k < s.children.size(); ++k) {
          emit_clause(s.children[k - 1].end, s.children[k].begin, s.children[k - 1], level);
          emit_body(s.children[k], level);
        }
        return;
      case Kind::label:
        sp_.set_label(true);
        emit_range(s.begin, s.end);
        sp_.set_label(false);
        return;
      default:
        emit_range(s.begin, s.end);
        return;
    }
  }

  syntax::clike::Unit unit_;
  Language lang_;
  const FormatStyle& style_;
  bool strip_;
  Writer w_;
  Spacer sp_;
  std::size_t next_lexed_ = 0;
  std::size_t last_line_ = 0;
  bool any_ = false;
  int level_ = 0;
  bool prev_breakable_ = false;
};

std::string format_once(std::string_view text, Language language, const FormatStyle& style,
                        bool strip, bool safe) {
  if (language == Language::python) return format_python(text, style, strip, safe);
  return ClikeFormatter(text, language, style, strip, safe).run();
}

bool equivalent(std::string_view a, std::string_view b, Language language) {
  try {
    syntax::check_function(b, language);
    return syntax::stripped_tokens(a, language) == syntax::stripped_tokens(b, language);
  } catch (const ParseFailure&) {
    return false;
  }
}

}  // namespace

std::string format_code(std::string_view text, Language language, const FormatStyle& style,
                        bool strip_comments) {
  syntax::check_function(text, language);
  for (bool safe : {false, true}) {
    std::string out = format_once(text, language, style, strip_comments, safe);
    if (equivalent(text, out, language)) return out;
  }
  throw Error("formatter could not preserve the token stream");
}

}  // namespace memprobe
