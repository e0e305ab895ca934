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

#include "memprobe/syntax/lexer.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "memprobe/error.hpp"

namespace memprobe::syntax {

namespace {

const std::unordered_set<std::string_view>& keywords(Language language) {
  static const std::unordered_set<std::string_view> python = {
      "False", "None",   "True",    "and",      "as",     "assert", "async",
      "await", "break",  "class",   "continue", "def",    "del",    "elif",
      "else",  "except", "finally", "for",      "from",   "global", "if",
      "import", "in",    "is",      "lambda",   "nonlocal", "not",  "or",
      "pass",  "raise",  "return",  "try",      "while",  "with",   "yield"};
  static const std::unordered_set<std::string_view> java = {
      "abstract", "assert",     "boolean",  "break",     "byte",       "case",
      "catch",    "char",       "class",    "const",     "continue",   "default",
      "do",       "double",     "else",     "enum",      "extends",    "final",
      "finally",  "float",      "for",      "goto",      "if",         "implements",
      "import",   "instanceof", "int",      "interface", "long",       "native",
      "new",      "package",    "private",  "protected", "public",     "return",
      "short",    "static",     "strictfp", "super",     "switch",     "synchronized",
      "this",     "throw",      "throws",   "transient", "try",        "void",
      "volatile", "while",      "true",     "false",     "null"};
  static const std::unordered_set<std::string_view> cpp = {
      "alignas",     "alignof",     "and",          "and_eq",      "asm",
      "auto",        "bitand",      "bitor",        "bool",        "break",
      "case",        "catch",       "char",         "char8_t",     "char16_t",
      "char32_t",    "class",       "compl",        "concept",     "const",
      "consteval",   "constexpr",   "constinit",    "const_cast",  "continue",
      "co_await",    "co_return",   "co_yield",     "decltype",    "default",
      "delete",      "do",          "double",       "dynamic_cast", "else",
      "enum",        "explicit",    "export",       "extern",      "false",
      "float",       "for",         "friend",       "goto",        "if",
      "inline",      "int",         "long",         "mutable",     "namespace",
      "new",         "noexcept",    "not",          "not_eq",      "nullptr",
      "operator",    "or",          "or_eq",        "private",     "protected",
      "public",      "register",    "reinterpret_cast", "requires", "return",
      "short",       "signed",      "sizeof",       "static",      "static_assert",
      "static_cast", "struct",      "switch",       "template",    "this",
      "thread_local", "throw",      "true",         "try",         "typedef",
      "typeid",      "typename",    "union",        "unsigned",    "using",
      "virtual",     "void",        "volatile",     "wchar_t",     "while",
      "xor",         "xor_eq"};
  switch (language) {
    case Language::python:
      return python;
    case Language::java:
      return java;
    case Language::cpp:
      return cpp;
  }
  return cpp;
}

// Punctuators, longest first within each language.
constexpr std::string_view kPythonPunct[] = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", ">>",
    "<<", "<=", ">=", "==", "!=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
    "+", "-", "*", "/", "%", "@", "&", "|", "^", "~", "<", ">", "(", ")", "[", "]", "{",
    "}", ",", ":", ";", ".", "="};

constexpr std::string_view kJavaPunct[] = {
    ">>>=", ">>>", "<<=", ">>=", "...", "->", "::", "++", "--", "&&",
    "||", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<",
    ">>", "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=", "?", ":", ";",
    ",", ".", "(", ")", "[", "]", "{", "}", "@"};

constexpr std::string_view kCppPunct[] = {
    "<=>", "<<=", ">>=", "->*", "...", "->", "::", "++", "--", "&&",
    "||", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<",
    ">>", ".*", "##", "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=",
    "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}", "#"};

constexpr bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}
constexpr bool ident_char(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
constexpr bool digit(unsigned char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view src, Language language) : src_(src), lang_(language) {
    // Line starts for offset -> line mapping.
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < src_.size(); ++i) {
      if (src_[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  Lexed run() {
    if (lang_ == Language::python) {
      lex_python();
    } else {
      lex_clike();
    }
    return Lexed{src_, lang_, std::move(out_)};
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    throw ParseFailure(lang_, at, what);
  }

  std::size_t line_of(std::size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    return static_cast<std::size_t>(it - line_starts_.begin()) - 1;
  }

  void emit(TokenKind kind, std::size_t begin, std::size_t end) {
    const std::size_t last = end > begin ? end - 1 : begin;
    out_.push_back(Token{kind, begin, end, line_of(begin), line_of(last)});
  }

  char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

  template <std::size_t N>
  std::size_t match_punct(std::size_t i, const std::string_view (&table)[N]) const {
    for (std::string_view p : table) {
      if (src_.substr(i, p.size()) == p) return p.size();
    }
    return 0;
  }

  // Number literal: permissive over digits, letters, '.', separators and
  // exponent signs; validity of the exact spelling is not our concern.
  std::size_t scan_number(std::size_t i) const {
    std::size_t j = i;
    while (j < src_.size()) {
      const unsigned char c = src_[j];
      if (ident_char(c) || c == '.') {
        if ((c == 'e' || c == 'E' || c == 'p' || c == 'P') && (at(j + 1) == '+' || at(j + 1) == '-')) {
          const bool hex = src_.substr(i, 2) == "0x" || src_.substr(i, 2) == "0X";
          if ((c == 'e' || c == 'E') != hex) {
            j += 2;
            continue;
          }
        }
        ++j;
      } else if (c == '\'' && lang_ == Language::cpp && j + 1 < src_.size() &&
                 ident_char(static_cast<unsigned char>(src_[j + 1]))) {
        j += 1;  // digit separator
      } else {
        break;
      }
    }
    return j;
  }

  // ---- Python -------------------------------------------------------------

  struct Indent {
    std::size_t col8;  // tabs to multiples of 8
    std::size_t col1;  // tabs as one column
  };

  static Indent measure(std::string_view ws) {
    Indent ind{0, 0};
    for (char c : ws) {
      if (c == '\t') {
        ind.col8 = (ind.col8 / 8 + 1) * 8;
        ind.col1 += 1;
      } else if (c == ' ') {
        ind.col8 += 1;
        ind.col1 += 1;
      } else if (c == '\f') {
        ind.col8 = 0;
        ind.col1 = 0;
      }
    }
    return ind;
  }

  std::size_t python_string_end(std::size_t i, std::size_t prefix_len) const {
    std::string_view prefix = src_.substr(i, prefix_len);
    const bool raw = prefix.find_first_of("rR") != std::string_view::npos;
    const std::size_t q = i + prefix_len;
    const char quote = src_[q];
    const bool triple = at(q + 1) == quote && at(q + 2) == quote;
    std::size_t j = q + (triple ? 3 : 1);
    while (true) {
      if (j >= src_.size()) fail(i, "unterminated string literal");
      const char c = src_[j];
      if (c == '\\') {
        if (j + 1 >= src_.size()) fail(i, "unterminated string literal");
        j += 2;
        continue;
      }
      (void)raw;  // a backslash still escapes the quote in raw strings
      if (!triple && c == '\n') fail(i, "end of line in string literal");
      if (c == quote) {
        if (!triple) return j + 1;
        if (at(j + 1) == quote && at(j + 2) == quote) return j + 3;
      }
      ++j;
    }
  }

  // Length of a string prefix at i followed by a quote, or 0.
  std::size_t python_prefix(std::size_t i) const {
    static constexpr std::array<std::string_view, 8> kPrefixes = {"br", "rb", "fr", "rf", "r", "u", "b", "f"};
    for (std::size_t len : {std::size_t{2}, std::size_t{1}}) {
      if (i + len >= src_.size()) continue;
      const char q = src_[i + len];
      if (q != '\'' && q != '"') continue;
      std::string lower;
      for (std::size_t k = 0; k < len; ++k) {
        lower.push_back(static_cast<char>(src_[i + k] | 0x20));
      }
      for (std::string_view p : kPrefixes) {
        if (p == lower) return len;
      }
    }
    return 0;
  }

  void lex_python() {
    std::vector<Indent> stack;
    int depth = 0;
    std::vector<char> brackets;
    bool at_line_start = true;
    bool line_has_code = false;  // logical line has code tokens
    std::size_t i = 0;
    const std::size_t n = src_.size();

    auto end_logical_line = [&](std::size_t pos, std::size_t len) {
      if (line_has_code) emit(TokenKind::newline, pos, pos + len);
      line_has_code = false;
      at_line_start = true;
    };

    while (i < n) {
      if (at_line_start && depth == 0) {
        // Measure indentation; blank or comment-only lines don't count.
        std::size_t j = i;
        while (j < n && (src_[j] == ' ' || src_[j] == '\t' || src_[j] == '\f')) ++j;
        if (j >= n || src_[j] == '\n' || src_[j] == '#' || (src_[j] == '\r' && at(j + 1) == '\n')) {
          i = j;
          at_line_start = false;
          // Falls through to regular scanning of the comment/newline below.
        } else if (src_[j] == '\\' && (at(j + 1) == '\n')) {
          fail(j, "line continuation at start of line");
        } else {
          const Indent ind = measure(src_.substr(i, j - i));
          if (stack.empty()) {
            stack.push_back(ind);
          } else if (ind.col8 > stack.back().col8) {
            if (ind.col1 <= stack.back().col1) fail(j, "inconsistent use of tabs and spaces");
            stack.push_back(ind);
            emit(TokenKind::indent, j, j);
          } else if (ind.col8 < stack.back().col8) {
            while (stack.size() > 1 && ind.col8 < stack.back().col8) {
              stack.pop_back();
              emit(TokenKind::dedent, j, j);
            }
            if (ind.col8 != stack.back().col8) fail(j, "unindent does not match any outer indentation level");
            if (ind.col1 != stack.back().col1) fail(j, "inconsistent use of tabs and spaces");
          } else if (ind.col1 != stack.back().col1) {
            fail(j, "inconsistent use of tabs and spaces");
          }
          i = j;
          at_line_start = false;
          continue;
        }
      }

      const unsigned char c = src_[i];
      if (c == '\n') {
        if (depth == 0) {
          end_logical_line(i, 1);
        }
        ++i;
        at_line_start = true;
        continue;
      }
      if (c == '\r' || c == ' ' || c == '\t' || c == '\f') {
        ++i;
        continue;
      }
      if (c == '\\') {
        if (at(i + 1) == '\n') {
          i += 2;
          continue;
        }
        if (at(i + 1) == '\r' && at(i + 2) == '\n') {
          i += 3;
          continue;
        }
        fail(i, "unexpected character after line continuation");
      }
      if (c == '#') {
        std::size_t j = i;
        while (j < n && src_[j] != '\n') ++j;
        std::size_t e = j;
        if (e > i && src_[e - 1] == '\r') --e;
        emit(TokenKind::comment, i, e);
        i = j;
        at_line_start = false;
        continue;
      }
      line_has_code = true;
      at_line_start = false;
      if (ident_start(c)) {
        const std::size_t prefix = python_prefix(i);
        if (prefix > 0) {
          const std::size_t e = python_string_end(i, prefix);
          emit(TokenKind::string, i, e);
          i = e;
          continue;
        }
        std::size_t j = i;
        while (j < n && ident_char(src_[j])) ++j;
        const std::string_view word = src_.substr(i, j - i);
        emit(is_keyword(word, lang_) ? TokenKind::keyword : TokenKind::identifier, i, j);
        i = j;
        continue;
      }
      if (c == '\'' || c == '"') {
        const std::size_t e = python_string_end(i, 0);
        emit(TokenKind::string, i, e);
        i = e;
        continue;
      }
      if (digit(c) || (c == '.' && digit(at(i + 1)))) {
        const std::size_t e = scan_number(i);
        emit(TokenKind::number, i, e);
        i = e;
        continue;
      }
      const std::size_t len = match_punct(i, kPythonPunct);
      if (len == 0) {
        if (c == '!' ) fail(i, "invalid syntax '!'");
        fail(i, std::string("invalid character '") + static_cast<char>(c) + "'");
      }
      const char p = static_cast<char>(c);
      if (len == 1 && (p == '(' || p == '[' || p == '{')) {
        brackets.push_back(p);
        ++depth;
      } else if (len == 1 && (p == ')' || p == ']' || p == '}')) {
        const char open = p == ')' ? '(' : p == ']' ? '[' : '{';
        if (brackets.empty() || brackets.back() != open) fail(i, "unmatched closing bracket");
        brackets.pop_back();
        --depth;
      }
      emit(TokenKind::punct, i, i + len);
      i += len;
    }
    if (depth != 0) fail(n, "unexpected end of input inside brackets");
    if (line_has_code) emit(TokenKind::newline, n, n);
    while (stack.size() > 1) {
      stack.pop_back();
      emit(TokenKind::dedent, n, n);
    }
  }

  // ---- Java / C++ ---------------------------------------------------------

  std::size_t quoted_end(std::size_t i, std::size_t open, char quote) const {
    std::size_t j = open + 1;
    while (true) {
      if (j >= src_.size() || src_[j] == '\n') fail(i, "unterminated literal");
      if (src_[j] == '\\') {
        j += 2;
        continue;
      }
      if (src_[j] == quote) return j + 1;
      ++j;
    }
  }

  std::size_t raw_string_end(std::size_t i, std::size_t quote) const {
    const std::size_t paren = src_.find('(', quote + 1);
    if (paren == std::string_view::npos || paren - quote - 1 > 16) fail(i, "bad raw string delimiter");
    const std::string close = ")" + std::string(src_.substr(quote + 1, paren - quote - 1)) + "\"";
    const std::size_t end = src_.find(close, paren + 1);
    if (end == std::string_view::npos) fail(i, "unterminated raw string");
    return end + close.size();
  }

  void lex_clike() {
    std::vector<char> brackets;
    bool line_start = true;  // only whitespace so far on this line
    std::size_t i = 0;
    const std::size_t n = src_.size();
    while (i < n) {
      const unsigned char c = src_[i];
      if (c == '\n') {
        line_start = true;
        ++i;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++i;
        continue;
      }
      if (c == '\\' && (at(i + 1) == '\n' || (at(i + 1) == '\r' && at(i + 2) == '\n'))) {
        i += at(i + 1) == '\n' ? 2 : 3;
        continue;
      }
      const bool was_line_start = line_start;
      line_start = false;
      if (c == '/' && at(i + 1) == '/') {
        std::size_t j = i;
        while (j < n && src_[j] != '\n') {
          if (src_[j] == '\\' && at(j + 1) == '\n') ++j;
          ++j;
        }
        std::size_t e = j;
        if (e > i && src_[e - 1] == '\r') --e;
        emit(TokenKind::comment, i, e);
        i = j;
        continue;
      }
      if (c == '/' && at(i + 1) == '*') {
        const std::size_t close = src_.find("*/", i + 2);
        if (close == std::string_view::npos) fail(i, "unterminated block comment");
        emit(TokenKind::comment, i, close + 2);
        i = close + 2;
        continue;
      }
      if (c == '#' && lang_ == Language::cpp && was_line_start) {
        std::size_t j = i;
        while (j < n && src_[j] != '\n') {
          if (src_[j] == '\\' && (at(j + 1) == '\n' || (at(j + 1) == '\r' && at(j + 2) == '\n'))) {
            j += at(j + 1) == '\n' ? 2 : 3;
            continue;
          }
          if (src_[j] == '/' && at(j + 1) == '*') {
            const std::size_t close = src_.find("*/", j + 2);
            if (close == std::string_view::npos) fail(j, "unterminated block comment");
            j = close + 2;
            continue;
          }
          ++j;
        }
        std::size_t e = j;
        while (e > i && (src_[e - 1] == '\r' || src_[e - 1] == ' ' || src_[e - 1] == '\t')) --e;
        emit(TokenKind::preprocessor, i, e);
        i = j;
        line_start = true;
        continue;
      }
      if (ident_start(c)) {
        std::size_t j = i;
        while (j < n && ident_char(src_[j])) ++j;
        const std::string_view word = src_.substr(i, j - i);
        if (lang_ == Language::cpp && (at(j) == '"' || at(j) == '\'')) {
          const bool string_prefix = word == "u8" || word == "u" || word == "U" || word == "L" ||
                                     word == "R" || word == "u8R" || word == "uR" || word == "UR" ||
                                     word == "LR";
          if (string_prefix) {
            std::size_t e;
            if (at(j) == '"' && word.back() == 'R') {
              e = raw_string_end(i, j);
            } else {
              e = quoted_end(i, j, at(j));
            }
            e = scan_ud_suffix(e);
            emit(at(j) == '"' ? TokenKind::string : TokenKind::character, i, e);
            i = e;
            continue;
          }
        }
        emit(is_keyword(word, lang_) ? TokenKind::keyword : TokenKind::identifier, i, j);
        i = j;
        continue;
      }
      if (c == '"') {
        std::size_t e;
        if (lang_ == Language::java && src_.substr(i, 3) == "\"\"\"") {
          std::size_t j = i + 3;
          while (true) {
            const std::size_t close = src_.find("\"\"\"", j);
            if (close == std::string_view::npos) fail(i, "unterminated text block");
            // An escaped quote just before the close does not terminate.
            std::size_t backslashes = 0;
            for (std::size_t k = close; k > i + 3 && src_[k - 1] == '\\'; --k) ++backslashes;
            if (backslashes % 2 == 0) {
              e = close + 3;
              break;
            }
            j = close + 1;
          }
        } else {
          e = quoted_end(i, i, '"');
        }
        if (lang_ == Language::cpp) e = scan_ud_suffix(e);
        emit(TokenKind::string, i, e);
        i = e;
        continue;
      }
      if (c == '\'') {
        std::size_t e = quoted_end(i, i, '\'');
        if (lang_ == Language::cpp) e = scan_ud_suffix(e);
        emit(TokenKind::character, i, e);
        i = e;
        continue;
      }
      if (digit(c) || (c == '.' && digit(at(i + 1)))) {
        const std::size_t e = scan_number(i);
        emit(TokenKind::number, i, e);
        i = e;
        continue;
      }
      const std::size_t len =
          lang_ == Language::java ? match_punct(i, kJavaPunct) : match_punct(i, kCppPunct);
      if (len == 0) fail(i, std::string("invalid character '") + static_cast<char>(c) + "'");
      const char p = static_cast<char>(c);
      if (len == 1 && (p == '(' || p == '[' || p == '{')) {
        brackets.push_back(p);
      } else if (len == 1 && (p == ')' || p == ']' || p == '}')) {
        const char open = p == ')' ? '(' : p == ']' ? '[' : '{';
        if (brackets.empty() || brackets.back() != open) fail(i, "unmatched closing bracket");
        brackets.pop_back();
      }
      emit(TokenKind::punct, i, i + len);
      i += len;
    }
    if (!brackets.empty()) fail(n, "unexpected end of input inside brackets");
  }

  std::size_t scan_ud_suffix(std::size_t e) const {
    if (e < src_.size() && (src_[e] == '_' || ident_start(static_cast<unsigned char>(src_[e])))) {
      while (e < src_.size() && ident_char(static_cast<unsigned char>(src_[e]))) ++e;
    }
    return e;
  }

  std::string_view src_;
  Language lang_;
  std::vector<std::size_t> line_starts_;
  std::vector<Token> out_;
};

}  // namespace

bool is_keyword(std::string_view word, Language language) {
  return keywords(language).contains(word);
}

Lexed lex(std::string_view source, Language language) {
  return Lexer(source, language).run();
}

std::vector<std::string> stripped_tokens(std::string_view source, Language language) {
  const Lexed lexed = lex(source, language);
  std::vector<std::string> out;
  out.reserve(lexed.tokens.size());
  for (const Token& t : lexed.tokens) {
    if (is_code(t.kind)) out.emplace_back(lexed.text(t));
  }
  return out;
}

std::vector<std::string_view> fallback_tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (ident_start(c)) {
      while (j < text.size() && ident_char(static_cast<unsigned char>(text[j]))) ++j;
    } else if (digit(c)) {
      while (j < text.size() && (digit(static_cast<unsigned char>(text[j])) || text[j] == '.' ||
                                 ident_char(static_cast<unsigned char>(text[j])))) {
        ++j;
      }
    }
    out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace memprobe::syntax
