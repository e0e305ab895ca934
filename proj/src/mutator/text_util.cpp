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

#include "mutator/text_util.hpp"

#include <algorithm>

namespace memprobe::mutator {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = text.find('\n', i);
    if (j == std::string_view::npos) j = text.size();
    std::string_view line = text.substr(i, j - i);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r' ||
                             line.back() == '\f' || line.back() == '\v'))
      line.remove_suffix(1);
    out.push_back(line);
    i = j + 1;
  }
  return out;
}

namespace {

std::vector<std::vector<std::size_t>> lcs_table(const std::vector<std::string_view>& a,
                                                const std::vector<std::string_view>& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = a.size(); i-- > 0;) {
    for (std::size_t j = b.size(); j-- > 0;) {
      t[i][j] = a[i] == b[j] ? t[i + 1][j + 1] + 1 : std::max(t[i + 1][j], t[i][j + 1]);
    }
  }
  return t;
}

}  // namespace

std::size_t lcs_length(const std::vector<std::string_view>& a,
                       const std::vector<std::string_view>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<bool> lcs_matched(const std::vector<std::string_view>& a,
                              const std::vector<std::string_view>& b) {
  const auto t = lcs_table(a, b);
  std::vector<bool> matched(b.size(), false);
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      matched[j] = true;
      ++i;
      ++j;
    } else if (t[i + 1][j] >= t[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return matched;
}

std::size_t line_begin(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  while (offset > 0 && text[offset - 1] != '\n') --offset;
  return offset;
}

std::size_t line_end(std::string_view text, std::size_t offset) {
  const std::size_t j = text.find('\n', offset);
  return j == std::string_view::npos ? text.size() : j + 1;
}

std::size_t line_of(std::string_view text, std::size_t offset) {
  return static_cast<std::size_t>(
      std::count(text.begin(), text.begin() + std::min(offset, text.size()), '\n'));
}

std::string_view line_indent(std::string_view text, std::size_t offset) {
  const std::size_t b = line_begin(text, offset);
  std::size_t e = b;
  while (e < text.size() && (text[e] == ' ' || text[e] == '\t')) ++e;
  return text.substr(b, e - b);
}

std::string indent_unit(std::string_view text, std::string_view fallback) {
  std::string best;
  std::string_view prev;
  bool have_prev = false;
  for (auto line : split_lines(text)) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::string_view ind = line.substr(0, line.find_first_not_of(" \t"));
    if (have_prev && ind.size() > prev.size() && ind.substr(0, prev.size()) == prev) {
      const std::string_view step = ind.substr(prev.size());
      if (best.empty() || step.size() < best.size()) best = std::string(step);
    }
    prev = ind;
    have_prev = true;
  }
  return best.empty() ? std::string(fallback) : best;
}

}  // namespace memprobe::mutator
