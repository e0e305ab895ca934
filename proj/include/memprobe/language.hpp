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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace memprobe {

enum class Language { python, java, cpp };

constexpr std::string_view to_string(Language language) {
  switch (language) {
    case Language::python:
      return "python";
    case Language::java:
      return "java";
    case Language::cpp:
      return "cpp";
  }
  return "?";
}

inline std::optional<Language> language_from_string(std::string_view name) {
  if (name == "python") return Language::python;
  if (name == "java") return Language::java;
  if (name == "cpp" || name == "c++") return Language::cpp;
  return std::nullopt;
}

// Maps a file extension (with dot) to a language, if it is one we ingest.
inline std::optional<Language> language_from_extension(std::string_view ext) {
  if (ext == ".py") return Language::python;
  if (ext == ".java") return Language::java;
  if (ext == ".cpp" || ext == ".cc" || ext == ".cxx" || ext == ".hpp" || ext == ".hh" ||
      ext == ".h" || ext == ".hxx")
    return Language::cpp;
  return std::nullopt;
}

}  // namespace memprobe
