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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "memprobe/corpus.hpp"

namespace memprobe::testing {

// One function variant to run against the fixture's driver cases.
struct ExecVariant {
  std::string case_key;  // function name in cases.json
  std::string callee;    // name the variant defines (renaming changes it)
  std::string text;
};

struct ExecRun {
  bool ok = false;         // the interpreter / compiler ran
  std::string error;
  // outputs[v][c]: printed result of case c for variant v ("!..." on error).
  std::vector<std::vector<std::string>> outputs;
};

bool have_python();
bool have_cxx();

// Python variants are exec'd one by one in a fresh namespace.
ExecRun run_python(const std::vector<ExecVariant>& variants, const nlohmann::json& cases);

// C++ variants go into one translation unit, each in its own namespace.
ExecRun run_cpp(const std::vector<ExecVariant>& variants, const nlohmann::json& cases);

// Checks each text with the interpreter's own parser (ast.parse after
// dedent). Empty when python3 cannot be run.
std::vector<bool> python_syntax_ok(const std::vector<std::string>& texts);

std::string read_file(const std::filesystem::path& path);
std::filesystem::path fixtures_dir();

struct FixtureFunction {
  CodeSample sample;       // id "<file>:<name>@<line>"
  bool executable = false; // has driver cases
};

// Functions of the corpus and exec fixtures for one language.
std::vector<FixtureFunction> fixture_functions(Language language);

// Driver cases keyed by function name.
nlohmann::json exec_cases(Language language);

// Runs every variant with the language's driver (python3 or the C++ compiler).
ExecRun run_variants(Language language, const std::vector<ExecVariant>& variants,
                     const nlohmann::json& cases);

}  // namespace memprobe::testing
