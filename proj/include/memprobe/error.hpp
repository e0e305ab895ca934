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

#include <cstddef>
#include <stdexcept>
#include <string>

#include "memprobe/language.hpp"

namespace memprobe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The source did not lex or did not match the structural grammar.
class ParseFailure : public Error {
 public:
  ParseFailure(Language language, std::size_t offset, const std::string& what)
      : Error(std::string(to_string(language)) + " parse failure at byte " +
              std::to_string(offset) + ": " + what),
        language_(language),
        offset_(offset) {}

  Language language() const { return language_; }
  std::size_t offset() const { return offset_; }

 private:
  Language language_;
  std::size_t offset_;
};

class RenameCollision : public Error {
 public:
  using Error::Error;
};

class SchemaViolation : public Error {
 public:
  SchemaViolation(std::size_t line, std::string field, const std::string& what)
      : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Scoring preconditions.
class EmptyTrace : public Error {
 public:
  using Error::Error;
};
class EmptyText : public Error {
 public:
  using Error::Error;
};
class MissingMoments : public Error {
 public:
  using Error::Error;
};
class SampleMismatch : public Error {
 public:
  using Error::Error;
};
class ConditionMismatch : public Error {
 public:
  using Error::Error;
};
class NoNeighbors : public Error {
 public:
  using Error::Error;
};

class InsufficientNonMembers : public Error {
 public:
  using Error::Error;
};
class OneClassOnly : public Error {
 public:
  using Error::Error;
};

// A required (sample, model, condition) trace is missing.
class TraceGap : public Error {
 public:
  using Error::Error;
};

}  // namespace memprobe
