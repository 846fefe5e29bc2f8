// Copyright 2026 The ldsc Authors. All Rights Reserved.
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

namespace ldsc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
 public:
  explicit ShapeMismatch(const std::string& what)
      : Error("shape mismatch: " + what), name_(what) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class NonFiniteGradient : public Error {
 public:
  explicit NonFiniteGradient(const std::string& param)
      : Error("non-finite gradient in parameter " + param), param_(param) {}
  const std::string& param() const { return param_; }

 private:
  std::string param_;
};

class ValueNotFound : public Error {
 public:
  ValueNotFound(const std::string& act, const std::string& slot)
      : Error("value for " + act + "-" + slot + " not found in text") {}
};

class OverlappingValues : public Error {
 public:
  OverlappingValues(const std::string& act, const std::string& slot)
      : Error("value for " + act + "-" + slot +
              " overlaps a span claimed by another value") {}
};

class UnboundPlaceholder : public Error {
 public:
  explicit UnboundPlaceholder(const std::string& token)
      : Error("no value bound to placeholder " + token), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyDataset : public Error {
 public:
  EmptyDataset() : Error("dataset is empty") {}
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error(what + " is empty") {}
};

class UnknownGrammar : public Error {
 public:
  explicit UnknownGrammar(const std::string& id)
      : Error("unknown grammar: " + id) {}
};

class UnknownActSlot : public Error {
 public:
  UnknownActSlot(const std::string& act, const std::string& slot)
      : Error("act-slot pair " + act + "-" + slot + " is not in the inventory") {}
};

class SequenceTooLong : public Error {
 public:
  SequenceTooLong(std::size_t length, std::size_t max_len)
      : Error("target length " + std::to_string(length) + " exceeds maximum " +
              std::to_string(max_len)) {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("evaluation corpus is empty") {}
};

class CorpusTooSmall : public Error {
 public:
  CorpusTooSmall() : Error("CIDEr needs at least two distinct pairs") {}
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldsc
