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
#include <string>
#include <unordered_map>
#include <vector>

#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/errors.hpp"

namespace ldsc {

// Word <-> index map. Indices 0..3 are the reserved tokens, followed by the
// slot placeholders of the inventory, followed by ordinary words.
class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kBos = 1;
  static constexpr std::size_t kEos = 2;
  static constexpr std::size_t kUnk = 3;
  static constexpr std::size_t kNumReserved = 4;

  Vocabulary() {
    for (const char* w : {"<pad>", "<bos>", "<eos>", "<unk>"}) push(w);
  }

  // Adds word if absent and returns its index.
  std::size_t add(const std::string& word) {
    if (auto it = index_.find(word); it != index_.end()) return it->second;
    return push(word);
  }

  std::size_t index(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? kUnk : it->second;
  }

  bool contains(const std::string& word) const { return index_.contains(word); }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  bool is_reserved(std::size_t i) const { return i < kNumReserved; }
  bool is_placeholder_index(std::size_t i) const {
    return i < words_.size() && is_placeholder(words_[i]);
  }

  // Count of entries that are neither reserved nor placeholders.
  std::size_t num_words() const {
    std::size_t n = 0;
    for (std::size_t i = kNumReserved; i < words_.size(); ++i) {
      if (!is_placeholder(words_[i])) ++n;
    }
    return n;
  }

  std::vector<std::size_t> encode(const Tokens& tokens) const {
    std::vector<std::size_t> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(index(t));
    return ids;
  }

  Tokens decode(const std::vector<std::size_t>& ids) const {
    Tokens out;
    out.reserve(ids.size());
    for (std::size_t i : ids) out.push_back(word(i));
    return out;
  }

  // Rebuilds a vocabulary from its full word list (reserved entries first).
  static Vocabulary from_words(const std::vector<std::string>& words) {
    Vocabulary v;
    if (words.size() < kNumReserved) throw SchemaError("vocabulary too short");
    for (std::size_t i = 0; i < kNumReserved; ++i) {
      if (words[i] != v.words_[i]) throw SchemaError("reserved tokens out of place");
    }
    for (std::size_t i = kNumReserved; i < words.size(); ++i) {
      if (v.contains(words[i])) throw SchemaError("duplicate word " + words[i]);
      v.push(words[i]);
    }
    return v;
  }

  bool operator==(const Vocabulary& o) const { return words_ == o.words_; }

 private:
  std::size_t push(const std::string& word) {
    const std::size_t i = words_.size();
    words_.push_back(word);
    index_.emplace(word, i);
    return i;
  }

  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace ldsc
