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

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ldsc/errors.hpp"

namespace ldsc {

using Tokens = std::vector<std::string>;

// Lowercases, splits on whitespace and emits each of . , ! ? ; : ( ) " as
// its own token.
inline Tokens tokenize(std::string_view text) {
  static constexpr std::string_view kPunct = ".,!?;:()\"";
  Tokens out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isspace(uc)) {
      flush();
    } else if (kPunct.find(ch) != std::string_view::npos) {
      flush();
      out.emplace_back(1, ch);
    } else {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    }
  }
  flush();
  return out;
}

inline std::string join(const Tokens& tokens, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += sep;
    out += tokens[i];
  }
  return out;
}

struct ActSlot {
  std::string act;
  std::string slot;
  auto operator<=>(const ActSlot&) const = default;
};

inline constexpr std::string_view kPlaceholderPrefix = "SLOT_";

// Bit-exact placeholder form: SLOT_<ACT>_<SLOT>.
inline std::string placeholder(const ActSlot& pair) {
  return std::string(kPlaceholderPrefix) + pair.act + "_" + pair.slot;
}

inline bool is_placeholder(std::string_view token) {
  return token.starts_with(kPlaceholderPrefix);
}

struct DialogueAct {
  std::string act;
  std::string slot;
  Tokens value;

  ActSlot pair() const { return {act, slot}; }
  bool operator==(const DialogueAct&) const = default;
};

struct MeaningRepresentation {
  std::vector<DialogueAct> acts;

  std::size_t size() const { return acts.size(); }
  bool empty() const { return acts.empty(); }
  bool operator==(const MeaningRepresentation&) const = default;
};

// Ordered set of distinct act-slot pairs. Positions are the coordinates of
// the one-hot act encoding and of the dialogue-act vector.
class ActSlotInventory {
 public:
  ActSlotInventory() = default;
  explicit ActSlotInventory(std::vector<ActSlot> pairs) {
    for (auto& p : pairs) add(std::move(p));
  }

  // Returns the index of pair, adding it if absent.
  std::size_t add(ActSlot pair) {
    if (auto it = index_.find(pair); it != index_.end()) return it->second;
    const std::size_t idx = pairs_.size();
    index_.emplace(pair, idx);
    pairs_.push_back(std::move(pair));
    return idx;
  }

  std::optional<std::size_t> find(const ActSlot& pair) const {
    if (auto it = index_.find(pair); it != index_.end()) return it->second;
    return std::nullopt;
  }

  std::size_t index_of(const ActSlot& pair) const {
    if (auto idx = find(pair)) return *idx;
    throw UnknownActSlot(pair.act, pair.slot);
  }

  bool contains(const ActSlot& pair) const { return index_.contains(pair); }
  std::size_t size() const { return pairs_.size(); }
  const ActSlot& operator[](std::size_t i) const { return pairs_[i]; }
  const std::vector<ActSlot>& pairs() const { return pairs_; }

  bool operator==(const ActSlotInventory& o) const { return pairs_ == o.pairs_; }

 private:
  std::vector<ActSlot> pairs_;
  std::map<ActSlot, std::size_t> index_;
};

// Declared act and slot labels plus the empty-value policy.
struct Schema {
  std::vector<std::string> acts;
  std::vector<std::string> slots;
  // Acts whose slots carry no value (REQUEST asks for the slot).
  std::vector<std::string> empty_value_acts;
  std::size_t max_acts = 10;

  // Restaurant-search labels used by both the crowd-sourced and the DSTC2
  // style corpora. NONE is the slot of acts that take no slot.
  static Schema restaurant() {
    return Schema{
        {"INFORM", "OFFER", "REQUEST", "IMPLICIT_CONFIRMATION",
         "EXPLICIT_CONFIRMATION", "CANTHELP", "SELECT", "WELCOMEMSG", "REPEAT",
         "REQMORE"},
        {"NAME", "ADDRESS", "PHONE", "AREA", "POSTCODE", "FOOD", "PRICERANGE",
         "NONE"},
        {"REQUEST", "WELCOMEMSG", "REPEAT", "REQMORE"},
        10};
  }

  bool has_act(std::string_view a) const {
    return std::find(acts.begin(), acts.end(), a) != acts.end();
  }
  bool has_slot(std::string_view s) const {
    return std::find(slots.begin(), slots.end(), s) != slots.end();
  }
  bool value_must_be_empty(std::string_view act) const {
    return std::find(empty_value_acts.begin(), empty_value_acts.end(), act) !=
           empty_value_acts.end();
  }

  void validate(const DialogueAct& da) const {
    if (!has_act(da.act)) throw SchemaError("unknown act '" + da.act + "'");
    if (!has_slot(da.slot)) throw SchemaError("unknown slot '" + da.slot + "'");
    const bool must_be_empty = value_must_be_empty(da.act) || da.slot == "NONE";
    if (must_be_empty && !da.value.empty()) {
      throw SchemaError(da.act + "-" + da.slot + " takes no value");
    }
    if (!must_be_empty && da.value.empty()) {
      throw SchemaError(da.act + "-" + da.slot + " requires a value");
    }
  }

  void validate(const MeaningRepresentation& mr) const {
    if (mr.empty()) throw SchemaError("meaning representation has no acts");
    if (mr.size() > max_acts) {
      throw SchemaError("meaning representation has " +
                        std::to_string(mr.size()) + " acts, maximum is " +
                        std::to_string(max_acts));
    }
    for (const auto& da : mr.acts) validate(da);
  }

  // Sort key placing pairs in declaration order.
  std::pair<std::size_t, std::size_t> rank(const ActSlot& p) const {
    auto a = std::find(acts.begin(), acts.end(), p.act) - acts.begin();
    auto s = std::find(slots.begin(), slots.end(), p.slot) - slots.begin();
    return {static_cast<std::size_t>(a), static_cast<std::size_t>(s)};
  }
};

// Uppercases a label and checks it is an identifier of [A-Z0-9_].
inline std::string normalize_label(std::string_view raw) {
  std::string out;
  for (char ch : raw) {
    const auto uc = static_cast<unsigned char>(ch);
    const char up = static_cast<char>(std::toupper(uc));
    if (!(std::isupper(static_cast<unsigned char>(up)) ||
          std::isdigit(static_cast<unsigned char>(up)) || up == '_')) {
      throw SchemaError("invalid label '" + std::string(raw) + "'");
    }
    out.push_back(up);
  }
  if (out.empty()) throw SchemaError("empty label");
  return out;
}

}  // namespace ldsc
