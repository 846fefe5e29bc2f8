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
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/errors.hpp"

namespace ldsc {

namespace detail {

inline bool matches_at(const Tokens& text, std::size_t start,
                       const Tokens& value) {
  if (start + value.size() > text.size()) return false;
  return std::equal(value.begin(), value.end(), text.begin() + start);
}

// Acts with a non-empty value, longest value first, ties in MR order.
inline std::vector<std::size_t> longest_first(const MeaningRepresentation& mr) {
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < mr.size(); ++k) {
    if (!mr.acts[k].value.empty()) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mr.acts[a].value.size() > mr.acts[b].value.size();
  });
  return order;
}

inline Tokens emit_with_spans(const Tokens& text, const MeaningRepresentation& mr,
                              const std::vector<long>& span_owner,
                              const std::vector<bool>& span_start) {
  Tokens out;
  for (std::size_t i = 0; i < text.size();) {
    if (span_owner[i] < 0) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    const auto k = static_cast<std::size_t>(span_owner[i]);
    out.push_back(placeholder(mr.acts[k].pair()));
    std::size_t j = i + 1;
    while (j < text.size() && span_owner[j] == span_owner[i] && !span_start[j]) ++j;
    i = j;
  }
  return out;
}

}  // namespace detail

// Start position of the span each act claims in text (npos for empty values).
// Longest values are placed first, each at its leftmost unclaimed occurrence.
inline std::vector<std::size_t> value_spans(const Tokens& text,
                                            const MeaningRepresentation& mr) {
  constexpr auto npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> starts(mr.size(), npos);
  std::vector<bool> claimed(text.size(), false);
  for (std::size_t k : detail::longest_first(mr)) {
    const DialogueAct& da = mr.acts[k];
    bool seen = false;
    for (std::size_t s = 0; s + da.value.size() <= text.size(); ++s) {
      if (!detail::matches_at(text, s, da.value)) continue;
      seen = true;
      const bool free = std::none_of(claimed.begin() + s,
                                     claimed.begin() + s + da.value.size(),
                                     [](bool c) { return c; });
      if (!free) continue;
      std::fill(claimed.begin() + s, claimed.begin() + s + da.value.size(), true);
      starts[k] = s;
      break;
    }
    if (starts[k] == npos) {
      if (seen) throw OverlappingValues(da.act, da.slot);
      throw ValueNotFound(da.act, da.slot);
    }
  }
  return starts;
}

// Replaces the leftmost occurrence of every non-empty value with its
// placeholder, longest value first. Empty values insert nothing.
inline Tokens delexicalize(const Tokens& text, const MeaningRepresentation& mr) {
  const auto starts = value_spans(text, mr);
  std::vector<long> owner(text.size(), -1);
  std::vector<bool> span_start(text.size(), false);
  for (std::size_t k = 0; k < mr.size(); ++k) {
    if (mr.acts[k].value.empty()) continue;
    span_start[starts[k]] = true;
    for (std::size_t j = 0; j < mr.acts[k].value.size(); ++j) {
      owner[starts[k] + j] = static_cast<long>(k);
    }
  }
  return detail::emit_with_spans(text, mr, owner, span_start);
}

// Result of lexicalization that tolerates unbound placeholders.
struct LexicalizeResult {
  Tokens tokens;
  std::vector<std::string> unbound;
};

// Replaces each placeholder by its value; repeated act-slot pairs hand out
// their values in MR order. Unbound placeholders are kept verbatim.
inline LexicalizeResult lexicalize_lenient(const Tokens& delex,
                                           const MeaningRepresentation& mr) {
  std::map<std::string, std::deque<const Tokens*>> queues;
  for (const auto& da : mr.acts) {
    if (!da.value.empty()) queues[placeholder(da.pair())].push_back(&da.value);
  }
  LexicalizeResult res;
  for (const auto& tok : delex) {
    if (!is_placeholder(tok)) {
      res.tokens.push_back(tok);
      continue;
    }
    auto it = queues.find(tok);
    if (it == queues.end() || it->second.empty()) {
      res.tokens.push_back(tok);
      res.unbound.push_back(tok);
      continue;
    }
    const Tokens* value = it->second.front();
    it->second.pop_front();
    res.tokens.insert(res.tokens.end(), value->begin(), value->end());
  }
  return res;
}

inline Tokens lexicalize(const Tokens& delex, const MeaningRepresentation& mr) {
  auto res = lexicalize_lenient(delex, mr);
  if (!res.unbound.empty()) throw UnboundPlaceholder(res.unbound.front());
  return std::move(res.tokens);
}

// Permutes the values among acts that share an act-slot pair so that MR
// order matches the order of their mentions in text. Afterwards
// lexicalize(delexicalize(text, mr), mr) == text.
inline MeaningRepresentation align_to_text(const Tokens& text,
                                           MeaningRepresentation mr) {
  const auto starts = value_spans(text, mr);
  std::map<ActSlot, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < mr.size(); ++k) {
    if (!mr.acts[k].value.empty()) groups[mr.acts[k].pair()].push_back(k);
  }
  for (const auto& [pair, members] : groups) {
    if (members.size() < 2) continue;
    std::vector<std::size_t> by_pos = members;
    std::sort(by_pos.begin(), by_pos.end(),
              [&](std::size_t a, std::size_t b) { return starts[a] < starts[b]; });
    std::vector<Tokens> values;
    for (std::size_t k : by_pos) values.push_back(mr.acts[k].value);
    for (std::size_t i = 0; i < members.size(); ++i) {
      mr.acts[members[i]].value = std::move(values[i]);
    }
  }
  return mr;
}

// Replaces every non-overlapping mention of every non-empty value, longest
// value first. Used to recover slot mentions from lexicalized system output,
// where values may be missing or repeated.
inline Tokens delexicalize_all_mentions(const Tokens& text,
                                        const MeaningRepresentation& mr) {
  std::vector<long> owner(text.size(), -1);
  std::vector<bool> span_start(text.size(), false);
  std::map<std::pair<ActSlot, Tokens>, bool> done;
  for (std::size_t k : detail::longest_first(mr)) {
    const DialogueAct& da = mr.acts[k];
    if (!done.emplace(std::make_pair(da.pair(), da.value), true).second) continue;
    for (std::size_t s = 0; s + da.value.size() <= text.size();) {
      const bool free = std::all_of(owner.begin() + s,
                                    owner.begin() + s + da.value.size(),
                                    [](long o) { return o < 0; });
      if (free && detail::matches_at(text, s, da.value)) {
        span_start[s] = true;
        for (std::size_t j = 0; j < da.value.size(); ++j) {
          owner[s + j] = static_cast<long>(k);
        }
        s += da.value.size();
      } else {
        ++s;
      }
    }
  }
  return detail::emit_with_spans(text, mr, owner, span_start);
}

}  // namespace ldsc
