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
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/corpus/vocabulary.hpp"
#include "ldsc/errors.hpp"
#include "ldsc/generation.hpp"
#include "ldsc/model.hpp"
#include "ldsc/trainer.hpp"

namespace ldsc {

inline const std::vector<std::string>& default_pretrain_keywords() {
  static const std::vector<std::string> kw = {"phone", "postcode",   "price",      "food",
                                              "area",  "restaurant", "nice",       "address",
                                              "reservation", "book"};
  return kw;
}

struct PretrainCorpus {
  std::vector<Tokens> sentences;
  std::vector<std::size_t> scores;     // keyword hits, non-increasing
  std::vector<std::size_t> positions;  // index into the raw input
  std::vector<std::string> keywords;
  std::size_t k = 0;
};

inline std::size_t keyword_score(const Tokens& sentence, const std::set<std::string>& kw) {
  std::size_t n = 0;
  for (const auto& t : sentence) n += kw.count(t);
  return n;
}

// Keeps the k sentences with most keyword tokens, earlier sentences first
// among equal scores.
inline PretrainCorpus select_pretraining_sentences(
    const std::vector<std::string>& raw,
    const std::vector<std::string>& keywords = default_pretrain_keywords(),
    std::size_t k = 5000) {
  if (k < 1) throw ConfigError("pretraining k must be at least 1");
  std::vector<Tokens> tokenized;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Tokens t = tokenize(raw[i]);
    if (t.empty()) continue;
    tokenized.push_back(std::move(t));
    index.push_back(i);
  }
  if (tokenized.empty()) throw EmptyInput("pretraining sentences");

  std::set<std::string> kw;
  for (const auto& w : keywords) {
    for (auto& t : tokenize(w)) kw.insert(std::move(t));
  }
  std::vector<std::size_t> score(tokenized.size());
  for (std::size_t i = 0; i < tokenized.size(); ++i) score[i] = keyword_score(tokenized[i], kw);

  std::vector<std::size_t> order(tokenized.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(std::min(k, order.size()));

  PretrainCorpus out;
  out.keywords = keywords;
  out.k = k;
  for (std::size_t i : order) {
    out.sentences.push_back(tokenized[i]);
    out.scores.push_back(score[i]);
    out.positions.push_back(index[i]);
  }
  return out;
}

inline std::vector<std::string> read_sentence_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

struct AutoencoderConfig {
  ModelConfig model;  // alpha and lexicalized are ignored
  TrainConfig train;
  std::size_t min_count = 1;
};

inline constexpr std::string_view kAutoencoderPrefix = "ae.";

inline Vocabulary build_sentence_vocabulary(const std::vector<Tokens>& sentences,
                                            std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : sentences) {
    for (const auto& t : s) ++counts[t];
  }
  Vocabulary v;
  for (const auto& [w, c] : counts) {
    if (c >= min_count) v.add(w);
  }
  return v;
}

// Builds and initializes the auto-encoder: an NlgModel without act-slot
// pairs, so its decoder is a plain LSTM.
inline NlgModel make_autoencoder(const PretrainCorpus& corpus, const AutoencoderConfig& cfg) {
  if (corpus.sentences.empty()) throw EmptyInput("pretraining corpus");
  NlgModel ae(build_sentence_vocabulary(corpus.sentences, cfg.min_count), ActSlotInventory{},
              cfg.model, std::string(kAutoencoderPrefix));
  Rng rng(cfg.train.seed);
  ae.init(rng);
  return ae;
}

inline std::vector<TrainItem> reconstruction_items(const NlgModel& ae,
                                                   const std::vector<Tokens>& sentences,
                                                   std::size_t max_len) {
  std::vector<TrainItem> items;
  for (const auto& s : sentences) {
    if (s.size() + 1 > max_len) {
      log::debug("skipping pretraining sentence of ", s.size(), " tokens");
      continue;
    }
    items.push_back(ae.make_reconstruction_item(s));
  }
  if (items.empty()) throw EmptyInput("pretraining sentences within max_len");
  return items;
}

struct Autoencoder {
  NlgModel model;
  TrainResult result;
};

// Teacher-forced reconstruction training with plain cross-entropy.
inline Autoencoder train_autoencoder(const PretrainCorpus& corpus, const AutoencoderConfig& cfg) {
  Autoencoder out{make_autoencoder(corpus, cfg), {}};
  TrainConfig tc = cfg.train;
  tc.loss.act_terms = false;
  const auto items = reconstruction_items(out.model, corpus.sentences, tc.max_len);
  out.result = train_model(out.model, items, {}, tc);
  return out;
}

inline Tokens reconstruct(const NlgModel& ae, const Tokens& sentence, std::size_t max_len) {
  const TrainItem item = ae.make_reconstruction_item(sentence);
  const auto ids = greedy_decode(ae, ae.initial_state(item.encoder, item.d0), max_len);
  return ae.vocab().decode(ids);
}

inline constexpr std::array<const char*, 4> kTransferredGates = {"W_f", "W_i", "W_o", "W_c"};

// Copies the auto-encoder decoder's recurrent gate matrices into the target
// decoder. Nothing else in the target is touched.
inline void transfer_weights(const NlgModel& ae, NlgModel& target) {
  std::vector<std::pair<const Parameter*, Parameter*>> plan;
  for (const char* gate : kTransferredGates) {
    const std::string src_name = ae.prefix() + "dec." + gate;
    const std::string dst_name = target.prefix() + "dec." + gate;
    const Parameter* src = ae.find_parameter(src_name);
    Parameter* dst = target.find_parameter(dst_name);
    if (src == nullptr) throw ShapeMismatch(src_name);
    if (dst == nullptr) throw ShapeMismatch(dst_name);
    if (!src->value.same_shape(dst->value)) throw ShapeMismatch(dst_name);
    plan.emplace_back(src, dst);
  }
  for (auto& [src, dst] : plan) dst->value = src->value;
}

}  // namespace ldsc
