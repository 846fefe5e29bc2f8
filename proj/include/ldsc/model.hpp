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
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ldsc/corpus/dataset.hpp"
#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/corpus/vocabulary.hpp"
#include "ldsc/encoder.hpp"
#include "ldsc/errors.hpp"
#include "ldsc/numerics/checkpoint.hpp"
#include "ldsc/numerics/dropout.hpp"
#include "ldsc/numerics/parameter.hpp"
#include "ldsc/numerics/rng.hpp"
#include "ldsc/scdecoder.hpp"

namespace ldsc {

struct ModelConfig {
  std::size_t embedding_dim = 32;
  std::size_t encoder_hidden = 32;
  std::size_t decoder_hidden = 64;
  double alpha = 1.0;
  // false: e_t forced to zero, i.e. the delexicalized-only baseline
  bool lexicalized = true;
  double init_scale = 0.08;
  double forget_bias = 1.0;
};

// One encoder step before embedding lookup.
struct EncoderItem {
  std::optional<std::size_t> act_index;
  std::vector<std::size_t> value_ids;
};

// A training sequence: encoder items, initial act vector and the target
// token ids y_1 .. y_T (ending with eos).
struct TrainItem {
  std::vector<EncoderItem> encoder;
  Vec d0;
  std::vector<std::size_t> targets;
};

struct ForwardOptions {
  double dropout = 0.0;
  Rng* rng = nullptr;  // dropout is active only with an rng and dropout > 0
  LossConfig loss;
  std::size_t max_len = 30;
};

// Encoder-decoder with a shared embedding table. With act_conditioned set it
// is the lexicalized/delexicalized sc-LSTM generator; without it (no act-slot
// pairs) it is the sentence auto-encoder with a plain LSTM decoder.
class NlgModel {
 public:
  NlgModel() = default;
  NlgModel(Vocabulary vocab, ActSlotInventory inventory, ModelConfig config,
           std::string prefix = {})
      : vocab_(std::move(vocab)),
        inventory_(std::move(inventory)),
        config_(config),
        prefix_(std::move(prefix)),
        emb_(prefix_ + "emb", vocab_.size(), config.embedding_dim),
        enc_(prefix_, inventory_.size() + config.embedding_dim,
             config.encoder_hidden),
        dec_(prefix_, config.embedding_dim, config.decoder_hidden,
             inventory_.size(), 2 * config.encoder_hidden, vocab_.size()) {}

  void init(Rng& rng) {
    init_uniform(emb_.value, rng, config_.init_scale);
    enc_.fwd.init(rng, config_.init_scale, config_.forget_bias);
    enc_.bwd.init(rng, config_.init_scale, config_.forget_bias);
    dec_.init(rng, config_.init_scale, config_.forget_bias);
  }

  ParameterList parameters() {
    ParameterList out{&emb_};
    enc_.collect(out);
    dec_.collect(out);
    return out;
  }

  Parameter* find_parameter(const std::string& name) {
    for (Parameter* p : parameters()) {
      if (p->name == name) return p;
    }
    return nullptr;
  }

  const Parameter* find_parameter(const std::string& name) const {
    return const_cast<NlgModel*>(this)->find_parameter(name);
  }

  const Vocabulary& vocab() const { return vocab_; }
  const ActSlotInventory& inventory() const { return inventory_; }
  const ModelConfig& config() const { return config_; }
  ModelConfig& mutable_config() { return config_; }
  const std::string& prefix() const { return prefix_; }
  const Parameter& embeddings() const { return emb_; }
  Parameter& embeddings() { return emb_; }
  const EncoderParams& encoder() const { return enc_; }
  EncoderParams& encoder() { return enc_; }
  const ScLstmParams& decoder() const { return dec_; }
  ScLstmParams& decoder() { return dec_; }
  bool act_conditioned() const { return inventory_.size() > 0; }

  // --- Items -------------------------------------------------------------

  std::vector<EncoderItem> encoder_items(const MeaningRepresentation& mr) const {
    std::vector<EncoderItem> items;
    for (const auto& da : mr.acts) {
      items.push_back({inventory_.index_of(da.pair()), vocab_.encode(da.value)});
    }
    return items;
  }

  TrainItem make_item(const Example& ex) const {
    TrainItem item;
    item.encoder = encoder_items(ex.mr);
    item.d0 = init_act_vector(ex.mr, inventory_);
    item.targets = vocab_.encode(ex.delex_text);
    item.targets.push_back(Vocabulary::kEos);
    return item;
  }

  // Auto-encoder item: every token is one encoder step, the target is the
  // sentence itself.
  TrainItem make_reconstruction_item(const Tokens& sentence) const {
    TrainItem item;
    for (const auto& t : sentence) item.encoder.push_back({std::nullopt, {vocab_.index(t)}});
    item.targets = vocab_.encode(sentence);
    item.targets.push_back(Vocabulary::kEos);
    return item;
  }

  std::vector<EncoderInput> encoder_inputs(const std::vector<EncoderItem>& items) const {
    std::vector<EncoderInput> inputs;
    inputs.reserve(items.size());
    for (const auto& it : items) {
      inputs.push_back(make_encoder_input(it.act_index, inventory_.size(),
                                          it.value_ids, emb_.value,
                                          config_.lexicalized));
    }
    return inputs;
  }

  // --- Inference ---------------------------------------------------------

  DecoderState initial_state(const std::vector<EncoderItem>& items, const Vec& d0) const {
    const auto inputs = encoder_inputs(items);
    const auto states = bilstm_encode(inputs, enc_);
    return init_state(pool_context(states), d0, dec_);
  }

  DecoderState initial_state(const MeaningRepresentation& mr) const {
    return initial_state(encoder_items(mr), init_act_vector(mr, inventory_));
  }

  StepOutput step(const DecoderState& state, std::size_t token) const {
    return sc_lstm_step(state, emb_.value.row(token), dec_, config_.alpha);
  }

  // Log-probabilities of the next token after consuming `token`.
  std::pair<Vec, DecoderState> step_log_probs(const DecoderState& state,
                                              std::size_t token) const {
    ScStepCache cache;
    StepOutput out = sc_lstm_step(state, emb_.value.row(token), dec_, config_.alpha, &cache);
    return {log_softmax(cache.logits), std::move(out.state)};
  }

  // --- Training ----------------------------------------------------------

  // Loss of one item; dropout follows opts.
  double loss(const TrainItem& item, const ForwardOptions& opts = {}) const {
    return run(item, opts, nullptr, 0.0);
  }

  // Forward and backward pass; gradients (multiplied by scale) are added to
  // the parameters' grad buffers. Returns the unscaled loss.
  double accumulate_gradients(const TrainItem& item, const ForwardOptions& opts,
                              double scale = 1.0) {
    return run(item, opts, this, scale);
  }

  // --- Persistence -------------------------------------------------------

  Checkpoint to_checkpoint() const {
    Checkpoint ckpt;
    std::ostringstream meta;
    meta << std::setprecision(17) << "prefix " << (prefix_.empty() ? "-" : prefix_) << '\n'
         << "embedding_dim " << config_.embedding_dim << '\n'
         << "encoder_hidden " << config_.encoder_hidden << '\n'
         << "decoder_hidden " << config_.decoder_hidden << '\n'
         << "alpha " << config_.alpha << '\n'
         << "lexicalized " << (config_.lexicalized ? 1 : 0) << '\n';
    for (const auto& p : inventory_.pairs()) meta << "pair " << p.act << ' ' << p.slot << '\n';
    for (std::size_t i = Vocabulary::kNumReserved; i < vocab_.size(); ++i) {
      meta << "word " << vocab_.word(i) << '\n';
    }
    ckpt.metadata = meta.str();
    auto self = const_cast<NlgModel*>(this)->parameters();
    for (const Parameter* p : self) ckpt.tensors.push_back({p->name, p->value});
    return ckpt;
  }

  static NlgModel from_checkpoint(const Checkpoint& ckpt) {
    std::istringstream meta(ckpt.metadata);
    std::string key;
    ModelConfig cfg;
    std::string prefix;
    std::vector<ActSlot> pairs;
    std::vector<std::string> words = {"<pad>", "<bos>", "<eos>", "<unk>"};
    while (meta >> key) {
      if (key == "prefix") {
        meta >> prefix;
        if (prefix == "-") prefix.clear();
      } else if (key == "embedding_dim") {
        meta >> cfg.embedding_dim;
      } else if (key == "encoder_hidden") {
        meta >> cfg.encoder_hidden;
      } else if (key == "decoder_hidden") {
        meta >> cfg.decoder_hidden;
      } else if (key == "alpha") {
        meta >> cfg.alpha;
      } else if (key == "lexicalized") {
        int v = 1;
        meta >> v;
        cfg.lexicalized = v != 0;
      } else if (key == "pair") {
        ActSlot p;
        meta >> p.act >> p.slot;
        pairs.push_back(std::move(p));
      } else if (key == "word") {
        std::string w;
        meta >> w;
        words.push_back(std::move(w));
      } else {
        throw IoError("unknown checkpoint metadata key " + key);
      }
    }
    NlgModel model(Vocabulary::from_words(words), ActSlotInventory(pairs), cfg, prefix);
    for (Parameter* p : model.parameters()) {
      const Matrix* m = ckpt.find(p->name);
      if (m == nullptr) throw IoError("checkpoint lacks parameter " + p->name);
      if (!m->same_shape(p->value)) throw ShapeMismatch(p->name);
      p->value = *m;
    }
    return model;
  }

 private:
  double run(const TrainItem& item, const ForwardOptions& opts, NlgModel* grads,
             double scale) const {
    const bool drop = opts.rng != nullptr && opts.dropout > 0.0;
    const std::size_t e_dim = config_.embedding_dim;
    const std::size_t d_dim = inventory_.size();

    // Encoder, with dropout on the lexical part of z_t.
    auto inputs = encoder_inputs(item.encoder);
    std::vector<Vec> enc_masks;
    if (drop) {
      for (auto& in : inputs) {
        enc_masks.push_back(dropout_vec(*opts.rng, e_dim, opts.dropout));
        for (std::size_t j = 0; j < e_dim; ++j) in.z[d_dim + j] *= enc_masks.back()[j];
      }
    }
    const auto states = bilstm_encode(inputs, enc_);
    const Vec x = pool_context(states);

    DecoderMasks masks;
    if (drop) {
      for (std::size_t t = 0; t < item.targets.size(); ++t) {
        masks.input.push_back(dropout_vec(*opts.rng, e_dim, opts.dropout));
        masks.hidden.push_back(
            dropout_vec(*opts.rng, config_.decoder_hidden, opts.dropout));
      }
    }
    const auto tf = forward_teacher_forced(x, item.d0, item.targets, emb_.value, dec_,
                                           config_.alpha, Vocabulary::kBos,
                                           opts.max_len, drop ? &masks : nullptr);
    const double loss = sequence_loss(tf, item.targets, opts.loss);
    if (grads == nullptr) return loss;

    const Vec dx = decoder_backward(grads->dec_, grads->emb_.grad, tf, item.targets,
                                    opts.loss, config_.alpha,
                                    drop ? &masks : nullptr, scale);
    const auto dz = bilstm_backward(grads->enc_, states, dx);
    if (config_.lexicalized) {
      for (std::size_t t = 0; t < inputs.size(); ++t) {
        const auto& ids = inputs[t].value_ids;
        if (ids.empty()) continue;
        Vec de(dz[t].begin() + static_cast<long>(d_dim), dz[t].end());
        if (drop) {
          for (std::size_t j = 0; j < e_dim; ++j) de[j] *= enc_masks[t][j];
        }
        const double inv = 1.0 / static_cast<double>(ids.size());
        for (std::size_t id : ids) axpy(inv, de, grads->emb_.grad.row(id));
      }
    }
    return loss;
  }

  Vocabulary vocab_;
  ActSlotInventory inventory_;
  ModelConfig config_;
  std::string prefix_;
  Parameter emb_;
  EncoderParams enc_;
  ScLstmParams dec_;
};

// Fresh act-conditioned model for a training set.
inline NlgModel make_model(const Dataset& train, const ModelConfig& config,
                           std::size_t min_count, std::uint64_t seed) {
  NlgModel model(build_vocabulary(train, min_count), train.inventory, config);
  Rng rng(seed);
  model.init(rng);
  return model;
}

inline void save_model(const NlgModel& model, const std::filesystem::path& path) {
  save_checkpoint(path, model.to_checkpoint());
}

inline NlgModel load_model(const std::filesystem::path& path) {
  return NlgModel::from_checkpoint(load_checkpoint(path));
}

}  // namespace ldsc
