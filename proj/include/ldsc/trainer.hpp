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
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "ldsc/log.hpp"
#include "ldsc/model.hpp"
#include "ldsc/numerics/adam.hpp"
#include "ldsc/numerics/rng.hpp"

namespace ldsc {

struct TrainConfig {
  double learning_rate = 0.005;
  std::size_t batch_size = 16;
  std::size_t epochs = 200;
  double dropout = 0.5;
  std::size_t patience = 10;
  std::uint64_t seed = 1;
  std::size_t max_len = 30;
  LossConfig loss;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
};

struct TrainResult {
  double initial_valid_loss = 0.0;
  double best_valid_loss = 0.0;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
  std::vector<EpochLog> history;
};

inline double mean_loss(const NlgModel& model, const std::vector<TrainItem>& items,
                        const TrainConfig& cfg) {
  if (items.empty()) return 0.0;
  ForwardOptions opts;
  opts.loss = cfg.loss;
  opts.max_len = cfg.max_len;
  double total = 0.0;
  for (const auto& item : items) total += model.loss(item, opts);
  return total / static_cast<double>(items.size());
}

// Minibatch Adam with early stopping on validation loss. Gradients are
// averaged over each batch. The model is left holding the parameters of the
// best epoch (epoch 0 being the initial weights). When valid is empty the
// training set stands in for it.
inline TrainResult train_model(NlgModel& model, const std::vector<TrainItem>& train,
                               const std::vector<TrainItem>& valid,
                               const TrainConfig& cfg) {
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be at least 1");
  const std::vector<TrainItem>& monitor = valid.empty() ? train : valid;
  const std::string tag = model.prefix().empty() ? "train" : model.prefix() + "train";
  Rng root(cfg.seed);
  Rng order_rng = root.split(1);
  Rng dropout_rng = root.split(2);

  ParameterList params = model.parameters();
  auto snapshot = [&] {
    std::vector<Matrix> values;
    for (const Parameter* p : params) values.push_back(p->value);
    return values;
  };

  TrainResult result;
  result.initial_valid_loss = mean_loss(model, monitor, cfg);
  result.best_valid_loss = result.initial_valid_loss;
  std::vector<Matrix> best = snapshot();
  log::info(tag, " epoch 0 valid_loss=", result.initial_valid_loss);

  AdamConfig adam;
  adam.lr = cfg.learning_rate;
  ForwardOptions opts;
  opts.dropout = cfg.dropout;
  opts.rng = &dropout_rng;
  opts.loss = cfg.loss;
  opts.max_len = cfg.max_len;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs && !train.empty(); ++epoch) {
    order_rng.shuffle(order);
    double train_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      zero_grads(params);
      for (std::size_t k = start; k < end; ++k) {
        train_total += model.accumulate_gradients(train[order[k]], opts, scale);
      }
      adam_step(params, adam);
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = train_total / static_cast<double>(train.size());
    entry.valid_loss = mean_loss(model, monitor, cfg);
    result.history.push_back(entry);
    result.epochs_run = epoch;
    log::info(tag, " epoch ", epoch, " train_loss=", entry.train_loss,
              " valid_loss=", entry.valid_loss);
    if (entry.valid_loss < result.best_valid_loss) {
      result.best_valid_loss = entry.valid_loss;
      result.best_epoch = epoch;
      best = snapshot();
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      log::info(tag, " early stop at epoch ", epoch, ", best epoch ", result.best_epoch);
      break;
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best[i];
  return result;
}

inline std::vector<TrainItem> make_items(const NlgModel& model, const Dataset& d) {
  std::vector<TrainItem> items;
  items.reserve(d.size());
  for (const auto& ex : d.examples) items.push_back(model.make_item(ex));
  return items;
}

}  // namespace ldsc
