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
#include <cstdint>
#include <string>
#include <vector>

#include "ldsc/model.hpp"
#include "ldsc/numerics/gradcheck.hpp"
#include "ldsc/numerics/rng.hpp"

namespace ldsc {

// A small random model together with one random training item.
struct GradcheckInstance {
  NlgModel model;
  TrainItem item;
};

struct GradcheckLimits {
  std::size_t max_d = 3;
  std::size_t max_e = 4;
  std::size_t max_h = 5;
  std::size_t max_v = 8;
  std::size_t max_m = 3;
  std::size_t max_t = 4;
  double init_scale = 0.5;
};

inline GradcheckInstance random_gradcheck_instance(std::uint64_t seed,
                                                   const GradcheckLimits& lim = {}) {
  Rng rng(seed);
  auto between = [&](std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); };

  static const char* kActs[] = {"INFORM", "OFFER", "CONFIRM"};
  static const char* kSlots[] = {"FOOD", "AREA", "PRICE"};
  const std::size_t d = between(1, lim.max_d);
  std::vector<ActSlot> pairs;
  for (std::size_t i = 0; i < d; ++i) pairs.push_back({kActs[i], kSlots[i]});
  ActSlotInventory inventory(pairs);

  Vocabulary vocab;
  for (const auto& p : pairs) vocab.add(placeholder(p));
  const std::size_t v = between(vocab.size() + 1, lim.max_v);
  for (std::size_t i = vocab.size(); i < v; ++i) vocab.add("w" + std::to_string(i));

  ModelConfig cfg;
  cfg.embedding_dim = between(1, lim.max_e);
  cfg.encoder_hidden = between(1, lim.max_h);
  cfg.decoder_hidden = between(1, lim.max_h);
  cfg.alpha = 0.5 + rng.uniform();
  cfg.init_scale = lim.init_scale;
  cfg.lexicalized = true;

  GradcheckInstance inst{NlgModel(vocab, inventory, cfg), {}};
  inst.model.init(rng);
  // Biases start at zero; give them random values too.
  for (Parameter* p : inst.model.parameters()) {
    if (p->name.find(".b_") != std::string::npos) init_uniform(p->value, rng, lim.init_scale);
  }

  const std::size_t m = between(1, lim.max_m);
  for (std::size_t i = 0; i < m; ++i) {
    EncoderItem e;
    e.act_index = rng.below(d);
    const std::size_t n_values = rng.below(3);
    for (std::size_t k = 0; k < n_values; ++k) {
      e.value_ids.push_back(Vocabulary::kNumReserved + rng.below(vocab.size() - Vocabulary::kNumReserved));
    }
    inst.item.encoder.push_back(std::move(e));
  }
  inst.item.d0.resize(d);
  for (auto& x : inst.item.d0) x = 0.1 + 0.9 * rng.uniform();
  const std::size_t t = between(1, lim.max_t);
  for (std::size_t i = 0; i + 1 < t; ++i) {
    inst.item.targets.push_back(Vocabulary::kEos + 1 + rng.below(vocab.size() - 3));
  }
  inst.item.targets.push_back(Vocabulary::kEos);
  return inst;
}

// Max relative error between the analytic gradient and central differences
// over all parameters, for the full loss with dropout off.
inline double gradcheck_instance(GradcheckInstance& inst, const LossConfig& loss = {}) {
  ForwardOptions opts;
  opts.loss = loss;
  ParameterList params = inst.model.parameters();
  zero_grads(params);
  inst.model.accumulate_gradients(inst.item, opts, 1.0);
  std::vector<Matrix> analytic;
  for (const Parameter* p : params) analytic.push_back(p->grad);
  const auto numeric =
      finite_diff_grad([&] { return inst.model.loss(inst.item, opts); }, params);
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    worst = std::max(worst, max_relative_error(analytic[i], numeric[i]));
  }
  return worst;
}

inline double run_gradcheck(std::uint64_t seed, std::size_t instances, const LossConfig& loss = {}) {
  Rng root(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    auto inst = random_gradcheck_instance(root.next_u64());
    worst = std::max(worst, gradcheck_instance(inst, loss));
  }
  return worst;
}

}  // namespace ldsc
