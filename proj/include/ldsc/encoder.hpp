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
#include <optional>
#include <span>
#include <vector>

#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/corpus/vocabulary.hpp"
#include "ldsc/errors.hpp"
#include "ldsc/log.hpp"
#include "ldsc/lstm.hpp"
#include "ldsc/numerics/matrix.hpp"

namespace ldsc {

// Input of one encoder time-step: z = [m; e], where m is the one-hot of the
// act-slot pair (absent for the auto-encoder, D = 0) and e is the mean
// embedding of the value tokens (zero for an empty value).
struct EncoderInput {
  std::optional<std::size_t> act_index;
  std::vector<std::size_t> value_ids;
  Vec m;
  Vec e;
  Vec z;
};

// Builds z_t from an act index and value token ids. With lexicalized set to
// false the lexical part is forced to zero (delexicalized-only baseline).
inline EncoderInput make_encoder_input(std::optional<std::size_t> act_index,
                                       std::size_t num_pairs,
                                       std::vector<std::size_t> value_ids,
                                       const Matrix& embeddings,
                                       bool lexicalized = true) {
  const std::size_t dim = embeddings.cols();
  EncoderInput in;
  in.act_index = act_index;
  in.m.assign(num_pairs, 0.0);
  if (act_index) in.m.at(*act_index) = 1.0;
  in.e.assign(dim, 0.0);
  if (lexicalized && !value_ids.empty()) {
    for (std::size_t id : value_ids) axpy(1.0, embeddings.row(id), in.e);
    const double inv = 1.0 / static_cast<double>(value_ids.size());
    for (double& v : in.e) v *= inv;
  }
  in.value_ids = std::move(value_ids);
  in.z = in.m;
  in.z.insert(in.z.end(), in.e.begin(), in.e.end());
  return in;
}

inline EncoderInput encode_slot_value(const DialogueAct& pair,
                                      const ActSlotInventory& inventory,
                                      const Matrix& embeddings,
                                      const Vocabulary& vocab,
                                      bool lexicalized = true) {
  const std::size_t idx = inventory.index_of(pair.pair());
  return make_encoder_input(idx, inventory.size(), vocab.encode(pair.value),
                            embeddings, lexicalized);
}

struct EncoderParams {
  LstmParams fwd;
  LstmParams bwd;

  EncoderParams() = default;
  EncoderParams(const std::string& prefix, std::size_t input, std::size_t hidden)
      : fwd(prefix + "enc.fwd.", input, hidden),
        bwd(prefix + "enc.bwd.", input, hidden) {}

  std::size_t hidden_size() const { return fwd.hidden_size(); }

  void collect(ParameterList& out) {
    fwd.collect(out);
    bwd.collect(out);
  }
};

// Per-direction step caches; fwd[t] and bwd[t] both belong to input t.
struct BiLstmStates {
  std::vector<LstmStepCache> fwd;
  std::vector<LstmStepCache> bwd;

  std::size_t size() const { return fwd.size(); }
};

// Runs the forward LSTM left-to-right and the backward LSTM right-to-left,
// both from zero states.
inline BiLstmStates bilstm_encode(std::span<const EncoderInput> inputs,
                                  const EncoderParams& p) {
  if (inputs.empty()) throw ShapeMismatch("encoder needs at least one input");
  const std::size_t m = inputs.size();
  const std::size_t n = p.hidden_size();
  BiLstmStates out;
  out.fwd.resize(m);
  out.bwd.resize(m);
  Vec zero(n, 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    const Vec& h = t == 0 ? zero : out.fwd[t - 1].h;
    const Vec& c = t == 0 ? zero : out.fwd[t - 1].c;
    lstm_step(p.fwd, inputs[t].z, h, c, out.fwd[t]);
  }
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t t = m - 1 - k;
    const Vec& h = k == 0 ? zero : out.bwd[t + 1].h;
    const Vec& c = k == 0 ? zero : out.bwd[t + 1].c;
    lstm_step(p.bwd, inputs[t].z, h, c, out.bwd[t]);
  }
  return out;
}

// x = [mean_t forward_t ; mean_t backward_t]
inline Vec pool_context(const std::vector<Vec>& forward,
                        const std::vector<Vec>& backward) {
  if (forward.empty() || forward.size() != backward.size()) {
    throw ShapeMismatch("pool_context needs equal, non-empty state sequences");
  }
  const std::size_t n = forward.front().size();
  const double inv = 1.0 / static_cast<double>(forward.size());
  Vec x(2 * n, 0.0);
  for (std::size_t t = 0; t < forward.size(); ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      x[j] += forward[t][j] * inv;
      x[n + j] += backward[t][j] * inv;
    }
  }
  return x;
}

inline Vec pool_context(const BiLstmStates& states) {
  std::vector<Vec> f, b;
  for (const auto& s : states.fwd) f.push_back(s.h);
  for (const auto& s : states.bwd) b.push_back(s.h);
  return pool_context(f, b);
}

// Backpropagates the context gradient dx through pooling and both LSTM
// directions. Returns dL/dz_t for every input.
inline std::vector<Vec> bilstm_backward(EncoderParams& p, const BiLstmStates& s,
                                        std::span<const double> dx) {
  const std::size_t m = s.size();
  const std::size_t n = p.hidden_size();
  const double inv = 1.0 / static_cast<double>(m);
  Vec d_fwd(n), d_bwd(n);
  for (std::size_t j = 0; j < n; ++j) {
    d_fwd[j] = dx[j] * inv;
    d_bwd[j] = dx[n + j] * inv;
  }
  std::vector<Vec> dz(m);
  Vec dh_next(n, 0.0), dc_next(n, 0.0), dinput, dh_prev, dc_prev;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t t = m - 1 - k;
    Vec dh = d_fwd;
    axpy(1.0, dh_next, dh);
    lstm_step_backward(p.fwd, s.fwd[t], dh, dc_next, dinput, dh_prev, dc_prev);
    dz[t] = dinput;
    dh_next = dh_prev;
    dc_next = dc_prev;
  }
  dh_next.assign(n, 0.0);
  dc_next.assign(n, 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    Vec dh = d_bwd;
    axpy(1.0, dh_next, dh);
    lstm_step_backward(p.bwd, s.bwd[t], dh, dc_next, dinput, dh_prev, dc_prev);
    axpy(1.0, dinput, dz[t]);
    dh_next = dh_prev;
    dc_next = dc_prev;
  }
  return dz;
}

// d_0[j] = 1 iff some act of the MR maps to inventory index j.
inline Vec init_act_vector(const MeaningRepresentation& mr,
                           const ActSlotInventory& inventory) {
  Vec d(inventory.size(), 0.0);
  for (const auto& da : mr.acts) d[inventory.index_of(da.pair())] = 1.0;
  if (mr.empty()) log::debug("degenerate meaning representation: no acts");
  return d;
}

}  // namespace ldsc
