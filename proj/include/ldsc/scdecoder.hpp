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
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ldsc/errors.hpp"
#include "ldsc/lstm.hpp"
#include "ldsc/numerics/matrix.hpp"
#include "ldsc/numerics/parameter.hpp"
#include "ldsc/numerics/rng.hpp"

namespace ldsc {

// Semantically conditioned LSTM decoder weights.
//
//   i, f, o = sigmoid(U_g w + W_g h + b_g)     c~ = tanh(U_c w + W_c h + b_c)
//   r       = sigmoid(W_wr w + alpha W_hr h)   d' = r * d
//   c'      = f * c + i * c~ + tanh(W_dc d')   h' = o * tanh(c')
//   p       = softmax(W_out h' + b_out)
//
// With no act-slot pairs (D = 0) the reading gate and W_dc are absent and the
// cell is a plain LSTM; the sentence auto-encoder uses it that way.
struct ScLstmParams {
  std::array<Parameter, 4> U;
  std::array<Parameter, 4> W;
  std::array<Parameter, 4> b;
  Parameter W_wr, W_hr, W_dc;
  Parameter W_out, b_out;
  Parameter W_hx, b_hx, W_cx, b_cx;

  ScLstmParams() = default;
  ScLstmParams(const std::string& prefix, std::size_t embed, std::size_t hidden,
               std::size_t num_pairs, std::size_t context, std::size_t vocab) {
    const std::string p = prefix + "dec.";
    for (std::size_t g = 0; g < 4; ++g) {
      U[g] = Parameter(p + "U_" + kGateNames[g], hidden, embed);
      W[g] = Parameter(p + "W_" + kGateNames[g], hidden, hidden);
      b[g] = Parameter(p + "b_" + kGateNames[g], hidden, 1);
    }
    if (num_pairs > 0) {
      W_wr = Parameter(p + "W_wr", num_pairs, embed);
      W_hr = Parameter(p + "W_hr", num_pairs, hidden);
      W_dc = Parameter(p + "W_dc", hidden, num_pairs);
    }
    W_out = Parameter(p + "W_out", vocab, hidden);
    b_out = Parameter(p + "b_out", vocab, 1);
    W_hx = Parameter(p + "W_hx", hidden, context);
    b_hx = Parameter(p + "b_hx", hidden, 1);
    W_cx = Parameter(p + "W_cx", hidden, context);
    b_cx = Parameter(p + "b_cx", hidden, 1);
  }

  std::size_t hidden_size() const { return W[0].rows(); }
  std::size_t embed_size() const { return U[0].cols(); }
  std::size_t num_pairs() const { return W_wr.rows(); }
  std::size_t vocab_size() const { return W_out.rows(); }
  bool act_conditioned() const { return num_pairs() > 0; }

  // Matrices uniform(-scale, scale); biases zero except the forget gate.
  void init(Rng& rng, double scale, double forget_bias) {
    for (std::size_t g = 0; g < 4; ++g) {
      init_uniform(U[g].value, rng, scale);
      init_uniform(W[g].value, rng, scale);
      b[g].value.fill(0.0);
    }
    b[kGateF].value.fill(forget_bias);
    if (act_conditioned()) {
      init_uniform(W_wr.value, rng, scale);
      init_uniform(W_hr.value, rng, scale);
      init_uniform(W_dc.value, rng, scale);
    }
    init_uniform(W_out.value, rng, scale);
    b_out.value.fill(0.0);
    init_uniform(W_hx.value, rng, scale);
    b_hx.value.fill(0.0);
    init_uniform(W_cx.value, rng, scale);
    b_cx.value.fill(0.0);
  }

  void collect(ParameterList& out) {
    for (std::size_t g = 0; g < 4; ++g) {
      out.push_back(&U[g]);
      out.push_back(&W[g]);
      out.push_back(&b[g]);
    }
    if (act_conditioned()) {
      out.push_back(&W_wr);
      out.push_back(&W_hr);
      out.push_back(&W_dc);
    }
    for (Parameter* q : {&W_out, &b_out, &W_hx, &b_hx, &W_cx, &b_cx}) {
      out.push_back(q);
    }
  }
};

struct DecoderState {
  Vec h;
  Vec c;
  Vec d;
};

struct StepOutput {
  Vec p;
  DecoderState state;
};

struct LossConfig {
  double eta = 0.0001;
  double xi = 100.0;
  // Off for the auto-encoder: plain reconstruction cross-entropy.
  bool act_terms = true;
};

struct InitCache {
  Vec x;
  Vec h0;
  Vec c0;
};

// h_0 = tanh(W_hx x + b_hx), c_0 = tanh(W_cx x + b_cx), d = d0.
inline DecoderState init_state(std::span<const double> x, std::span<const double> d0,
                               const ScLstmParams& p, InitCache* cache = nullptr) {
  if (d0.size() != p.num_pairs()) {
    throw ShapeMismatch("act vector has " + std::to_string(d0.size()) +
                        " entries, decoder expects " +
                        std::to_string(p.num_pairs()));
  }
  Vec h(p.b_hx.value.data().begin(), p.b_hx.value.data().end());
  Vec c(p.b_cx.value.data().begin(), p.b_cx.value.data().end());
  matvec_acc(p.W_hx.value, x, h);
  matvec_acc(p.W_cx.value, x, c);
  DecoderState s{tanh(h), tanh(c), Vec(d0.begin(), d0.end())};
  if (cache) *cache = {Vec(x.begin(), x.end()), s.h, s.c};
  return s;
}

struct ScStepCache {
  Vec w;  // input embedding after dropout
  Vec h_prev, c_prev, d_prev;
  std::array<Vec, 4> gate;
  Vec r, d, act_in;  // act_in = tanh(W_dc d)
  Vec c, tanh_c, h;
  Vec mask_h;  // empty when dropout is off
  Vec h_out;   // h after dropout, fed to the projection
  Vec logits;
  Vec p;
};

inline StepOutput sc_lstm_step(const DecoderState& state, std::span<const double> w,
                               const ScLstmParams& p, double alpha,
                               ScStepCache* cache = nullptr,
                               std::span<const double> mask_h = {}) {
  const std::size_t n = p.hidden_size();
  if (w.size() != p.embed_size()) throw ShapeMismatch("decoder input embedding");
  ScStepCache local;
  ScStepCache& s = cache ? *cache : local;
  s.w.assign(w.begin(), w.end());
  s.h_prev = state.h;
  s.c_prev = state.c;
  s.d_prev = state.d;
  for (std::size_t g = 0; g < 4; ++g) {
    Vec a(p.b[g].value.data().begin(), p.b[g].value.data().end());
    matvec_acc(p.U[g].value, w, a);
    matvec_acc(p.W[g].value, state.h, a);
    s.gate[g] = g == kGateC ? tanh(a) : sigmoid(a);
  }
  s.c.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.c[j] = s.gate[kGateF][j] * state.c[j] + s.gate[kGateI][j] * s.gate[kGateC][j];
  }
  if (p.act_conditioned()) {
    Vec ar = matvec(p.W_wr.value, w);
    Vec hr = matvec(p.W_hr.value, state.h);
    axpy(alpha, hr, ar);
    s.r = sigmoid(ar);
    s.d.resize(state.d.size());
    for (std::size_t j = 0; j < s.d.size(); ++j) s.d[j] = s.r[j] * state.d[j];
    s.act_in = tanh(matvec(p.W_dc.value, s.d));
    axpy(1.0, s.act_in, s.c);
  } else {
    s.r.clear();
    s.d.clear();
    s.act_in.clear();
  }
  s.tanh_c = tanh(s.c);
  s.h.resize(n);
  for (std::size_t j = 0; j < n; ++j) s.h[j] = s.gate[kGateO][j] * s.tanh_c[j];
  s.mask_h.assign(mask_h.begin(), mask_h.end());
  s.h_out = s.h;
  if (!s.mask_h.empty()) {
    for (std::size_t j = 0; j < n; ++j) s.h_out[j] *= s.mask_h[j];
  }
  s.logits.assign(p.b_out.value.data().begin(), p.b_out.value.data().end());
  matvec_acc(p.W_out.value, s.h_out, s.logits);
  s.p = softmax(s.logits);
  return StepOutput{s.p, DecoderState{s.h, s.c, s.d}};
}

// Teacher-forced pass over one target sequence.
struct TeacherForced {
  InitCache init;
  std::vector<ScStepCache> steps;
  std::vector<std::size_t> inputs;  // y_0 = bos, y_1 .. y_{T-1}

  // d_0 .. d_T
  std::vector<Vec> act_vectors() const {
    std::vector<Vec> ds;
    if (steps.empty()) return ds;
    ds.push_back(steps.front().d_prev);
    for (const auto& s : steps) ds.push_back(s.d);
    return ds;
  }
  std::vector<Vec> distributions() const {
    std::vector<Vec> ps;
    for (const auto& s : steps) ps.push_back(s.p);
    return ps;
  }
};

// Dropout masks for one teacher-forced pass; empty vectors disable dropout.
struct DecoderMasks {
  std::vector<Vec> input;
  std::vector<Vec> hidden;
};

inline TeacherForced forward_teacher_forced(
    std::span<const double> x, std::span<const double> d0,
    const std::vector<std::size_t>& targets, const Matrix& embeddings,
    const ScLstmParams& p, double alpha, std::size_t bos, std::size_t max_len,
    const DecoderMasks* masks = nullptr) {
  if (targets.empty()) throw ShapeMismatch("empty target sequence");
  if (targets.size() > max_len) throw SequenceTooLong(targets.size(), max_len);
  TeacherForced tf;
  DecoderState state = init_state(x, d0, p, &tf.init);
  tf.steps.resize(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const std::size_t prev = t == 0 ? bos : targets[t - 1];
    tf.inputs.push_back(prev);
    Vec w(embeddings.row(prev).begin(), embeddings.row(prev).end());
    std::span<const double> mh;
    if (masks && !masks->input.empty()) {
      for (std::size_t j = 0; j < w.size(); ++j) w[j] *= masks->input[t][j];
    }
    if (masks && !masks->hidden.empty()) mh = masks->hidden[t];
    state = sc_lstm_step(state, w, p, alpha, &tf.steps[t], mh).state;
  }
  return tf;
}

inline constexpr double kProbFloor = 1e-12;

// L = -sum_t log p_t[y_t] + ||d_T|| + sum_t eta * xi^{||d_t - d_{t-1}||}
// with Euclidean norms. ds holds d_0 .. d_T.
inline double sequence_loss(const std::vector<Vec>& ps,
                            const std::vector<std::size_t>& targets,
                            const std::vector<Vec>& ds, const LossConfig& cfg) {
  if (ps.size() != targets.size()) throw ShapeMismatch("loss: p/y lengths");
  double nll = 0.0;
  for (std::size_t t = 0; t < ps.size(); ++t) {
    nll -= std::log(std::max(ps[t][targets[t]], kProbFloor));
  }
  if (!cfg.act_terms) return nll;
  if (ds.size() != ps.size() + 1) throw ShapeMismatch("loss: d trajectory length");
  double reg = 0.0;
  for (std::size_t t = 1; t < ds.size(); ++t) {
    Vec delta(ds[t].size());
    for (std::size_t j = 0; j < delta.size(); ++j) delta[j] = ds[t][j] - ds[t - 1][j];
    reg += cfg.eta * std::pow(cfg.xi, l2_norm(delta));
  }
  return nll + l2_norm(ds.back()) + reg;
}

inline double sequence_loss(const TeacherForced& tf,
                            const std::vector<std::size_t>& targets,
                            const LossConfig& cfg) {
  return sequence_loss(tf.distributions(), targets, tf.act_vectors(), cfg);
}

// BPTT through a teacher-forced pass for the full loss, scaled by `scale`.
// Accumulates into p's gradients and into rows of emb_grad (the shared
// embedding table); returns the context-vector gradient.
inline Vec decoder_backward(ScLstmParams& p, Matrix& emb_grad,
                            const TeacherForced& tf,
                            const std::vector<std::size_t>& targets,
                            const LossConfig& cfg, double alpha,
                            const DecoderMasks* masks = nullptr,
                            double scale = 1.0) {
  const std::size_t n = p.hidden_size();
  const std::size_t num_pairs = p.num_pairs();
  const std::size_t steps = tf.steps.size();
  const bool act = p.act_conditioned() && cfg.act_terms;
  const double log_xi = std::log(cfg.xi);

  // Loss gradients w.r.t. each d_t from the two act-vector terms.
  std::vector<Vec> dd_loss(steps + 1, Vec(num_pairs, 0.0));
  if (act) {
    const auto ds = tf.act_vectors();
    const double norm_T = l2_norm(ds.back());
    if (norm_T > 0.0) {
      for (std::size_t j = 0; j < num_pairs; ++j) {
        dd_loss[steps][j] += scale * ds.back()[j] / norm_T;
      }
    }
    for (std::size_t t = 1; t <= steps; ++t) {
      Vec delta(num_pairs);
      for (std::size_t j = 0; j < num_pairs; ++j) delta[j] = ds[t][j] - ds[t - 1][j];
      const double nd = l2_norm(delta);
      if (nd == 0.0) continue;
      const double coef = scale * cfg.eta * std::pow(cfg.xi, nd) * log_xi / nd;
      for (std::size_t j = 0; j < num_pairs; ++j) {
        dd_loss[t][j] += coef * delta[j];
        dd_loss[t - 1][j] -= coef * delta[j];
      }
    }
  }

  Vec dh_next(n, 0.0), dc_next(n, 0.0), dd_next(num_pairs, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t t = steps - 1 - k;
    const ScStepCache& s = tf.steps[t];

    // Output projection.
    Vec dlogits = s.p;
    if (s.p[targets[t]] > kProbFloor) {
      dlogits[targets[t]] -= 1.0;
    } else {
      std::fill(dlogits.begin(), dlogits.end(), 0.0);
    }
    for (double& v : dlogits) v *= scale;
    outer_acc(p.W_out.grad, dlogits, s.h_out);
    axpy(1.0, dlogits, p.b_out.grad.data());
    Vec dh = dh_next;
    Vec dh_out(n, 0.0);
    matvec_t_acc(p.W_out.value, dlogits, dh_out);
    for (std::size_t j = 0; j < n; ++j) {
      dh[j] += s.mask_h.empty() ? dh_out[j] : dh_out[j] * s.mask_h[j];
    }

    // h = o * tanh(c)
    const Vec& i = s.gate[kGateI];
    const Vec& f = s.gate[kGateF];
    const Vec& o = s.gate[kGateO];
    const Vec& cc = s.gate[kGateC];
    Vec dc(n);
    std::array<Vec, 4> da;
    for (auto& v : da) v.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      dc[j] = dc_next[j] + dh[j] * o[j] * (1.0 - s.tanh_c[j] * s.tanh_c[j]);
      da[kGateO][j] = dh[j] * s.tanh_c[j] * o[j] * (1.0 - o[j]);
      da[kGateI][j] = dc[j] * cc[j] * i[j] * (1.0 - i[j]);
      da[kGateF][j] = dc[j] * s.c_prev[j] * f[j] * (1.0 - f[j]);
      da[kGateC][j] = dc[j] * i[j] * (1.0 - cc[j] * cc[j]);
      dc_next[j] = dc[j] * f[j];
    }

    Vec dw(p.embed_size(), 0.0);
    Vec dh_prev(n, 0.0);
    for (std::size_t g = 0; g < 4; ++g) {
      outer_acc(p.U[g].grad, da[g], s.w);
      outer_acc(p.W[g].grad, da[g], s.h_prev);
      axpy(1.0, da[g], p.b[g].grad.data());
      matvec_t_acc(p.U[g].value, da[g], dw);
      matvec_t_acc(p.W[g].value, da[g], dh_prev);
    }

    if (p.act_conditioned()) {
      // c gains tanh(W_dc d), d = r * d_prev, r = sigmoid(W_wr w + alpha W_hr h_prev)
      Vec dd = dd_next;
      axpy(1.0, dd_loss[t + 1], dd);
      Vec dact(n);
      for (std::size_t j = 0; j < n; ++j) {
        dact[j] = dc[j] * (1.0 - s.act_in[j] * s.act_in[j]);
      }
      outer_acc(p.W_dc.grad, dact, s.d);
      matvec_t_acc(p.W_dc.value, dact, dd);
      Vec dar(num_pairs);
      dd_next.assign(num_pairs, 0.0);
      for (std::size_t j = 0; j < num_pairs; ++j) {
        const double dr = dd[j] * s.d_prev[j];
        dar[j] = dr * s.r[j] * (1.0 - s.r[j]);
        dd_next[j] = dd[j] * s.r[j];
      }
      outer_acc(p.W_wr.grad, dar, s.w);
      Vec alpha_dar = dar;
      for (double& v : alpha_dar) v *= alpha;
      outer_acc(p.W_hr.grad, alpha_dar, s.h_prev);
      matvec_t_acc(p.W_wr.value, dar, dw);
      Vec dh_r(n, 0.0);
      matvec_t_acc(p.W_hr.value, dar, dh_r);
      axpy(alpha, dh_r, dh_prev);
    }

    // Embedding of the input token, through its dropout mask.
    if (masks && !masks->input.empty()) {
      for (std::size_t j = 0; j < dw.size(); ++j) dw[j] *= masks->input[t][j];
    }
    axpy(1.0, dw, emb_grad.row(tf.inputs[t]));
    dh_next = std::move(dh_prev);
  }

  // h_0 = tanh(W_hx x + b_hx), c_0 = tanh(W_cx x + b_cx)
  Vec dpre_h(n), dpre_c(n);
  for (std::size_t j = 0; j < n; ++j) {
    dpre_h[j] = dh_next[j] * (1.0 - tf.init.h0[j] * tf.init.h0[j]);
    dpre_c[j] = dc_next[j] * (1.0 - tf.init.c0[j] * tf.init.c0[j]);
  }
  outer_acc(p.W_hx.grad, dpre_h, tf.init.x);
  axpy(1.0, dpre_h, p.b_hx.grad.data());
  outer_acc(p.W_cx.grad, dpre_c, tf.init.x);
  axpy(1.0, dpre_c, p.b_cx.grad.data());
  Vec dx(tf.init.x.size(), 0.0);
  matvec_t_acc(p.W_hx.value, dpre_h, dx);
  matvec_t_acc(p.W_cx.value, dpre_c, dx);
  return dx;
}

}  // namespace ldsc
