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

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "ldsc/numerics/matrix.hpp"
#include "ldsc/numerics/parameter.hpp"
#include "ldsc/numerics/rng.hpp"

namespace ldsc {

// Gate slots shared by the plain LSTM and the sc-LSTM cells.
enum Gate : std::size_t { kGateI = 0, kGateF = 1, kGateO = 2, kGateC = 3 };
inline constexpr std::array<const char*, 4> kGateNames = {"i", "f", "o", "c"};

// Standard LSTM weights: gate g pre-activation is U_g x + W_g h + b_g.
struct LstmParams {
  std::array<Parameter, 4> U;
  std::array<Parameter, 4> W;
  std::array<Parameter, 4> b;

  LstmParams() = default;
  LstmParams(const std::string& prefix, std::size_t input, std::size_t hidden) {
    for (std::size_t g = 0; g < 4; ++g) {
      U[g] = Parameter(prefix + "U_" + kGateNames[g], hidden, input);
      W[g] = Parameter(prefix + "W_" + kGateNames[g], hidden, hidden);
      b[g] = Parameter(prefix + "b_" + kGateNames[g], hidden, 1);
    }
  }

  std::size_t input_size() const { return U[0].cols(); }
  std::size_t hidden_size() const { return W[0].rows(); }

  void init(Rng& rng, double scale, double forget_bias) {
    for (std::size_t g = 0; g < 4; ++g) {
      init_uniform(U[g].value, rng, scale);
      init_uniform(W[g].value, rng, scale);
      b[g].value.fill(0.0);
    }
    b[kGateF].value.fill(forget_bias);
  }

  void collect(ParameterList& out) {
    for (std::size_t g = 0; g < 4; ++g) {
      out.push_back(&U[g]);
      out.push_back(&W[g]);
      out.push_back(&b[g]);
    }
  }
};

struct LstmStepCache {
  Vec x, h_prev, c_prev;
  std::array<Vec, 4> gate;  // i, f, o after sigmoid; c candidate after tanh
  Vec c, tanh_c, h;
};

inline void lstm_step(const LstmParams& p, std::span<const double> x,
                      std::span<const double> h_prev,
                      std::span<const double> c_prev, LstmStepCache& out) {
  const std::size_t n = p.hidden_size();
  out.x.assign(x.begin(), x.end());
  out.h_prev.assign(h_prev.begin(), h_prev.end());
  out.c_prev.assign(c_prev.begin(), c_prev.end());
  for (std::size_t g = 0; g < 4; ++g) {
    Vec a(p.b[g].value.data().begin(), p.b[g].value.data().end());
    matvec_acc(p.U[g].value, x, a);
    matvec_acc(p.W[g].value, h_prev, a);
    out.gate[g] = g == kGateC ? tanh(a) : sigmoid(a);
  }
  out.c.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.c[j] = out.gate[kGateF][j] * c_prev[j] +
               out.gate[kGateI][j] * out.gate[kGateC][j];
  }
  out.tanh_c = tanh(out.c);
  out.h.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.h[j] = out.gate[kGateO][j] * out.tanh_c[j];
}

// Backpropagates dh (w.r.t. h) and dc (w.r.t. c) through one step.
// Accumulates weight gradients into p and returns input and previous-state
// gradients through dx, dh_prev, dc_prev (overwritten).
inline void lstm_step_backward(LstmParams& p, const LstmStepCache& s,
                               std::span<const double> dh,
                               std::span<const double> dc_in, Vec& dx,
                               Vec& dh_prev, Vec& dc_prev) {
  const std::size_t n = p.hidden_size();
  const Vec& i = s.gate[kGateI];
  const Vec& f = s.gate[kGateF];
  const Vec& o = s.gate[kGateO];
  const Vec& cc = s.gate[kGateC];
  std::array<Vec, 4> da;
  for (auto& v : da) v.assign(n, 0.0);
  dc_prev.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double dc = dc_in[j] + dh[j] * o[j] * (1.0 - s.tanh_c[j] * s.tanh_c[j]);
    da[kGateO][j] = dh[j] * s.tanh_c[j] * o[j] * (1.0 - o[j]);
    da[kGateI][j] = dc * cc[j] * i[j] * (1.0 - i[j]);
    da[kGateF][j] = dc * s.c_prev[j] * f[j] * (1.0 - f[j]);
    da[kGateC][j] = dc * i[j] * (1.0 - cc[j] * cc[j]);
    dc_prev[j] = dc * f[j];
  }
  dx.assign(p.input_size(), 0.0);
  dh_prev.assign(n, 0.0);
  for (std::size_t g = 0; g < 4; ++g) {
    outer_acc(p.U[g].grad, da[g], s.x);
    outer_acc(p.W[g].grad, da[g], s.h_prev);
    axpy(1.0, da[g], p.b[g].grad.data());
    matvec_t_acc(p.U[g].value, da[g], dx);
    matvec_t_acc(p.W[g].value, da[g], dh_prev);
  }
}

}  // namespace ldsc
