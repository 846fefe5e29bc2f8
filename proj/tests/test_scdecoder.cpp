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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ldsc/diagnostics.hpp"
#include "ldsc/model.hpp"
#include "ldsc/scdecoder.hpp"
#include "oracles.hpp"

namespace ldsc {
namespace {

using oracle::direct_loss;

void randomize(ScLstmParams& p, Rng& rng, double scale = 0.8) {
  ParameterList all;
  p.collect(all);
  for (Parameter* q : all) init_uniform(q->value, rng, scale);
}

Vec random_vec(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot_row(const Matrix& m, std::size_t r, const Vec& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += m(r, k) * v[k];
  return s;
}

// Direct per-coordinate evaluation of one sc-LSTM step.
StepOutput scalar_step(const ScLstmParams& p, const DecoderState& st, const Vec& w, double alpha) {
  const std::size_t n = st.h.size(), d = st.d.size(), v = p.vocab_size();
  StepOutput out;
  out.state.d.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double r = sig(dot_row(p.W_wr.value, j, w) + alpha * dot_row(p.W_hr.value, j, st.h));
    out.state.d[j] = r * st.d[j];
  }
  out.state.c.resize(n);
  out.state.h.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double a[4];
    for (std::size_t g = 0; g < 4; ++g) {
      a[g] = p.b[g].value[j] + dot_row(p.U[g].value, j, w) + dot_row(p.W[g].value, j, st.h);
    }
    const double i = sig(a[kGateI]), f = sig(a[kGateF]), o = sig(a[kGateO]);
    const double cc = std::tanh(a[kGateC]);
    const double c = f * st.c[j] + i * cc + std::tanh(dot_row(p.W_dc.value, j, out.state.d));
    out.state.c[j] = c;
    out.state.h[j] = o * std::tanh(c);
  }
  Vec logits(v);
  double mx = -1e300;
  for (std::size_t k = 0; k < v; ++k) {
    logits[k] = p.b_out.value[k] + dot_row(p.W_out.value, k, out.state.h);
    mx = std::max(mx, logits[k]);
  }
  double z = 0.0;
  for (double l : logits) z += std::exp(l - mx);
  out.p.resize(v);
  for (std::size_t k = 0; k < v; ++k) out.p[k] = std::exp(logits[k] - mx) / z;
  return out;
}

TEST(InitState, ZeroAndBiasOnly) {
  ScLstmParams p("", 2, 3, 2, 4, 5);
  const Vec x = {0.1, -0.2, 0.3, 0.4};
  const auto s = init_state(x, Vec{1, 0}, p);
  EXPECT_EQ(s.h, Vec(3, 0.0));
  EXPECT_EQ(s.c, Vec(3, 0.0));
  EXPECT_EQ(s.d, (Vec{1, 0}));
  p.b_hx.value = Matrix(3, 1, {0.5, -1.0, 2.0});
  const auto s2 = init_state(Vec(4, 0.0), Vec{1, 1}, p);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s2.h[j], std::tanh(p.b_hx.value[j]));
}

TEST(InitState, MatchesDirectFormula) {
  Rng rng(1);
  ScLstmParams p("", 2, 3, 2, 4, 5);
  randomize(p, rng);
  const Vec x = random_vec(rng, 4);
  const auto s = init_state(x, Vec{1, 1}, p);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(s.h[j], std::tanh(dot_row(p.W_hx.value, j, x) + p.b_hx.value[j]), 1e-14);
    EXPECT_NEAR(s.c[j], std::tanh(dot_row(p.W_cx.value, j, x) + p.b_cx.value[j]), 1e-14);
  }
  EXPECT_THROW(init_state(Vec(3, 0.0), Vec{1, 1}, p), ShapeMismatch);
}

TEST(ScLstmStep, ZeroWeights) {
  ScLstmParams p("", 2, 3, 2, 4, 5);
  const DecoderState st{Vec(3, 0.0), Vec(3, 0.0), Vec{1, 1}};
  const auto out = sc_lstm_step(st, Vec{0.3, -0.7}, p, 1.0);
  EXPECT_EQ(out.state.d, (Vec{0.5, 0.5}));
  EXPECT_EQ(out.state.h, Vec(3, 0.0));
  for (double v : out.p) EXPECT_DOUBLE_EQ(v, 0.2);
}

TEST(ScLstmStep, SaturatedReadingGateKeepsD) {
  ScLstmParams p("", 1, 2, 2, 2, 4);
  p.W_wr.value = Matrix(2, 1, {1000.0, 1000.0});
  const DecoderState st{Vec(2, 0.0), Vec(2, 0.0), Vec{0.7, 1.0}};
  const auto out = sc_lstm_step(st, Vec{1.0}, p, 1.0);
  EXPECT_EQ(out.state.d, (Vec{0.7, 1.0}));
}

TEST(ScLstmStep, MatchesScalarOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    ScLstmParams p("", 2, 3, 2, 4, 5);
    randomize(p, rng);
    const double alpha = rng.uniform(0.5, 1.5);
    const DecoderState st{random_vec(rng, 3), random_vec(rng, 3), random_vec(rng, 2, 0, 1)};
    const Vec w = random_vec(rng, 2);
    const auto got = sc_lstm_step(st, w, p, alpha);
    const auto want = scalar_step(p, st, w, alpha);
    double sum = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
      EXPECT_NEAR(got.p[k], want.p[k], 1e-12);
      sum += got.p[k];
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(got.state.h[j], want.state.h[j], 1e-12);
      EXPECT_NEAR(got.state.c[j], want.state.c[j], 1e-12);
    }
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(got.state.d[j], want.state.d[j], 1e-12);
  }
}

TEST(ScLstmStep, ActVectorDecays) {
  Rng rng(99);
  ScLstmParams p("", 3, 4, 3, 2, 6);
  randomize(p, rng, 2.0);
  DecoderState st{random_vec(rng, 4), random_vec(rng, 4), Vec{1, 1, 1}};
  for (int t = 0; t < 1000; ++t) {
    const auto out = sc_lstm_step(st, random_vec(rng, 3, -3, 3), p, 1.0);
    for (std::size_t j = 0; j < 3; ++j) {
      ASSERT_LE(out.state.d[j], st.d[j]);
      ASSERT_GE(out.state.d[j], 0.0);
      ASSERT_LE(out.state.d[j], 1.0);
    }
    st = out.state;
    if (t % 100 == 99) st.d = random_vec(rng, 3, 0, 1);
  }
}

TEST(TeacherForced, ZeroWeightsHalveD) {
  ScLstmParams p("", 2, 3, 2, 4, 5);
  Matrix emb(5, 2, 0.3);
  const auto tf = forward_teacher_forced(Vec(4, 0.0), Vec{1.0, 0.6}, {4, 3, 2}, emb, p, 1.0,
                                         Vocabulary::kBos, 30);
  const auto ds = tf.act_vectors();
  ASSERT_EQ(ds.size(), 4u);
  for (std::size_t t = 0; t < ds.size(); ++t) {
    EXPECT_NEAR(ds[t][0], std::pow(0.5, t) * 1.0, 1e-12);
    EXPECT_NEAR(ds[t][1], std::pow(0.5, t) * 0.6, 1e-12);
  }
  for (const auto& pt : tf.distributions()) {
    for (double v : pt) EXPECT_DOUBLE_EQ(v, 0.2);
  }
  EXPECT_EQ(tf.inputs, (std::vector<std::size_t>{Vocabulary::kBos, 4, 3}));
}

TEST(TeacherForced, ComposesSteps) {
  Rng rng(5);
  ScLstmParams p("", 2, 3, 2, 4, 6);
  randomize(p, rng);
  Matrix emb(6, 2);
  init_uniform(emb, rng, 1.0);
  const Vec x = random_vec(rng, 4);
  const std::vector<std::size_t> y = {5, 4, 2};
  const auto tf = forward_teacher_forced(x, Vec{1, 1}, y, emb, p, 1.0, Vocabulary::kBos, 30);
  DecoderState st = init_state(x, Vec{1, 1}, p);
  std::size_t prev = Vocabulary::kBos;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const auto o = sc_lstm_step(st, emb.row(prev), p, 1.0);
    EXPECT_EQ(o.p, tf.steps[t].p);
    st = o.state;
    prev = y[t];
  }
  EXPECT_THROW(forward_teacher_forced(x, Vec{1, 1}, std::vector<std::size_t>(31, 4), emb, p, 1.0,
                                      Vocabulary::kBos, 30),
               SequenceTooLong);
  const auto single = forward_teacher_forced(x, Vec{1, 1}, {2}, emb, p, 1.0, Vocabulary::kBos, 30);
  EXPECT_EQ(single.steps.size(), 1u);
}

TEST(Loss, PerfectPredictionWithZeroD) {
  for (std::size_t T = 1; T <= 30; ++T) {
    std::vector<Vec> ps(T, Vec{0.0, 1.0, 0.0});
    std::vector<std::size_t> y(T, 1);
    std::vector<Vec> ds(T + 1, Vec{0.0, 0.0});
    EXPECT_NEAR(sequence_loss(ps, y, ds, {}), 0.0001 * static_cast<double>(T), 1e-15);
  }
}

TEST(Loss, ConstantUnitD) {
  std::vector<Vec> ps(4, Vec{1.0, 0.0});
  std::vector<std::size_t> y(4, 0);
  std::vector<Vec> ds(5, Vec{0.6, 0.8});
  EXPECT_NEAR(sequence_loss(ps, y, ds, {}), 1.0 + 0.0001 * 4, 1e-15);
}

TEST(Loss, RandomTrajectoriesMatchDirectFormula) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t T = 1 + rng.below(6), V = 2 + rng.below(5), D = 1 + rng.below(4);
    std::vector<Vec> ps;
    std::vector<std::size_t> y;
    for (std::size_t t = 0; t < T; ++t) {
      ps.push_back(softmax(random_vec(rng, V, -3, 3)));
      y.push_back(rng.below(V));
    }
    std::vector<Vec> ds{random_vec(rng, D, 0, 1)};
    for (std::size_t t = 0; t < T; ++t) {
      Vec next = ds.back();
      for (double& v : next) v *= rng.uniform();
      ds.push_back(next);
    }
    const double eta = rng.uniform(1e-5, 1e-3), xi = rng.uniform(2, 200);
    LossConfig cfg;
    cfg.eta = eta;
    cfg.xi = xi;
    EXPECT_NEAR(sequence_loss(ps, y, ds, cfg), direct_loss(ps, y, ds, eta, xi), 1e-12);
  }
  // The floor keeps a zero probability finite.
  std::vector<Vec> ps{Vec{1.0, 0.0}};
  LossConfig nll_only;
  nll_only.act_terms = false;
  EXPECT_NEAR(sequence_loss(ps, {1}, {Vec{}, Vec{}}, nll_only), -std::log(1e-12), 1e-9);
}

// D=2, E=3, H=4, V=6, M=2, T=3.
GradcheckInstance fixed_instance() {
  Vocabulary vocab;
  vocab.add(placeholder({"INFORM", "FOOD"}));
  vocab.add(placeholder({"INFORM", "AREA"}));
  ModelConfig cfg;
  cfg.embedding_dim = 3;
  cfg.encoder_hidden = 4;
  cfg.decoder_hidden = 4;
  cfg.init_scale = 0.5;
  GradcheckInstance inst{
      NlgModel(vocab, ActSlotInventory({{"INFORM", "FOOD"}, {"INFORM", "AREA"}}), cfg), {}};
  Rng rng(2017);
  inst.model.init(rng);
  inst.item.encoder = {{0, {4}}, {1, {5, 3}}};
  inst.item.d0 = {1.0, 1.0};
  inst.item.targets = {4, 5, Vocabulary::kEos};
  return inst;
}

TEST(Backward, FixedInstanceMatchesFiniteDifferences) {
  auto inst = fixed_instance();
  EXPECT_LE(gradcheck_instance(inst), 1e-4);
}

TEST(Backward, RandomInstancesMatchFiniteDifferences) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    auto inst = random_gradcheck_instance(seed);
    EXPECT_LE(gradcheck_instance(inst), 1e-4) << "seed " << seed;
  }
}

TEST(Backward, NllOnlyAndDelexicalizedVariants) {
  LossConfig nll;
  nll.act_terms = false;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto inst = random_gradcheck_instance(seed);
    EXPECT_LE(gradcheck_instance(inst, nll), 1e-4);
    inst.model.mutable_config().lexicalized = false;
    EXPECT_LE(gradcheck_instance(inst), 1e-4);
  }
}

TEST(Backward, DuplicatedBatchAveragesToSameGradient) {
  auto inst = fixed_instance();
  ParameterList params = inst.model.parameters();
  zero_grads(params);
  inst.model.accumulate_gradients(inst.item, {}, 1.0);
  std::vector<Matrix> once;
  for (const Parameter* p : params) once.push_back(p->grad);
  zero_grads(params);
  inst.model.accumulate_gradients(inst.item, {}, 0.5);
  inst.model.accumulate_gradients(inst.item, {}, 0.5);
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t k = 0; k < once[i].size(); ++k) {
      EXPECT_NEAR(params[i]->grad[k], once[i][k], 1e-14);
    }
  }
}

TEST(Backward, UnusedEmbeddingRowsGetNoGradient) {
  auto inst = fixed_instance();
  ParameterList params = inst.model.parameters();
  zero_grads(params);
  inst.model.accumulate_gradients(inst.item, {}, 1.0);
  const Matrix& g = inst.model.embeddings().grad;
  // pad and eos are never inputs or values here
  for (std::size_t j = 0; j < g.cols(); ++j) {
    EXPECT_EQ(g(Vocabulary::kPad, j), 0.0);
    EXPECT_EQ(g(Vocabulary::kEos, j), 0.0);
  }
}

TEST(Model, ParameterNames) {
  auto inst = fixed_instance();
  for (const char* name : {"emb", "enc.fwd.U_i", "enc.bwd.W_c", "dec.W_f", "dec.W_i", "dec.W_o",
                           "dec.W_c", "dec.W_wr", "dec.W_hr", "dec.W_dc", "dec.W_out",
                           "dec.b_out", "dec.W_hx", "dec.b_hx", "dec.W_cx", "dec.b_cx"}) {
    EXPECT_NE(inst.model.find_parameter(name), nullptr) << name;
  }
  EXPECT_EQ(inst.model.find_parameter("dec.W_f")->value.rows(), 4u);
  EXPECT_EQ(inst.model.find_parameter("dec.W_dc")->value.cols(), 2u);
}

TEST(Model, CheckpointRoundTrip) {
  auto inst = fixed_instance();
  inst.model.mutable_config().alpha = 0.7;
  const NlgModel back = NlgModel::from_checkpoint(inst.model.to_checkpoint());
  EXPECT_EQ(back.vocab(), inst.model.vocab());
  EXPECT_EQ(back.inventory(), inst.model.inventory());
  EXPECT_EQ(back.config().alpha, 0.7);
  EXPECT_EQ(back.loss(inst.item), inst.model.loss(inst.item));
}

TEST(Model, InitializationScheme) {
  auto inst = fixed_instance();
  Rng rng(3);
  inst.model.init(rng);
  for (Parameter* p : inst.model.parameters()) {
    const bool bias = p->name.find(".b_") != std::string::npos;
    for (double v : p->value.data()) {
      if (p->name == "enc.fwd.b_f" || p->name == "enc.bwd.b_f" || p->name == "dec.b_f") {
        EXPECT_EQ(v, 1.0);
      } else if (bias) {
        EXPECT_EQ(v, 0.0) << p->name;
      } else {
        EXPECT_LE(std::abs(v), 0.5) << p->name;
      }
    }
  }
  ModelConfig def;
  EXPECT_EQ(def.init_scale, 0.08);
  EXPECT_EQ(def.forget_bias, 1.0);
  EXPECT_EQ(def.alpha, 1.0);
}

}  // namespace
}  // namespace ldsc
