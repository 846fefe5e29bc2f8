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

#include "ldsc/corpus/dataset.hpp"
#include "ldsc/encoder.hpp"

namespace ldsc {
namespace {

void randomize(LstmParams& p, Rng& rng) {
  for (std::size_t g = 0; g < 4; ++g) {
    init_uniform(p.U[g].value, rng, 0.7);
    init_uniform(p.W[g].value, rng, 0.7);
    init_uniform(p.b[g].value, rng, 0.7);
  }
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar recurrence written out gate by gate.
void scalar_lstm(const LstmParams& p, const Vec& x, Vec& h, Vec& c) {
  const std::size_t n = h.size();
  Vec a[4];
  for (std::size_t g = 0; g < 4; ++g) {
    a[g].assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double s = p.b[g].value(j, 0);
      for (std::size_t k = 0; k < x.size(); ++k) s += p.U[g].value(j, k) * x[k];
      for (std::size_t k = 0; k < n; ++k) s += p.W[g].value(j, k) * h[k];
      a[g][j] = s;
    }
  }
  Vec h2(n), c2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double i = sig(a[0][j]), f = sig(a[1][j]), o = sig(a[2][j]);
    const double cc = std::tanh(a[3][j]);
    c2[j] = f * c[j] + i * cc;
    h2[j] = o * std::tanh(c2[j]);
  }
  h = h2;
  c = c2;
}

Matrix random_embeddings(Rng& rng, std::size_t v, std::size_t e) {
  Matrix m(v, e);
  init_uniform(m, rng, 1.0);
  return m;
}

TEST(EncodeSlotValue, MeanOfEmbeddings) {
  Rng rng(1);
  Vocabulary vocab;
  for (const char* w : {"near", "the", "plaza", "pizza"}) vocab.add(w);
  const Matrix emb = random_embeddings(rng, vocab.size(), 3);
  const ActSlotInventory inv({{"INFORM", "AREA"}, {"INFORM", "FOOD"}, {"REQUEST", "FOOD"}});

  const auto in = encode_slot_value({"INFORM", "AREA", tokenize("near the plaza")}, inv, emb, vocab);
  EXPECT_EQ(in.m, (Vec{1, 0, 0}));
  for (std::size_t j = 0; j < 3; ++j) {
    const double expected = (emb(vocab.index("near"), j) + emb(vocab.index("the"), j) +
                             emb(vocab.index("plaza"), j)) / 3.0;
    EXPECT_NEAR(in.e[j], expected, 1e-15);
    EXPECT_EQ(in.z[3 + j], in.e[j]);
  }
  const auto one = encode_slot_value({"INFORM", "FOOD", {"pizza"}}, inv, emb, vocab);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(one.e[j], emb(vocab.index("pizza"), j));

  const auto empty = encode_slot_value({"REQUEST", "FOOD", {}}, inv, emb, vocab);
  EXPECT_EQ(empty.m, (Vec{0, 0, 1}));
  EXPECT_EQ(empty.e, Vec(3, 0.0));

  const auto unk = encode_slot_value({"INFORM", "FOOD", {"zzz"}}, inv, emb, vocab);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(unk.e[j], emb(Vocabulary::kUnk, j));

  EXPECT_THROW(encode_slot_value({"OFFER", "NAME", {"x"}}, inv, emb, vocab), UnknownActSlot);
}

TEST(EncodeSlotValue, DelexicalizedBaselineZeroesLexicalPart) {
  Rng rng(2);
  Vocabulary vocab;
  vocab.add("pizza");
  const Matrix emb = random_embeddings(rng, vocab.size(), 4);
  const ActSlotInventory inv(std::vector<ActSlot>{{"INFORM", "FOOD"}});
  const auto in = encode_slot_value({"INFORM", "FOOD", {"pizza"}}, inv, emb, vocab, false);
  EXPECT_EQ(in.e, Vec(4, 0.0));
  EXPECT_EQ(in.m, Vec{1.0});
}

TEST(EncodeSlotValue, ScalesWithEmbeddings) {
  Rng rng(3);
  Matrix emb = random_embeddings(rng, 8, 3);
  const auto a = make_encoder_input(0, 1, {4, 5, 6}, emb);
  for (double& v : emb.data()) v *= 2.5;
  const auto b = make_encoder_input(0, 1, {4, 5, 6}, emb);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(b.e[j], 2.5 * a.e[j], 1e-14);
}

TEST(BiLstm, ZeroWeightsGiveZeroStates) {
  EncoderParams p("", 4, 3);
  Rng rng(4);
  Matrix emb = random_embeddings(rng, 6, 2);
  std::vector<EncoderInput> in = {make_encoder_input(0, 2, {4}, emb),
                                  make_encoder_input(1, 2, {5}, emb)};
  const auto s = bilstm_encode(in, p);
  for (std::size_t t = 0; t < 2; ++t) {
    EXPECT_EQ(s.fwd[t].h, Vec(3, 0.0));
    EXPECT_EQ(s.bwd[t].h, Vec(3, 0.0));
  }
}

TEST(BiLstm, MatchesScalarRecurrence) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    EncoderParams p("", 4, 3);
    randomize(p.fwd, rng);
    randomize(p.bwd, rng);
    const std::size_t m = 1 + rng.below(3);
    std::vector<EncoderInput> in;
    std::vector<Vec> z;
    for (std::size_t t = 0; t < m; ++t) {
      EncoderInput e;
      e.z.resize(4);
      for (double& v : e.z) v = rng.uniform(-1, 1);
      z.push_back(e.z);
      in.push_back(e);
    }
    const auto s = bilstm_encode(in, p);
    Vec h(3, 0.0), c(3, 0.0);
    for (std::size_t t = 0; t < m; ++t) {
      scalar_lstm(p.fwd, z[t], h, c);
      for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(s.fwd[t].h[j], h[j], 1e-12);
    }
    h.assign(3, 0.0);
    c.assign(3, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t t = m - 1 - k;
      scalar_lstm(p.bwd, z[t], h, c);
      for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(s.bwd[t].h[j], h[j], 1e-12);
    }
    if (m == 1) {
      Vec hf(3, 0.0), cf(3, 0.0), hb(3, 0.0), cb(3, 0.0);
      scalar_lstm(p.fwd, z[0], hf, cf);
      scalar_lstm(p.bwd, z[0], hb, cb);
      const Vec x = pool_context(s);
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(x[j], hf[j], 1e-12);
        EXPECT_NEAR(x[3 + j], hb[j], 1e-12);
      }
    }
  }
}

TEST(BiLstm, ReversalSwapsDirections) {
  Rng rng(8);
  EncoderParams p("", 3, 2);
  randomize(p.fwd, rng);
  p.bwd = p.fwd;  // identical weights in both directions
  std::vector<EncoderInput> in(3);
  for (auto& e : in) {
    e.z.resize(3);
    for (double& v : e.z) v = rng.uniform(-1, 1);
  }
  std::vector<EncoderInput> rev(in.rbegin(), in.rend());
  const auto a = bilstm_encode(in, p);
  const auto b = bilstm_encode(rev, p);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(a.fwd[t].h, b.bwd[2 - t].h);
  const Vec xa = pool_context(a), xb = pool_context(b);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(xa[j], xb[2 + j], 1e-15);
    EXPECT_NEAR(xa[2 + j], xb[j], 1e-15);
  }
}

TEST(PoolContext, DirectMean) {
  Rng rng(5);
  std::vector<Vec> f(3, Vec(4)), b(3, Vec(4));
  for (auto* seq : {&f, &b}) {
    for (auto& v : *seq) {
      for (double& x : v) x = rng.uniform(-1, 1);
    }
  }
  const Vec x = pool_context(f, b);
  ASSERT_EQ(x.size(), 8u);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(x[j], (f[0][j] + f[1][j] + f[2][j]) / 3.0, 1e-15);
    EXPECT_NEAR(x[4 + j], (b[0][j] + b[1][j] + b[2][j]) / 3.0, 1e-15);
  }
  const Vec c = pool_context({Vec{0.3, -0.2}, Vec{0.3, -0.2}}, {Vec{0.3, -0.2}, Vec{0.3, -0.2}});
  EXPECT_EQ(c, (Vec{0.3, -0.2, 0.3, -0.2}));
  std::vector<Vec> rf(f.rbegin(), f.rend()), rb(b.rbegin(), b.rend());
  const Vec xr = pool_context(rf, rb);
  for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(x[j], xr[j], 1e-15);
}

TEST(InitActVector, BinaryCoverage) {
  const ActSlotInventory inv({{"INFORM", "FOOD"}, {"OFFER", "NAME"}, {"INFORM", "AREA"}});
  const MeaningRepresentation mr{{{"OFFER", "NAME", {"super", "ramen"}},
                                  {"INFORM", "FOOD", {"pizza"}},
                                  {"INFORM", "FOOD", {"sushi"}}}};
  EXPECT_EQ(init_act_vector(mr, inv), (Vec{1, 1, 0}));
  EXPECT_EQ(init_act_vector(MeaningRepresentation{}, inv), (Vec{0, 0, 0}));
  EXPECT_THROW(init_act_vector({{{"REQUEST", "FOOD", {}}}}, inv), UnknownActSlot);
}

}  // namespace
}  // namespace ldsc
