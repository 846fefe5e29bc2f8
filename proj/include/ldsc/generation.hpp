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
#include <concepts>
#include <cstddef>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/corpus/lexicalize.hpp"
#include "ldsc/corpus/vocabulary.hpp"
#include "ldsc/errors.hpp"
#include "ldsc/log.hpp"
#include "ldsc/model.hpp"

namespace ldsc {

struct GenerationConfig {
  std::size_t beam_width = 10;
  std::size_t max_len = 30;
  double lambda = 1000.0;
};

template <class State>
struct Hypothesis {
  std::vector<std::size_t> tokens;
  double logprob = 0.0;
  State state{};
  bool finished = false;
};

// A model usable by beam_search: advance(state, token) consumes `token` and
// returns the log-distribution over the next token plus the new state.
template <class M>
concept StepModel = requires(const M& m, const typename M::State& s, std::size_t tok) {
  { m.vocab_size() } -> std::convertible_to<std::size_t>;
  { m.advance(s, tok) } -> std::same_as<std::pair<Vec, typename M::State>>;
};

// Higher logprob first; ties go to the lexicographically smaller token
// sequence, which prefers lower token indices and then shorter sequences.
inline bool ranks_before(double lp_a, const std::vector<std::size_t>& a, double lp_b,
                         const std::vector<std::size_t>& b) {
  if (lp_a != lp_b) return lp_a > lp_b;
  return a < b;
}

template <StepModel M>
std::vector<Hypothesis<typename M::State>> beam_search(
    const M& model, typename M::State initial, std::size_t bos, std::size_t eos,
    const GenerationConfig& cfg) {
  using Hyp = Hypothesis<typename M::State>;
  if (cfg.beam_width < 1) throw ConfigError("beam_width must be at least 1");
  if (cfg.max_len < 1) throw ConfigError("max_len must be at least 1");
  const std::size_t vocab = model.vocab_size();

  std::vector<Hyp> live(1);
  live[0].state = std::move(initial);
  std::vector<Hyp> pool;

  struct Candidate {
    std::size_t parent;
    std::size_t token;
    double logprob;
  };
  for (std::size_t step = 1; step <= cfg.max_len; ++step) {
    std::vector<typename M::State> next_states;
    std::vector<Candidate> cands;
    cands.reserve(live.size() * vocab);
    for (std::size_t i = 0; i < live.size(); ++i) {
      const std::size_t last = live[i].tokens.empty() ? bos : live[i].tokens.back();
      auto [logp, state] = model.advance(live[i].state, last);
      next_states.push_back(std::move(state));
      for (std::size_t v = 0; v < vocab; ++v) {
        cands.push_back({i, v, live[i].logprob + logp[v]});
      }
    }
    auto before = [&](const Candidate& a, const Candidate& b) {
      if (a.logprob != b.logprob) return a.logprob > b.logprob;
      const auto& ta = live[a.parent].tokens;
      const auto& tb = live[b.parent].tokens;
      if (ta != tb) return ta < tb;
      return a.token < b.token;
    };
    const std::size_t keep = std::min(cfg.beam_width, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<long>(keep),
                      cands.end(), before);

    std::vector<Hyp> next;
    for (std::size_t k = 0; k < keep; ++k) {
      const Candidate& c = cands[k];
      Hyp h;
      h.tokens = live[c.parent].tokens;
      h.tokens.push_back(c.token);
      h.logprob = c.logprob;
      h.state = next_states[c.parent];
      h.finished = c.token == eos;
      if (h.finished || step == cfg.max_len) {
        pool.push_back(std::move(h));
      } else {
        next.push_back(std::move(h));
      }
    }
    live = std::move(next);
    if (pool.size() >= cfg.beam_width || live.empty()) break;
  }
  std::sort(pool.begin(), pool.end(), [](const Hyp& a, const Hyp& b) {
    return ranks_before(a.logprob, a.tokens, b.logprob, b.tokens);
  });
  if (pool.size() > cfg.beam_width) pool.resize(cfg.beam_width);
  return pool;
}

// Adapts NlgModel to StepModel.
struct NlgStepper {
  using State = DecoderState;
  const NlgModel* model;

  std::size_t vocab_size() const { return model->vocab().size(); }
  std::pair<Vec, State> advance(const State& s, std::size_t token) const {
    return model->step_log_probs(s, token);
  }
};

// Argmax decoding from a given state until eos or max_len tokens.
inline std::vector<std::size_t> greedy_decode(const NlgModel& model, DecoderState state,
                                              std::size_t max_len) {
  std::vector<std::size_t> out;
  std::size_t last = Vocabulary::kBos;
  for (std::size_t t = 0; t < max_len; ++t) {
    StepOutput o = model.step(state, last);
    last = static_cast<std::size_t>(
        std::max_element(o.p.begin(), o.p.end()) - o.p.begin());
    if (last == Vocabulary::kEos) break;
    out.push_back(last);
    state = std::move(o.state);
  }
  return out;
}

struct SlotErrors {
  std::size_t missing = 0;
  std::size_t redundant = 0;
  std::size_t required = 0;

  // (missing + redundant) / required, with required clamped to 1 so that an
  // MR without valued slots still penalizes stray placeholders.
  double rate() const {
    return static_cast<double>(missing + redundant) /
           static_cast<double>(std::max<std::size_t>(required, 1));
  }
};

// Counts missing and redundant placeholders per act-slot type. Pairs whose
// only values in the MR are empty are ignored on both sides.
inline SlotErrors count_slot_errors(const Tokens& delex, const MeaningRepresentation& mr) {
  std::map<std::string, long> required;
  std::map<std::string, bool> ignored;
  for (const auto& da : mr.acts) {
    const std::string ph = placeholder(da.pair());
    if (da.value.empty()) {
      ignored.emplace(ph, true);
    } else {
      ++required[ph];
      ignored[ph] = false;
    }
  }
  std::map<std::string, long> emitted;
  for (const auto& tok : delex) {
    if (!is_placeholder(tok)) continue;
    if (auto it = ignored.find(tok); it != ignored.end() && it->second) continue;
    ++emitted[tok];
  }
  SlotErrors err;
  for (const auto& [ph, need] : required) {
    err.required += static_cast<std::size_t>(need);
    const long have = emitted.count(ph) ? emitted[ph] : 0;
    if (have < need) err.missing += static_cast<std::size_t>(need - have);
  }
  for (const auto& [ph, have] : emitted) {
    const long need = required.count(ph) ? required[ph] : 0;
    if (have > need) err.redundant += static_cast<std::size_t>(have - need);
  }
  return err;
}

inline double slot_error_rate(const Tokens& delex, const MeaningRepresentation& mr) {
  return count_slot_errors(delex, mr).rate();
}

struct ScoredHypothesis {
  Tokens delex;  // eos stripped
  double logprob = 0.0;
  double err = 0.0;
  double score = 0.0;
  bool finished = false;
};

// Stable sort by logprob - lambda * ERR, best first.
inline std::vector<ScoredHypothesis> rerank(std::vector<ScoredHypothesis> hyps,
                                            const MeaningRepresentation& mr,
                                            double lambda) {
  for (auto& h : hyps) {
    h.err = slot_error_rate(h.delex, mr);
    h.score = h.logprob - lambda * h.err;
  }
  std::stable_sort(hyps.begin(), hyps.end(),
                   [](const ScoredHypothesis& a, const ScoredHypothesis& b) {
                     return a.score > b.score;
                   });
  return hyps;
}

struct NBestEntry {
  std::size_t rank = 0;
  double score = 0.0;
  double logprob = 0.0;
  double err = 0.0;
  Tokens text;  // lexicalized
};

struct Generation {
  Tokens text;
  Tokens delex;
  std::vector<NBestEntry> nbest;
};

inline std::vector<ScoredHypothesis> decode_candidates(const NlgModel& model,
                                                       const MeaningRepresentation& mr,
                                                       const GenerationConfig& cfg) {
  NlgStepper stepper{&model};
  const auto hyps = beam_search(stepper, model.initial_state(mr), Vocabulary::kBos,
                                Vocabulary::kEos, cfg);
  if (hyps.empty()) throw Error("beam search returned no hypotheses");
  std::vector<ScoredHypothesis> scored;
  for (const auto& h : hyps) {
    ScoredHypothesis s;
    s.logprob = h.logprob;
    s.finished = h.finished;
    for (std::size_t id : h.tokens) {
      if (id == Vocabulary::kEos) break;
      s.delex.push_back(model.vocab().word(id));
    }
    scored.push_back(std::move(s));
  }
  return scored;
}

// Beam search, forward reranking, then lexicalization of the best candidate.
// Placeholders without a value stay in the output verbatim.
inline Generation generate(const NlgModel& model, const MeaningRepresentation& mr,
                           const GenerationConfig& cfg) {
  auto ranked = rerank(decode_candidates(model, mr, cfg), mr, cfg.lambda);
  Generation g;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    auto lex = lexicalize_lenient(ranked[k].delex, mr);
    if (k == 0) {
      for (const auto& u : lex.unbound) log::warn("unbound placeholder in output: ", u);
      g.text = lex.tokens;
      g.delex = ranked[k].delex;
    }
    g.nbest.push_back({k + 1, ranked[k].score, ranked[k].logprob, ranked[k].err,
                       std::move(lex.tokens)});
  }
  return g;
}

// rank <TAB> score <TAB> logprob <TAB> ERR <TAB> text
inline void write_nbest(std::ostream& os, const std::vector<NBestEntry>& nbest) {
  char buf[96];
  for (const auto& e : nbest) {
    std::snprintf(buf, sizeof(buf), "%zu\t%.6f\t%.6f\t%.6f\t", e.rank, e.score,
                  e.logprob, e.err);
    os << buf << join(e.text) << '\n';
  }
}

}  // namespace ldsc
