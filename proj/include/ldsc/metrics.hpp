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
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldsc/corpus/dataset.hpp"
#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/corpus/lexicalize.hpp"
#include "ldsc/errors.hpp"
#include "ldsc/generation.hpp"

namespace ldsc {

// Candidate/reference scoring in the style of the COCO caption toolkit.
struct EvalPair {
  Tokens candidate;
  std::vector<Tokens> references;
};

using NGram = std::vector<std::string>;
using NGramCounts = std::map<NGram, std::size_t>;

inline NGramCounts ngram_counts(const Tokens& tokens, std::size_t n) {
  NGramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[NGram(tokens.begin() + static_cast<long>(i),
                   tokens.begin() + static_cast<long>(i + n))];
  }
  return counts;
}

namespace detail {

inline void require_pairs(const std::vector<EvalPair>& pairs) {
  if (pairs.empty()) throw EmptyCorpus();
  for (const auto& p : pairs) {
    if (p.references.empty()) throw Error("evaluation pair without references");
  }
}

}  // namespace detail

// Clipped n-gram matches and candidate n-gram total for one pair.
struct NGramMatch {
  std::size_t matched = 0;
  std::size_t total = 0;
};

inline NGramMatch clipped_match(const EvalPair& pair, std::size_t n) {
  const NGramCounts cand = ngram_counts(pair.candidate, n);
  NGramCounts max_ref;
  for (const auto& ref : pair.references) {
    for (const auto& [g, c] : ngram_counts(ref, n)) {
      max_ref[g] = std::max(max_ref[g], c);
    }
  }
  NGramMatch m;
  for (const auto& [g, c] : cand) {
    m.total += c;
    auto it = max_ref.find(g);
    if (it != max_ref.end()) m.matched += std::min(c, it->second);
  }
  return m;
}

// Reference length closest to the candidate length, shorter on ties.
inline std::size_t closest_ref_length(const EvalPair& pair) {
  const auto c = static_cast<long>(pair.candidate.size());
  std::size_t best = pair.references.front().size();
  for (const auto& ref : pair.references) {
    const auto r = static_cast<long>(ref.size());
    const auto b = static_cast<long>(best);
    if (std::labs(r - c) < std::labs(b - c) || (std::labs(r - c) == std::labs(b - c) && r < b)) {
      best = ref.size();
    }
  }
  return best;
}

// Corpus BLEU with pooled clipped counts, uniform weights over n = 1..max_n,
// brevity penalty against closest reference lengths, no smoothing.
inline double corpus_bleu(const std::vector<EvalPair>& pairs, std::size_t max_n = 4) {
  detail::require_pairs(pairs);
  std::vector<std::size_t> matched(max_n + 1, 0), total(max_n + 1, 0);
  std::size_t cand_len = 0, ref_len = 0;
  for (const auto& p : pairs) {
    cand_len += p.candidate.size();
    ref_len += closest_ref_length(p);
    for (std::size_t n = 1; n <= max_n; ++n) {
      const auto m = clipped_match(p, n);
      matched[n] += m.matched;
      total[n] += m.total;
    }
  }
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (matched[n] == 0 || total[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched[n]) / static_cast<double>(total[n]));
  }
  const double c = static_cast<double>(cand_len);
  const double r = static_cast<double>(ref_len);
  const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

inline double bleu4(const std::vector<EvalPair>& pairs) { return corpus_bleu(pairs, 4); }

inline std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline constexpr double kRougeBeta = 1.2;

// LCS F-measure using the best precision and best recall over references.
inline double rouge_l_pair(const EvalPair& pair, double beta = kRougeBeta) {
  double best_p = 0.0, best_r = 0.0;
  for (const auto& ref : pair.references) {
    const auto lcs = static_cast<double>(lcs_length(pair.candidate, ref));
    if (!pair.candidate.empty()) {
      best_p = std::max(best_p, lcs / static_cast<double>(pair.candidate.size()));
    }
    if (!ref.empty()) best_r = std::max(best_r, lcs / static_cast<double>(ref.size()));
  }
  if (best_p == 0.0 || best_r == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * best_p * best_r / (best_r + b2 * best_p);
}

inline double rouge_l(const std::vector<EvalPair>& pairs) {
  detail::require_pairs(pairs);
  double sum = 0.0;
  for (const auto& p : pairs) sum += rouge_l_pair(p);
  return sum / static_cast<double>(pairs.size());
}

// Plain CIDEr: tf-idf n-gram vectors (n = 1..4), idf from reference document
// frequencies over the evaluated pairs, cosine averaged over n and
// references, times 10.
class CiderScorer {
 public:
  explicit CiderScorer(const std::vector<EvalPair>& pairs) : pairs_(pairs) {
    detail::require_pairs(pairs);
    std::set<std::pair<Tokens, std::vector<Tokens>>> distinct;
    for (const auto& p : pairs) distinct.emplace(p.candidate, p.references);
    if (distinct.size() < 2) throw CorpusTooSmall();
    log_docs_ = std::log(static_cast<double>(pairs.size()));
    for (const auto& p : pairs) {
      std::set<NGram> seen;
      for (const auto& ref : p.references) {
        for (std::size_t n = 1; n <= kMaxN; ++n) {
          for (const auto& [g, c] : ngram_counts(ref, n)) seen.insert(g);
        }
      }
      for (const auto& g : seen) ++doc_freq_[g];
    }
  }

  double pair_score(std::size_t i) const {
    const auto& p = pairs_[i];
    const auto cand = vectors(p.candidate);
    double total = 0.0;
    for (const auto& ref : p.references) {
      const auto rv = vectors(ref);
      for (std::size_t n = 0; n < kMaxN; ++n) total += cosine(cand[n], rv[n]);
    }
    total /= static_cast<double>(kMaxN);
    total /= static_cast<double>(p.references.size());
    return total * 10.0;
  }

  double corpus_score() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < pairs_.size(); ++i) sum += pair_score(i);
    return sum / static_cast<double>(pairs_.size());
  }

 private:
  static constexpr std::size_t kMaxN = 4;
  using Weighted = std::map<NGram, double>;

  std::vector<Weighted> vectors(const Tokens& s) const {
    std::vector<Weighted> out(kMaxN);
    for (std::size_t n = 1; n <= kMaxN; ++n) {
      for (const auto& [g, c] : ngram_counts(s, n)) {
        auto it = doc_freq_.find(g);
        const double df = it == doc_freq_.end() ? 1.0 : static_cast<double>(it->second);
        out[n - 1][g] = static_cast<double>(c) * (log_docs_ - std::log(std::max(1.0, df)));
      }
    }
    return out;
  }

  static double cosine(const Weighted& a, const Weighted& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [g, v] : a) {
      na += v * v;
      if (auto it = b.find(g); it != b.end()) dot += v * it->second;
    }
    for (const auto& [g, v] : b) nb += v * v;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
  }

  const std::vector<EvalPair>& pairs_;
  double log_docs_ = 0.0;
  std::map<NGram, std::size_t> doc_freq_;
};

inline double cider(const std::vector<EvalPair>& pairs) {
  return CiderScorer(pairs).corpus_score();
}

struct PairScores {
  std::string id;
  double rouge_l = 0.0;
  double cider = 0.0;
  double err = 0.0;
};

struct MetricReport {
  double bleu4 = 0.0;
  double rouge_l = 0.0;
  double cider = 0.0;
  double mean_err = 0.0;
  std::size_t pairs = 0;
  std::vector<PairScores> per_pair;
};

// Scores lexicalized outputs against the dataset references. ERR is
// measured by locating value mentions in each output.
inline MetricReport evaluate_outputs(const std::vector<Tokens>& outputs,
                                     const Dataset& dataset) {
  if (outputs.size() != dataset.size()) {
    throw AlignmentError("outputs have " + std::to_string(outputs.size()) +
                         " lines, dataset has " + std::to_string(dataset.size()) +
                         " examples");
  }
  std::vector<EvalPair> pairs;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    pairs.push_back({outputs[i], {dataset.examples[i].text}});
  }
  MetricReport r;
  r.pairs = pairs.size();
  r.bleu4 = bleu4(pairs);
  r.rouge_l = rouge_l(pairs);
  std::vector<double> cider_scores(pairs.size(), 0.0);
  if (pairs.size() >= 2) {
    try {
      CiderScorer scorer(pairs);
      for (std::size_t i = 0; i < pairs.size(); ++i) cider_scores[i] = scorer.pair_score(i);
      r.cider = scorer.corpus_score();
    } catch (const CorpusTooSmall&) {
      log::warn("CIDEr undefined for a corpus of identical pairs");
    }
  }
  double err_sum = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& ex = dataset.examples[i];
    const double err =
        slot_error_rate(delexicalize_all_mentions(outputs[i], ex.mr), ex.mr);
    err_sum += err;
    r.per_pair.push_back({ex.id, rouge_l_pair(pairs[i]), cider_scores[i], err});
  }
  r.mean_err = err_sum / static_cast<double>(pairs.size());
  return r;
}

// Reads an outputs file: one sentence per line, optionally "id<TAB>sentence".
// When ids are present they must match the dataset ids in order.
inline std::vector<Tokens> read_outputs(const std::filesystem::path& path,
                                        const Dataset& dataset) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<Tokens> outputs;
  std::string line;
  std::size_t i = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    if (tab != std::string::npos) {
      const std::string id = line.substr(0, tab);
      if (i >= dataset.size() || dataset.examples[i].id != id) {
        throw AlignmentError("output line " + std::to_string(i + 1) + " has id '" + id +
                             "', expected '" +
                             (i < dataset.size() ? dataset.examples[i].id : "") + "'");
      }
      line = line.substr(tab + 1);
    }
    outputs.push_back(tokenize(line));
    ++i;
  }
  return outputs;
}

inline MetricReport evaluate_corpus(const std::filesystem::path& outputs_path,
                                    const Dataset& dataset) {
  return evaluate_outputs(read_outputs(outputs_path, dataset), dataset);
}

// Table-shaped summary. METEOR is not computed.
inline std::string format_report(const MetricReport& r, const std::string& model_name) {
  char buf[256];
  std::ostringstream os;
  std::snprintf(buf, sizeof(buf), "%-24s %8s %8s %8s %8s\n", "Model", "B-4", "R_L", "C",
                "ERR");
  os << buf;
  std::snprintf(buf, sizeof(buf), "%-24s %8.4f %8.4f %8.4f %8.4f\n", model_name.c_str(),
                r.bleu4, r.rouge_l, r.cider, r.mean_err);
  os << buf;
  os << "pairs: " << r.pairs << " (METEOR not computed)\n";
  return os.str();
}

inline nlohmann::json report_to_json(const MetricReport& r, const std::string& model_name) {
  nlohmann::json j;
  j["model"] = model_name;
  j["bleu4"] = r.bleu4;
  j["rouge_l"] = r.rouge_l;
  j["cider"] = r.cider;
  j["mean_err"] = r.mean_err;
  j["pairs"] = r.pairs;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& p : r.per_pair) {
    per.push_back({{"id", p.id}, {"rouge_l", p.rouge_l}, {"cider", p.cider}, {"err", p.err}});
  }
  j["per_pair"] = per;
  return j;
}

}  // namespace ldsc
