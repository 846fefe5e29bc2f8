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
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/corpus/lexicalize.hpp"
#include "ldsc/corpus/vocabulary.hpp"
#include "ldsc/errors.hpp"
#include "ldsc/log.hpp"
#include "ldsc/numerics/rng.hpp"

namespace ldsc {

struct Example {
  std::string id;
  MeaningRepresentation mr;
  Tokens text;
  Tokens delex_text;

  bool operator==(const Example&) const = default;
};

// Builds an example from an MR and its tokenized reference. Values sharing
// an act-slot pair are reordered to follow their mention order in the text.
inline Example make_example(MeaningRepresentation mr, Tokens text,
                            std::string id = {}) {
  Example ex;
  ex.id = std::move(id);
  ex.mr = text.empty() ? std::move(mr) : align_to_text(text, std::move(mr));
  ex.delex_text = text.empty() ? Tokens{} : delexicalize(text, ex.mr);
  ex.text = std::move(text);
  return ex;
}

struct Dataset {
  std::vector<Example> examples;
  ActSlotInventory inventory;
  std::string provenance;  // "train", "valid", "test" or empty

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  bool operator==(const Dataset&) const = default;
};

// Observed act-slot pairs in schema declaration order.
inline ActSlotInventory collect_inventory(const std::vector<Example>& examples,
                                          const Schema& schema) {
  std::vector<ActSlot> pairs;
  for (const auto& ex : examples) {
    for (const auto& da : ex.mr.acts) {
      auto p = da.pair();
      if (std::find(pairs.begin(), pairs.end(), p) == pairs.end()) {
        pairs.push_back(std::move(p));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const ActSlot& a, const ActSlot& b) {
    return schema.rank(a) < schema.rank(b);
  });
  return ActSlotInventory(std::move(pairs));
}

inline Dataset make_dataset(std::vector<Example> examples, const Schema& schema,
                            std::string provenance = {}) {
  Dataset d;
  d.inventory = collect_inventory(examples, schema);
  d.examples = std::move(examples);
  d.provenance = std::move(provenance);
  return d;
}

inline nlohmann::json mr_to_json(const MeaningRepresentation& mr) {
  nlohmann::json acts = nlohmann::json::array();
  for (const auto& da : mr.acts) {
    acts.push_back({{"act", da.act}, {"slot", da.slot}, {"value", join(da.value)}});
  }
  return acts;
}

inline MeaningRepresentation mr_from_json(const nlohmann::json& acts,
                                          const Schema& schema) {
  if (!acts.is_array()) throw SchemaError("\"acts\" must be an array");
  MeaningRepresentation mr;
  for (const auto& a : acts) {
    DialogueAct da;
    da.act = normalize_label(a.at("act").get<std::string>());
    da.slot = normalize_label(a.at("slot").get<std::string>());
    da.value = tokenize(a.value("value", std::string{}));
    mr.acts.push_back(std::move(da));
  }
  schema.validate(mr);
  return mr;
}

// Parses one JSON object per line. Blank lines are skipped. When
// require_text is false, records may omit "text" (MR-only input files).
inline Dataset parse_dataset(std::istream& is, const Schema& schema,
                             bool require_text = true) {
  std::vector<Example> examples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (!rec.is_object()) throw ParseError(line_no, "record is not an object");
      MeaningRepresentation mr = mr_from_json(rec.at("acts"), schema);
      Tokens text;
      if (rec.contains("text")) {
        text = tokenize(rec.at("text").get<std::string>());
      }
      if (require_text && text.empty()) throw ParseError(line_no, "missing text");
      std::string id = rec.contains("id") ? rec.at("id").get<std::string>()
                                          : std::string{};
      examples.push_back(make_example(std::move(mr), std::move(text), std::move(id)));
    } catch (const SchemaError& e) {
      throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (examples.empty()) throw EmptyDataset();
  return make_dataset(std::move(examples), schema);
}

inline Dataset load_dataset(const std::filesystem::path& path,
                            const Schema& schema = Schema::restaurant(),
                            bool require_text = true) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  Dataset d = parse_dataset(is, schema, require_text);
  return d;
}

inline void write_dataset(std::ostream& os, const Dataset& d) {
  for (const auto& ex : d.examples) {
    nlohmann::json rec;
    if (!ex.id.empty()) rec["id"] = ex.id;
    rec["acts"] = mr_to_json(ex.mr);
    rec["text"] = join(ex.text);
    os << rec.dump() << '\n';
  }
}

inline void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_dataset(os, d);
}

// Counts corpus words over delexicalized text and values; words seen fewer
// than min_count times are left out and later map to <unk>.
inline Vocabulary build_vocabulary(const Dataset& d, std::size_t min_count = 1) {
  if (d.empty()) throw EmptyDataset();
  if (min_count < 1) throw ConfigError("min_count must be at least 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& ex : d.examples) {
    for (const auto& t : ex.delex_text) {
      if (!is_placeholder(t)) ++counts[t];
    }
    for (const auto& da : ex.mr.acts) {
      for (const auto& t : da.value) ++counts[t];
    }
  }
  Vocabulary v;
  for (const auto& pair : d.inventory.pairs()) v.add(placeholder(pair));
  for (const auto& [word, n] : counts) {
    if (n >= min_count) v.add(word);
  }
  return v;
}

struct DatasetStats {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t vocabulary = 0;
};

inline DatasetStats statistics(const Dataset& d) {
  DatasetStats s;
  s.sentences = d.size();
  for (const auto& ex : d.examples) s.words += ex.text.size();
  s.vocabulary = build_vocabulary(d, 1).num_words();
  return s;
}

// Random exact partition; validation gets round(fraction * N) examples.
// Both halves keep the original example order.
inline std::pair<Dataset, Dataset> split_train_valid(const Dataset& d,
                                                     double fraction,
                                                     std::uint64_t seed) {
  if (d.empty()) throw EmptyDataset();
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("validation fraction must lie in (0, 1)");
  }
  const std::size_t n = d.size();
  const auto n_valid =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (n_valid == 0) log::warn("validation split is empty (", n, " examples)");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<bool> in_valid(n, false);
  for (std::size_t i = 0; i < n_valid; ++i) in_valid[order[i]] = true;
  Dataset train, valid;
  train.inventory = valid.inventory = d.inventory;
  train.provenance = "train";
  valid.provenance = "valid";
  for (std::size_t i = 0; i < n; ++i) {
    (in_valid[i] ? valid : train).examples.push_back(d.examples[i]);
  }
  return {std::move(train), std::move(valid)};
}

}  // namespace ldsc
