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
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ldsc/errors.hpp"
#include "ldsc/generation.hpp"
#include "ldsc/model.hpp"
#include "ldsc/pretrain.hpp"
#include "ldsc/trainer.hpp"

namespace ldsc {

// Every knob of the pipeline. Dropout, alpha, eta, xi, beam width, max_len,
// lambda and pretrain_k follow the published setup; the rest are engineering
// choices.
struct Config {
  std::size_t embedding_dim = 32;
  std::size_t encoder_hidden = 32;
  std::size_t decoder_hidden = 64;
  std::size_t decoder_layers = 1;
  double learning_rate = 0.005;
  std::size_t batch_size = 16;
  std::size_t epochs = 200;
  double dropout = 0.5;
  double alpha = 1.0;
  double eta = 1e-4;
  double xi = 100.0;
  std::size_t beam_width = 10;
  std::size_t max_len = 30;
  double lambda = 1000.0;
  std::uint64_t seed = 1;
  std::size_t patience = 10;
  std::size_t min_count = 1;
  bool lexicalized = true;
  double valid_fraction = 0.1;
  std::size_t max_mr_size = 10;

  std::size_t ae_embedding_dim = 32;
  std::size_t ae_encoder_hidden = 32;
  std::size_t ae_epochs = 50;
  std::size_t ae_batch_size = 16;
  double ae_learning_rate = 0.005;
  double ae_dropout = 0.5;
  std::size_t pretrain_k = 5000;

  std::string synth_grammar = "basic";
  std::size_t synth_size = 100;
  std::size_t gradcheck_instances = 20;

  bool operator==(const Config&) const = default;

  ModelConfig model_config() const {
    ModelConfig m;
    m.embedding_dim = embedding_dim;
    m.encoder_hidden = encoder_hidden;
    m.decoder_hidden = decoder_hidden;
    m.alpha = alpha;
    m.lexicalized = lexicalized;
    return m;
  }

  TrainConfig train_config() const {
    TrainConfig t;
    t.learning_rate = learning_rate;
    t.batch_size = batch_size;
    t.epochs = epochs;
    t.dropout = dropout;
    t.patience = patience;
    t.seed = seed;
    t.max_len = max_len;
    t.loss.eta = eta;
    t.loss.xi = xi;
    return t;
  }

  GenerationConfig generation_config() const { return {beam_width, max_len, lambda}; }

  AutoencoderConfig autoencoder_config() const {
    AutoencoderConfig a;
    a.model.embedding_dim = ae_embedding_dim;
    a.model.encoder_hidden = ae_encoder_hidden;
    a.model.decoder_hidden = decoder_hidden;
    a.train = train_config();
    a.train.epochs = ae_epochs;
    a.train.batch_size = ae_batch_size;
    a.train.learning_rate = ae_learning_rate;
    a.train.dropout = ae_dropout;
    a.min_count = min_count;
    return a;
  }

  void validate() const {
    auto positive = [](std::size_t v, const char* name) {
      if (v == 0) throw ConfigError(std::string(name) + " must be positive");
    };
    positive(embedding_dim, "embedding_dim");
    positive(encoder_hidden, "encoder_hidden");
    positive(decoder_hidden, "decoder_hidden");
    positive(batch_size, "batch_size");
    positive(beam_width, "beam_width");
    positive(max_len, "max_len");
    positive(ae_embedding_dim, "ae_embedding_dim");
    positive(ae_encoder_hidden, "ae_encoder_hidden");
    positive(ae_batch_size, "ae_batch_size");
    positive(pretrain_k, "pretrain_k");
    positive(max_mr_size, "max_mr_size");
    if (decoder_layers != 1) throw ConfigError("only decoder_layers = 1 is supported");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");
    if (ae_dropout < 0.0 || ae_dropout >= 1.0) throw ConfigError("ae_dropout must be in [0, 1)");
    if (!(learning_rate > 0.0) || !(ae_learning_rate > 0.0)) {
      throw ConfigError("learning rates must be positive");
    }
    if (valid_fraction < 0.0 || valid_fraction >= 1.0) {
      throw ConfigError("valid_fraction must be in [0, 1)");
    }
  }
};

namespace detail {

struct ConfigField {
  std::function<std::string(const Config&)> get;
  std::function<void(Config&, const std::string&)> set;
};

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("bad boolean for " + key + ": " + text);
  } else if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else {
    if (std::is_unsigned_v<T> && !text.empty() && text.front() == '-') {
      throw ConfigError("negative value for " + key + ": " + text);
    }
    is >> v;
    if (!is || !(is >> std::ws).eof()) throw ConfigError("bad value for " + key + ": " + text);
    return v;
  }
}

template <class T>
std::string format_value(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
  }
}

template <class T>
ConfigField field(T Config::*member, std::string key) {
  return {[member](const Config& c) { return format_value(c.*member); },
          [member, key](Config& c, const std::string& text) {
            c.*member = parse_value<T>(key, text);
          }};
}

inline const std::vector<std::pair<std::string, ConfigField>>& config_fields() {
  static const std::vector<std::pair<std::string, ConfigField>> fields = [] {
    std::vector<std::pair<std::string, ConfigField>> f;
#define LDSC_FIELD(name) f.emplace_back(#name, field(&Config::name, #name))
    LDSC_FIELD(embedding_dim);
    LDSC_FIELD(encoder_hidden);
    LDSC_FIELD(decoder_hidden);
    LDSC_FIELD(decoder_layers);
    LDSC_FIELD(learning_rate);
    LDSC_FIELD(batch_size);
    LDSC_FIELD(epochs);
    LDSC_FIELD(dropout);
    LDSC_FIELD(alpha);
    LDSC_FIELD(eta);
    LDSC_FIELD(xi);
    LDSC_FIELD(beam_width);
    LDSC_FIELD(max_len);
    LDSC_FIELD(lambda);
    LDSC_FIELD(seed);
    LDSC_FIELD(patience);
    LDSC_FIELD(min_count);
    LDSC_FIELD(lexicalized);
    LDSC_FIELD(valid_fraction);
    LDSC_FIELD(max_mr_size);
    LDSC_FIELD(ae_embedding_dim);
    LDSC_FIELD(ae_encoder_hidden);
    LDSC_FIELD(ae_epochs);
    LDSC_FIELD(ae_batch_size);
    LDSC_FIELD(ae_learning_rate);
    LDSC_FIELD(ae_dropout);
    LDSC_FIELD(pretrain_k);
    LDSC_FIELD(synth_grammar);
    LDSC_FIELD(synth_size);
    LDSC_FIELD(gradcheck_instances);
#undef LDSC_FIELD
    return f;
  }();
  return fields;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// key = value lines; '#' starts a comment. Unknown keys are errors.
inline void apply_config_line(Config& c, const std::string& raw, std::size_t line_no) {
  std::string line = raw;
  if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
  line = detail::trim(line);
  if (line.empty()) return;
  const auto eq = line.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
  }
  const std::string key = detail::trim(line.substr(0, eq));
  const std::string value = detail::trim(line.substr(eq + 1));
  for (const auto& [name, f] : detail::config_fields()) {
    if (name == key) {
      f.set(c, value);
      return;
    }
  }
  throw ConfigError("line " + std::to_string(line_no) + ": unknown key " + key);
}

inline Config parse_config(std::istream& is) {
  Config c;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) apply_config_line(c, line, ++n);
  c.validate();
  return c;
}

inline Config load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return parse_config(is);
}

inline void write_config(std::ostream& os, const Config& c) {
  os << "# ldsc configuration\n";
  for (const auto& [name, f] : detail::config_fields()) os << name << " = " << f.get(c) << '\n';
}

inline void save_config(const Config& c, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_config(os, c);
}

}  // namespace ldsc
