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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ldsc/config.hpp"
#include "ldsc/corpus/dataset.hpp"
#include "ldsc/corpus/synth.hpp"
#include "ldsc/diagnostics.hpp"
#include "ldsc/generation.hpp"
#include "ldsc/log.hpp"
#include "ldsc/metrics.hpp"
#include "ldsc/model.hpp"
#include "ldsc/pretrain.hpp"
#include "ldsc/trainer.hpp"

// One function per CLI subcommand. Each writes its artifacts into an output
// directory and is deterministic given the config (seed included).
namespace ldsc::pipeline {

namespace fs = std::filesystem;

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

inline std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

inline void require_file(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
}

// --- synth-data ------------------------------------------------------------

struct SynthOutputs {
  fs::path data, train, valid;
};

inline SynthOutputs cmd_synth_data(const Config& cfg, const fs::path& out) {
  ensure_dir(out);
  const Dataset all = synth_corpus(cfg.seed, cfg.synth_size, cfg.synth_grammar);
  SynthOutputs o{out / "data.jsonl", out / "train.jsonl", out / "valid.jsonl"};
  save_dataset(all, o.data);
  if (cfg.valid_fraction > 0.0) {
    auto [train, valid] = split_train_valid(all, cfg.valid_fraction, cfg.seed);
    save_dataset(train, o.train);
    save_dataset(valid, o.valid);
  } else {
    save_dataset(all, o.train);
    auto os = open_out(o.valid);
  }
  const auto stats = statistics(all);
  log::info("synth-data: ", stats.sentences, " sentences, ", stats.words, " words, vocabulary ",
            stats.vocabulary);
  return o;
}

// --- train -----------------------------------------------------------------

inline void write_train_log(const fs::path& path, const TrainResult& r) {
  auto os = open_out(path);
  char buf[128];
  os << "epoch\ttrain_loss\tvalid_loss\n";
  std::snprintf(buf, sizeof(buf), "0\t\t%.9g\n", r.initial_valid_loss);
  os << buf;
  for (const auto& e : r.history) {
    std::snprintf(buf, sizeof(buf), "%zu\t%.9g\t%.9g\n", e.epoch, e.train_loss, e.valid_loss);
    os << buf;
  }
}

// Loads training data, and validation data when a path is given; otherwise
// carves the validation set out of the training file.
inline std::pair<Dataset, Dataset> load_train_valid(const Config& cfg, const fs::path& train_path,
                                                    const std::optional<fs::path>& valid_path) {
  require_file(train_path);
  Dataset train = load_dataset(train_path);
  Dataset valid;
  if (valid_path) {
    require_file(*valid_path);
    std::ifstream is(*valid_path);
    if (is.peek() != std::ifstream::traits_type::eof()) valid = load_dataset(*valid_path);
  } else if (cfg.valid_fraction > 0.0) {
    std::tie(train, valid) = split_train_valid(train, cfg.valid_fraction, cfg.seed);
  }
  for (const Dataset* d : {&train, &valid}) {
    for (const auto& ex : d->examples) {
      if (ex.mr.acts.size() > cfg.max_mr_size) {
        throw SchemaError("MR with " + std::to_string(ex.mr.acts.size()) +
                          " acts exceeds max_mr_size");
      }
    }
  }
  // The model must know every act-slot pair it will be asked to encode.
  std::vector<Example> all = train.examples;
  all.insert(all.end(), valid.examples.begin(), valid.examples.end());
  train.inventory = collect_inventory(all, Schema::restaurant());
  return {std::move(train), std::move(valid)};
}

struct TrainOutputs {
  fs::path checkpoint;
  TrainResult result;
};

inline TrainOutputs train_and_save(NlgModel& model, const Config& cfg, const Dataset& train,
                                   const Dataset& valid, const fs::path& out) {
  const auto result =
      train_model(model, make_items(model, train), make_items(model, valid), cfg.train_config());
  TrainOutputs o{out / "model.ckpt", result};
  save_model(model, o.checkpoint);
  write_train_log(out / "train_log.tsv", result);
  save_config(cfg, out / "config.txt");
  log::info("train: best epoch ", result.best_epoch, " valid_loss ", result.best_valid_loss,
            " (initial ", result.initial_valid_loss, ")");
  return o;
}

inline TrainOutputs cmd_train(const Config& cfg, const fs::path& train_path,
                              const std::optional<fs::path>& valid_path, const fs::path& out) {
  cfg.validate();
  auto [train, valid] = load_train_valid(cfg, train_path, valid_path);
  ensure_dir(out);
  NlgModel model = make_model(train, cfg.model_config(), cfg.min_count, cfg.seed);
  return train_and_save(model, cfg, train, valid, out);
}

// --- pretrain / transfer-train ---------------------------------------------

struct PretrainOutputs {
  fs::path checkpoint;
  Autoencoder autoencoder;
};

inline PretrainOutputs cmd_pretrain(const Config& cfg, const fs::path& sentences_path,
                                    const fs::path& out) {
  cfg.validate();
  require_file(sentences_path);
  const auto corpus = select_pretraining_sentences(read_sentence_file(sentences_path),
                                                   default_pretrain_keywords(), cfg.pretrain_k);
  ensure_dir(out);
  {
    auto os = open_out(out / "pretrain_sentences.txt");
    for (const auto& s : corpus.sentences) os << join(s) << '\n';
  }
  PretrainOutputs o{out / "ae.ckpt", train_autoencoder(corpus, cfg.autoencoder_config())};
  save_model(o.autoencoder.model, o.checkpoint);
  write_train_log(out / "ae_train_log.tsv", o.autoencoder.result);
  log::info("pretrain: ", corpus.sentences.size(), " sentences, best loss ",
            o.autoencoder.result.best_valid_loss);
  return o;
}

struct TransferOutputs {
  fs::path autoencoder_checkpoint;
  fs::path checkpoint;
  TrainResult result;
};

inline TransferOutputs cmd_transfer_train(const Config& cfg, const fs::path& sentences_path,
                                          const fs::path& train_path,
                                          const std::optional<fs::path>& valid_path,
                                          const fs::path& out) {
  cfg.validate();
  auto [train, valid] = load_train_valid(cfg, train_path, valid_path);
  const auto pre = cmd_pretrain(cfg, sentences_path, out);
  NlgModel model = make_model(train, cfg.model_config(), cfg.min_count, cfg.seed);
  transfer_weights(pre.autoencoder.model, model);
  const auto trained = train_and_save(model, cfg, train, valid, out);
  return {pre.checkpoint, trained.checkpoint, trained.result};
}

// --- generate --------------------------------------------------------------

struct GenerateOutputs {
  fs::path outputs, nbest;
  std::vector<Tokens> sentences;
};

inline std::vector<Generation> generate_all(const NlgModel& model, const Dataset& mrs,
                                            const GenerationConfig& gen) {
  std::vector<Generation> out;
  out.reserve(mrs.size());
  for (const auto& ex : mrs.examples) out.push_back(generate(model, ex.mr, gen));
  return out;
}

// outputs.txt: one sentence per MR, aligned by line.
// nbest.txt: per MR a "# <index> <id>" header, the ranked list, a blank line.
inline GenerateOutputs write_generations(const Dataset& mrs, const std::vector<Generation>& gens,
                                         const fs::path& out) {
  GenerateOutputs o{out / "outputs.txt", out / "nbest.txt", {}};
  auto os = open_out(o.outputs);
  auto nb = open_out(o.nbest);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    os << join(gens[i].text) << '\n';
    nb << "# " << i << ' ' << mrs.examples[i].id << '\n';
    write_nbest(nb, gens[i].nbest);
    nb << '\n';
    o.sentences.push_back(gens[i].text);
  }
  return o;
}

inline GenerateOutputs cmd_generate(const Config& cfg, const fs::path& checkpoint,
                                    const fs::path& mr_path, const fs::path& out) {
  cfg.validate();
  require_file(checkpoint);
  require_file(mr_path);
  const NlgModel model = load_model(checkpoint);
  const Dataset mrs = load_dataset(mr_path, Schema::restaurant(), false);
  ensure_dir(out);
  return write_generations(mrs, generate_all(model, mrs, cfg.generation_config()), out);
}

// --- evaluate --------------------------------------------------------------

struct EvaluateOutputs {
  fs::path text, json;
  MetricReport report;
};

inline EvaluateOutputs write_report(const MetricReport& report, const std::string& name,
                                    const fs::path& out) {
  EvaluateOutputs o{out / "report.txt", out / "report.json", report};
  open_out(o.text) << format_report(report, name);
  open_out(o.json) << report_to_json(report, name).dump(2) << '\n';
  return o;
}

// Scores an outputs file against the test set.
inline EvaluateOutputs cmd_evaluate_outputs(const fs::path& outputs_path, const fs::path& test_path,
                                            const fs::path& out) {
  require_file(outputs_path);
  require_file(test_path);
  const Dataset test = load_dataset(test_path);
  ensure_dir(out);
  return write_report(evaluate_corpus(outputs_path, test), outputs_path.stem().string(), out);
}

// Generates for every test MR with the checkpoint, then scores.
inline EvaluateOutputs cmd_evaluate(const Config& cfg, const fs::path& checkpoint,
                                    const fs::path& test_path, const fs::path& out) {
  cfg.validate();
  require_file(checkpoint);
  require_file(test_path);
  const NlgModel model = load_model(checkpoint);
  const Dataset test = load_dataset(test_path);
  ensure_dir(out);
  const auto gens = write_generations(test, generate_all(model, test, cfg.generation_config()), out);
  const std::string name = model.config().lexicalized ? "ld-sc-LSTM" : "d-sc-LSTM";
  return write_report(evaluate_outputs(gens.sentences, test), name, out);
}

// --- gradcheck -------------------------------------------------------------

struct GradcheckOutputs {
  double max_error = 0.0;
  bool ok = false;
};

inline constexpr double kGradcheckTolerance = 1e-4;

inline GradcheckOutputs cmd_gradcheck(const Config& cfg) {
  LossConfig loss;
  loss.eta = cfg.eta;
  loss.xi = cfg.xi;
  GradcheckOutputs o;
  o.max_error = run_gradcheck(cfg.seed, cfg.gradcheck_instances, loss);
  o.ok = o.max_error <= kGradcheckTolerance;
  return o;
}

}  // namespace ldsc::pipeline
