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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ldsc/ldsc.hpp"

namespace fs = std::filesystem;
using namespace ldsc;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "overrides the config seed");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
}

Config resolve(const Common& c) {
  Config cfg = c.config_path.empty() ? Config{} : load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ld-sc-LSTM natural language generation"};
  app.require_subcommand(1);

  Common common;

  auto* synth = app.add_subcommand("synth-data", "write a synthetic corpus");
  add_common(synth, common);
  std::string grammar;
  std::size_t size = 0;
  synth->add_option("--grammar", grammar, "basic or article");
  synth->add_option("--size", size, "number of examples");

  auto* train = app.add_subcommand("train", "train an ld-sc-LSTM");
  add_common(train, common);
  std::string train_path, valid_path;
  train->add_option("--train", train_path, "training set (jsonl)")->required();
  train->add_option("--valid", valid_path, "validation set (jsonl)");

  auto* pretrain = app.add_subcommand("pretrain", "train the sentence auto-encoder");
  add_common(pretrain, common);
  std::string sentences_path;
  pretrain->add_option("--sentences", sentences_path, "one sentence per line")->required();

  auto* transfer = app.add_subcommand("transfer-train", "pretrain, transfer, fine-tune");
  add_common(transfer, common);
  transfer->add_option("--sentences", sentences_path, "one sentence per line")->required();
  transfer->add_option("--train", train_path, "training set (jsonl)")->required();
  transfer->add_option("--valid", valid_path, "validation set (jsonl)");

  auto* gen = app.add_subcommand("generate", "decode sentences for MRs");
  add_common(gen, common);
  std::string model_path, mrs_path;
  gen->add_option("--model", model_path, "checkpoint")->required();
  gen->add_option("--mrs", mrs_path, "MR file (jsonl, text optional)")->required();

  auto* eval = app.add_subcommand("evaluate", "score outputs against a test set");
  add_common(eval, common);
  std::string test_path, outputs_path;
  eval->add_option("--test", test_path, "test set (jsonl)")->required();
  auto* eval_model = eval->add_option("--model", model_path, "checkpoint to generate with");
  auto* eval_outputs = eval->add_option("--outputs", outputs_path, "existing outputs file");
  eval_model->excludes(eval_outputs);

  auto* grad = app.add_subcommand("gradcheck", "finite-difference gradient check");
  add_common(grad, common);

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = resolve(common);
    const fs::path out = common.out;
    if (synth->parsed()) {
      Config c = cfg;
      if (!grammar.empty()) c.synth_grammar = grammar;
      if (size > 0) c.synth_size = size;
      const auto o = pipeline::cmd_synth_data(c, out);
      std::cout << o.data.string() << '\n';
    } else if (train->parsed()) {
      const auto o = pipeline::cmd_train(cfg, train_path, opt_path(valid_path), out);
      std::cout << o.checkpoint.string() << '\n';
    } else if (pretrain->parsed()) {
      const auto o = pipeline::cmd_pretrain(cfg, sentences_path, out);
      std::cout << o.checkpoint.string() << '\n';
    } else if (transfer->parsed()) {
      const auto o = pipeline::cmd_transfer_train(cfg, sentences_path, train_path,
                                                  opt_path(valid_path), out);
      std::cout << o.autoencoder_checkpoint.string() << '\n' << o.checkpoint.string() << '\n';
    } else if (gen->parsed()) {
      const auto o = pipeline::cmd_generate(cfg, model_path, mrs_path, out);
      std::cout << o.outputs.string() << '\n';
    } else if (eval->parsed()) {
      if (model_path.empty() == outputs_path.empty()) {
        throw ConfigError("evaluate needs exactly one of --model or --outputs");
      }
      const auto o = model_path.empty()
                         ? pipeline::cmd_evaluate_outputs(outputs_path, test_path, out)
                         : pipeline::cmd_evaluate(cfg, model_path, test_path, out);
      std::cout << format_report(o.report, model_path.empty() ? "outputs" : "model");
    } else if (grad->parsed()) {
      const auto o = pipeline::cmd_gradcheck(cfg);
      std::printf("max relative error %.3e over %zu instances: %s\n", o.max_error,
                  cfg.gradcheck_instances, o.ok ? "ok" : "FAILED");
      return o.ok ? 0 : 1;
    }
  } catch (const Error& e) {
    log::error(e.what());
    return 2;
  }
  return 0;
}
