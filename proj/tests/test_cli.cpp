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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ldsc/config.hpp"
#include "ldsc/pipeline.hpp"

namespace ldsc {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ldsc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

Config tiny_config() {
  Config c;
  c.embedding_dim = 8;
  c.encoder_hidden = 8;
  c.decoder_hidden = 16;
  c.epochs = 5;
  c.batch_size = 8;
  c.synth_size = 40;
  c.ae_embedding_dim = 8;
  c.ae_encoder_hidden = 8;
  c.ae_epochs = 3;
  return c;
}

TEST(Config, DefaultConstants) {
  const Config c;
  EXPECT_EQ(c.dropout, 0.5);
  EXPECT_EQ(c.alpha, 1.0);
  EXPECT_EQ(c.eta, 0.0001);
  EXPECT_EQ(c.xi, 100.0);
  EXPECT_EQ(c.beam_width, 10u);
  EXPECT_EQ(c.max_len, 30u);
  EXPECT_EQ(c.lambda, 1000.0);
  EXPECT_EQ(c.pretrain_k, 5000u);
  EXPECT_EQ(c.patience, 10u);
  std::istringstream empty("");
  EXPECT_EQ(parse_config(empty), c);
}

TEST(Config, RoundTrip) {
  Config c = tiny_config();
  c.learning_rate = 0.0123456789012345;
  c.lexicalized = false;
  c.synth_grammar = "article";
  c.seed = 77;
  std::ostringstream os;
  write_config(os, c);
  std::istringstream is(os.str());
  EXPECT_EQ(parse_config(is), c);
}

TEST(Config, ParsesCommentsAndRejectsBadInput) {
  std::istringstream ok("# comment\n  beam_width = 3  # inline\n\nlexicalized=false\n");
  const Config c = parse_config(ok);
  EXPECT_EQ(c.beam_width, 3u);
  EXPECT_FALSE(c.lexicalized);
  std::istringstream unknown("beam_widht = 3\n");
  EXPECT_THROW(parse_config(unknown), ConfigError);
  std::istringstream no_eq("beam_width 3\n");
  EXPECT_THROW(parse_config(no_eq), ConfigError);
  std::istringstream bad_num("beam_width = three\n");
  EXPECT_THROW(parse_config(bad_num), ConfigError);
  std::istringstream layers("decoder_layers = 2\n");
  EXPECT_THROW(parse_config(layers), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/ldsc.cfg"), IoError);
}

TEST_F(Scratch, TrainSmokeWithDefaultConfig) {
  Config cfg;
  cfg.synth_size = 100;
  const auto data = pipeline::cmd_synth_data(cfg, dir_);
  const auto r = pipeline::cmd_train(cfg, data.train, data.valid, dir_ / "run");
  EXPECT_TRUE(fs::exists(r.checkpoint));
  EXPECT_LT(r.result.best_valid_loss, r.result.initial_valid_loss);
  EXPECT_TRUE(fs::exists(dir_ / "run" / "train_log.tsv"));
  EXPECT_EQ(load_config(dir_ / "run" / "config.txt"), cfg);
}

TEST_F(Scratch, ZeroEpochsSavesInitialWeights) {
  Config cfg = tiny_config();
  cfg.epochs = 0;
  const auto data = pipeline::cmd_synth_data(cfg, dir_);
  const auto r = pipeline::cmd_train(cfg, data.train, data.valid, dir_ / "run");
  auto [train, valid] = pipeline::load_train_valid(cfg, data.train, data.valid);
  const NlgModel fresh = make_model(train, cfg.model_config(), cfg.min_count, cfg.seed);
  EXPECT_EQ(slurp(r.checkpoint), [&] {
    save_model(fresh, dir_ / "fresh.ckpt");
    return slurp(dir_ / "fresh.ckpt");
  }());
}

TEST_F(Scratch, MissingPathsRaiseIoError) {
  const Config cfg = tiny_config();
  try {
    pipeline::cmd_train(cfg, dir_ / "nope.jsonl", std::nullopt, dir_ / "run");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("nope.jsonl"), std::string::npos);
  }
  EXPECT_THROW(pipeline::cmd_generate(cfg, dir_ / "none.ckpt", dir_ / "mrs.jsonl", dir_),
               IoError);
}

TEST_F(Scratch, TransferTrainPipeline) {
  Config cfg = tiny_config();
  const auto data = pipeline::cmd_synth_data(cfg, dir_);
  {
    std::ofstream os(dir_ / "reviews.txt");
    for (const auto& s : synth_review_sentences(2, 60)) os << s << '\n';
  }
  const auto r = pipeline::cmd_transfer_train(cfg, dir_ / "reviews.txt", data.train, data.valid,
                                              dir_ / "tr");
  const NlgModel ae = load_model(r.autoencoder_checkpoint);
  const NlgModel model = load_model(r.checkpoint);
  EXPECT_FALSE(model.find_parameter("dec.W_f")->value == ae.find_parameter("ae.dec.W_f")->value);
  EXPECT_EQ(slurp(dir_ / "tr" / "pretrain_sentences.txt").empty(), false);

  cfg.epochs = 0;
  const auto frozen = pipeline::cmd_transfer_train(cfg, dir_ / "reviews.txt", data.train,
                                                   data.valid, dir_ / "tr0");
  const NlgModel m0 = load_model(frozen.checkpoint);
  const NlgModel ae0 = load_model(frozen.autoencoder_checkpoint);
  for (const char* g : kTransferredGates) {
    EXPECT_TRUE(m0.find_parameter(std::string("dec.") + g)->value ==
                ae0.find_parameter(std::string("ae.dec.") + g)->value);
  }
}

TEST_F(Scratch, EmptySentenceFile) {
  const Config cfg = tiny_config();
  std::ofstream(dir_ / "empty.txt") << "\n\n";
  EXPECT_THROW(pipeline::cmd_pretrain(cfg, dir_ / "empty.txt", dir_ / "pre"), EmptyInput);
}

TEST_F(Scratch, GenerateWithMemorizedModel) {
  Config cfg;
  cfg.embedding_dim = 16;
  cfg.encoder_hidden = 16;
  cfg.decoder_hidden = 32;
  cfg.learning_rate = 0.01;
  cfg.batch_size = 4;
  cfg.epochs = 300;
  cfg.dropout = 0.0;
  cfg.patience = 300;
  const fs::path responses = fs::path(LDSC_TEST_DATA) / "responses.jsonl";
  const auto tr = pipeline::cmd_train(cfg, responses, responses, dir_);
  const auto gen = pipeline::cmd_generate(cfg, tr.checkpoint, responses, dir_);
  const Dataset ref = load_dataset(responses);
  std::ifstream is(gen.outputs);
  std::string line;
  for (const auto& ex : ref.examples) {
    ASSERT_TRUE(std::getline(is, line));
    EXPECT_EQ(line, join(ex.text));
  }
  EXPECT_FALSE(std::getline(is, line));
  const std::string nbest = slurp(gen.nbest);
  EXPECT_EQ(nbest.rfind("# 0 r1\n1\t", 0), 0u);
  EXPECT_NE(nbest.find("\tsuper ramen serves pizza .\n"), std::string::npos);

  const auto ev = pipeline::cmd_evaluate(cfg, tr.checkpoint, responses, dir_ / "eval");
  EXPECT_EQ(ev.report.bleu4, 1.0);
  EXPECT_NE(slurp(ev.text).find("ld-sc-LSTM"), std::string::npos);
}

TEST_F(Scratch, EvaluateReferencesAsOutputs) {
  Config cfg = tiny_config();
  const auto data = pipeline::cmd_synth_data(cfg, dir_);
  const Dataset test = load_dataset(data.valid);
  {
    std::ofstream os(dir_ / "refs.txt");
    for (const auto& ex : test.examples) os << ex.id << '\t' << join(ex.text) << '\n';
  }
  const auto ev = pipeline::cmd_evaluate_outputs(dir_ / "refs.txt", data.valid, dir_ / "eval");
  EXPECT_EQ(ev.report.bleu4, 1.0);
  EXPECT_EQ(ev.report.rouge_l, 1.0);
  EXPECT_EQ(ev.report.mean_err, 0.0);
  EXPECT_TRUE(fs::exists(ev.json));
}

TEST(Gradcheck, DefaultSeedPasses) {
  const auto g = pipeline::cmd_gradcheck(Config{});
  EXPECT_TRUE(g.ok);
  EXPECT_LE(g.max_error, 1e-4);
}

TEST_F(Scratch, EndToEndRunsAreBitIdentical) {
  const Config cfg = tiny_config();
  std::string previous[5];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir_ / ("run" + std::to_string(run));
    const auto data = pipeline::cmd_synth_data(cfg, out);
    const auto tr = pipeline::cmd_train(cfg, data.train, data.valid, out);
    const auto gen = pipeline::cmd_generate(cfg, tr.checkpoint, data.valid, out);
    const auto ev = pipeline::cmd_evaluate(cfg, tr.checkpoint, data.valid, out / "eval");
    const std::string files[5] = {slurp(data.data), slurp(tr.checkpoint), slurp(gen.outputs),
                                  slurp(gen.nbest), slurp(ev.json)};
    for (int k = 0; k < 5; ++k) {
      EXPECT_FALSE(files[k].empty());
      if (run == 1) {
        EXPECT_EQ(files[k], previous[k]) << "file " << k;
      }
      previous[k] = files[k];
    }
  }
}

TEST_F(Scratch, BinaryExitCodes) {
  const std::string cli = LDSC_CLI;
  EXPECT_EQ(std::system((cli + " gradcheck > /dev/null 2>&1").c_str()), 0);
  EXPECT_NE(std::system((cli + " train --train " + (dir_ / "missing.jsonl").string() +
                         " --out " + dir_.string() + " > /dev/null 2>&1")
                            .c_str()),
            0);
  EXPECT_EQ(std::system((cli + " synth-data --size 12 --seed 4 --out " + dir_.string() +
                         " > /dev/null 2>&1")
                            .c_str()),
            0);
  EXPECT_EQ(load_dataset(dir_ / "data.jsonl").size(), 12u);
}

}  // namespace
}  // namespace ldsc
