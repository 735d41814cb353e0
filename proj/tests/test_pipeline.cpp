/*
 Copyright 2026 The snn-smp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "snn/commands.hpp"
#include "snn/errors.hpp"

using namespace snn;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("snn_pipeline_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RunConfig quick_config(TaskKind kind, const fs::path& out, std::int64_t iterations = 1000) {
  auto cfg = default_run_config(kind);
  cfg.task.count = 500;
  cfg.task.seed = 7;
  cfg.train.iterations = iterations;
  cfg.train.seed = 3;
  cfg.train.log_every = 100;
  cfg.eval.samples = 200;
  cfg.eval.test_count = 300;
  cfg.eval.surface_resolution = 5;
  cfg.eval.surface_samples = 4;
  cfg.out_dir = out;
  cfg.finalize();
  return cfg;
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

}  // namespace

TEST(RunConfig, DefaultsFollowExperimentShapes) {
  const auto circle = default_run_config(TaskKind::CircleClassification);
  EXPECT_EQ(circle.net.width, 2);
  EXPECT_EQ(circle.net.depth, 8);
  EXPECT_EQ(circle.train.iterations, 100000);
  EXPECT_EQ(circle.net.input_dim, 2);
  const auto cubic = default_run_config(TaskKind::CubicRegression);
  EXPECT_EQ(cubic.net.width, 3);
  EXPECT_EQ(cubic.net.depth, 8);
  EXPECT_EQ(cubic.train.iterations, 200000);
  const auto tan = default_run_config(TaskKind::TanRegression);
  EXPECT_EQ(tan.net.depth, 12);
  const auto param = default_run_config(TaskKind::ParamEstimation);
  EXPECT_EQ(param.net.width, 3);
  EXPECT_EQ(param.net.depth, 16);
  EXPECT_EQ(param.train.iterations, 100000);
  EXPECT_EQ(param.net.step, 1.0);
}

TEST(RunConfig, JsonRoundTrip) {
  auto cfg = quick_config(TaskKind::TanRegression, "/tmp/x");
  cfg.train.scheme = Scheme::LeftPoint;
  const auto back = parse_run_config(to_json(cfg));
  EXPECT_EQ(config_hash(back), config_hash(cfg));
  EXPECT_EQ(to_json(back), to_json(cfg));
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
  nlohmann::json doc = {{"task", {{"name", "cubic-regression"}}}, {"trian", nlohmann::json::object()}};
  EXPECT_THROW(parse_run_config(doc), ConfigError);
  doc = {{"task", {{"name", "cubic-regression"}, {"count", "many"}}}};
  EXPECT_THROW(parse_run_config(doc), ConfigError);
  doc = {{"task", {{"name", "nope"}}}};
  EXPECT_THROW(parse_run_config(doc), ConfigError);
  doc = {{"task", {{"name", "cubic-regression"}}}, {"net", {{"width", 0}}}};
  EXPECT_THROW(parse_run_config(doc), ConfigError);
  doc = {{"task", {{"name", "cubic-regression"}}}, {"gradient_check", {{"depth", 5}}}};
  EXPECT_THROW(parse_run_config(doc), ConfigError);
}

TEST(RunConfig, OverridesAndHashScope) {
  auto cfg = quick_config(TaskKind::CubicRegression, "/tmp/a");
  const auto h = config_hash(cfg);
  apply_override(cfg, "workers", "8");
  apply_override(cfg, "out", "/tmp/b");
  EXPECT_EQ(config_hash(cfg), h);
  apply_override(cfg, "seed", "99");
  EXPECT_EQ(cfg.train.seed, 99u);
  EXPECT_NE(config_hash(cfg), h);
  apply_override(cfg, "scheme", "left");
  EXPECT_EQ(cfg.train.scheme, Scheme::LeftPoint);
  EXPECT_THROW(apply_override(cfg, "scheme", "middle"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "seed", "-1"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "workers", "0"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "colour", "red"), ConfigError);
}

TEST(Checkpoint, SaveLoadIsIdentity) {
  const auto dir = fresh_dir("ckpt");
  auto cfg = quick_config(TaskKind::CubicRegression, dir, 50);
  const auto data = cmd_generate_data(cfg);
  auto c = initial_checkpoint(cfg, data);
  c.controls.layers[0].weights(0, 0) = 0.1 + 0.2;
  c.controls.layers[1].bias[2] = -1e-300;
  c.iteration = 17;
  save_checkpoint(c, dir / "c.json");
  const auto back = load_checkpoint(dir / "c.json");
  EXPECT_TRUE(back == c);
  save_checkpoint(back, dir / "d.json");
  EXPECT_EQ(slurp(dir / "c.json"), slurp(dir / "d.json"));
}

TEST(Checkpoint, CorruptedFileIsDataError) {
  const auto dir = fresh_dir("corrupt");
  auto cfg = quick_config(TaskKind::CubicRegression, dir, 50);
  const auto c = initial_checkpoint(cfg, cmd_generate_data(cfg));
  auto text = checkpoint_to_string(c);
  write_text_file(dir / "cut.json", text.substr(0, text.size() / 2));
  EXPECT_THROW(load_checkpoint(dir / "cut.json"), DataError);
  auto wrong = text;
  wrong.replace(wrong.find("\"depth\": 8"), 10, "\"depth\": 9");
  write_text_file(dir / "shape.json", wrong);
  EXPECT_THROW(load_checkpoint(dir / "shape.json"), DataError);
  EXPECT_THROW(load_checkpoint(dir / "missing.json"), DataError);
}

TEST(Train, ResumeFromSnapshotIsBitExact) {
  const auto dir = fresh_dir("resume");
  auto cfg = quick_config(TaskKind::CubicRegression, dir / "full", 1000);
  cfg.train.snapshot_every = 500;
  const auto data = cmd_generate_data(cfg);
  const auto full = cmd_train(cfg, data);
  ASSERT_EQ(full.snapshots.size(), 1u);
  const auto snap = load_checkpoint(full.snapshots[0]);
  EXPECT_EQ(snap.iteration, 500);

  auto rcfg = cfg;
  rcfg.out_dir = dir / "resumed";
  const auto resumed = cmd_train(rcfg, data, snap);
  EXPECT_TRUE(resumed.checkpoint == full.checkpoint);
  EXPECT_EQ(slurp(full.checkpoint_path), slurp(resumed.checkpoint_path));
}

TEST(Train, ResumeRejectsForeignCheckpoint) {
  const auto dir = fresh_dir("foreign");
  auto cfg = quick_config(TaskKind::CubicRegression, dir, 100);
  const auto data = cmd_generate_data(cfg);
  auto c = initial_checkpoint(cfg, data);
  auto other = cfg;
  other.train.lr_scale = 0.123;
  EXPECT_THROW(cmd_train(other, data, c), ConfigError);
}

TEST(Train, DatasetMismatchIsConfigError) {
  const auto dir = fresh_dir("mismatch");
  auto cfg = quick_config(TaskKind::CubicRegression, dir, 10);
  auto circle = quick_config(TaskKind::CircleClassification, dir, 10);
  EXPECT_THROW(cmd_train(cfg, cmd_generate_data(circle)), ConfigError);
}

TEST(Train, DivergenceKeepsPartialLog) {
  const auto dir = fresh_dir("diverge");
  auto cfg = quick_config(TaskKind::CubicRegression, dir, 100);
  cfg.train.lr_scale = 1e300;
  cfg.train.log_every = 1;
  const auto data = cmd_generate_data(cfg);
  EXPECT_THROW(cmd_train(cfg, data), PropagationError);
  const auto log = slurp(dir / "train_log.csv");
  EXPECT_EQ(log.rfind("iteration,sample_index,loss,grad_norm,learning_rate\n", 0), 0u);
  EXPECT_FALSE(fs::exists(dir / "checkpoint.json"));
}

TEST(Pipeline, RegressionReportShape) {
  const auto dir = fresh_dir("cubic");
  auto cfg = quick_config(TaskKind::CubicRegression, dir, 500);
  const auto out = cmd_train(cfg, cmd_generate_data(cfg));
  const auto m = cmd_evaluate(cfg, out.checkpoint, dir / "eval");
  EXPECT_TRUE(m["regression"].contains("rmse"));
  EXPECT_TRUE(m["regression"].contains("coverage"));
  std::ifstream band(dir / "eval" / "band.csv");
  std::string line;
  int rows = 0;
  std::getline(band, line);
  EXPECT_EQ(line, "x,mean,lower,upper,true_mean,true_lower,true_upper");
  while (std::getline(band, line)) ++rows;
  EXPECT_EQ(rows, 101);
  EXPECT_TRUE(fs::exists(dir / "eval" / "metrics.json"));
}

TEST(Pipeline, ClassificationReportShape) {
  const auto dir = fresh_dir("circle");
  auto cfg = quick_config(TaskKind::CircleClassification, dir, 300);
  const auto out = cmd_train(cfg, cmd_generate_data(cfg));
  const auto m = cmd_evaluate(cfg, out.checkpoint, dir / "eval");
  EXPECT_TRUE(m["classification"].contains("accuracy"));
  EXPECT_TRUE(m["classification"].contains("misclassified_in_band_fraction"));
  EXPECT_TRUE(fs::exists(dir / "eval" / "surface.csv"));
}

TEST(Pipeline, ParamReportShape) {
  const auto dir = fresh_dir("param");
  auto cfg = quick_config(TaskKind::ParamEstimation, dir, 300);
  const auto out = cmd_train(cfg, cmd_generate_data(cfg));
  const auto m = cmd_evaluate(cfg, out.checkpoint, dir / "eval");
  ASSERT_EQ(m["param_estimation"]["estimates"].size(), 3u);
  EXPECT_EQ(m["param_estimation"]["estimates"][1]["alpha_true"], 4.0);
  EXPECT_EQ(m["param_estimation"]["estimates"][1]["pooled_samples"], 2000u);
}

TEST(Pipeline, TaskMismatchOnEvaluate) {
  const auto dir = fresh_dir("evalmismatch");
  auto cfg = quick_config(TaskKind::CubicRegression, dir, 10);
  const auto c = initial_checkpoint(cfg, cmd_generate_data(cfg));
  auto tan = quick_config(TaskKind::TanRegression, dir, 10);
  EXPECT_THROW(cmd_evaluate(tan, c, dir), ConfigError);
}

TEST(Pipeline, ByteIdenticalAcrossRunsAndWorkerCounts) {
  std::vector<std::string> files = {"checkpoint.json", "train_log.csv", "eval/metrics.json", "eval/band.csv"};
  std::vector<std::vector<std::string>> contents;
  for (int run = 0; run < 3; ++run) {
    const auto dir = fresh_dir("determinism" + std::to_string(run));
    auto cfg = quick_config(TaskKind::TanRegression, dir, 800);
    cfg.workers = run == 2 ? 4 : 1;
    const auto data = cmd_generate_data(cfg);
    write_dataset(data, dir / "dataset.json");
    const auto out = cmd_train(cfg, read_dataset(dir / "dataset.json"));
    cmd_evaluate(cfg, load_checkpoint(out.checkpoint_path), dir / "eval");
    std::vector<std::string> c;
    for (const auto& f : files) c.push_back(slurp(dir / f));
    contents.push_back(c);
  }
  for (std::size_t f = 0; f < files.size(); ++f) {
    EXPECT_EQ(contents[0][f], contents[1][f]) << files[f];
    EXPECT_EQ(contents[0][f], contents[2][f]) << files[f];
  }
}

TEST(GradientCheck, DefaultInstancePasses) {
  auto cfg = default_run_config(TaskKind::CubicRegression);
  cfg.gradient_check.mc_samples = 2000;
  const auto r = cmd_gradient_check(cfg);
  EXPECT_TRUE(r.ok()) << r.to_text(cfg);
  ASSERT_EQ(r.blocks.size(), 3u);
  EXPECT_EQ(r.blocks[0].block, "gradW");
  EXPECT_EQ(r.blocks[0].pathwise_entries, 12u);
}

TEST(GradientCheck, SignFlipIsCaughtInWeights) {
  auto cfg = default_run_config(TaskKind::CubicRegression);
  cfg.gradient_check.mc_samples = 500;
  cfg.gradient_check.inject_fault = "gradW-sign";
  const auto r = cmd_gradient_check(cfg);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.failing_blocks(), std::vector<std::string>{"gradW"});
}

TEST(GradientCheck, ZeroSigmaBlockPassesWithZeros) {
  auto cfg = default_run_config(TaskKind::CubicRegression);
  cfg.gradient_check.mc_samples = 500;
  cfg.gradient_check.zero_sigma = true;
  const auto r = cmd_gradient_check(cfg);
  EXPECT_TRUE(r.ok()) << r.to_text(cfg);
  EXPECT_EQ(r.blocks[2].pathwise_max_rel, 0.0);
  EXPECT_EQ(r.blocks[2].mc_max_rel, 0.0);
}

TEST(GradientCheck, RightPointSchemeIsNotExact) {
  auto cfg = default_run_config(TaskKind::CubicRegression);
  cfg.gradient_check.mc_samples = 200;
  cfg.gradient_check.scheme = Scheme::RightPoint;
  EXPECT_FALSE(cmd_gradient_check(cfg).ok());
}

TEST(GradientCheck, InstanceSizeIsBounded) {
  nlohmann::json doc = {{"task", {{"name", "cubic-regression"}}}, {"gradient_check", {{"width", 5}}}};
  EXPECT_THROW(parse_run_config(doc), ConfigError);
}
