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

// snn: command-line harness over the C API.
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "snn_smp.h"

namespace {

struct Failure {
  int code;
};

void check(snn_status s) {
  if (s == SNN_OK) return;
  std::fprintf(stderr, "%s\n", snn_last_error());
  throw Failure{static_cast<int>(s)};
}

struct ConfigDeleter {
  void operator()(snn_config* c) const { snn_config_free(c); }
};
struct DatasetDeleter {
  void operator()(snn_dataset* d) const { snn_dataset_free(d); }
};
struct CheckpointDeleter {
  void operator()(snn_checkpoint* c) const { snn_checkpoint_free(c); }
};
using ConfigPtr = std::unique_ptr<snn_config, ConfigDeleter>;
using DatasetPtr = std::unique_ptr<snn_dataset, DatasetDeleter>;
using CheckpointPtr = std::unique_ptr<snn_checkpoint, CheckpointDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  snn_string_free(s);
  return out;
}

std::string config_get(const snn_config* cfg, const char* key) {
  char* v = nullptr;
  check(snn_config_get(cfg, key, &v));
  return take(v);
}

struct Options {
  std::string config;
  std::string task;
  std::optional<std::string> seed;
  std::optional<std::string> out;
  std::optional<std::string> workers;
  std::optional<std::string> scheme;
  std::optional<std::string> dataset;
  std::optional<std::string> checkpoint;
  std::optional<std::string> resume;
  std::optional<std::string> iterations;
  std::optional<std::string> inject_fault;
  bool quiet = false;
};

void usage_error(const std::string& msg) {
  std::fprintf(stderr, "usage-error: %s\n", msg.c_str());
  throw Failure{2};
}

// Builds the run config; `seed_key` selects which seed --seed overrides.
ConfigPtr load_config(const Options& o, const char* seed_key, const char* scheme_key) {
  snn_config* raw = nullptr;
  if (!o.config.empty()) {
    if (!o.task.empty()) usage_error("--task and --config are mutually exclusive");
    check(snn_config_load(o.config.c_str(), &raw));
  } else if (!o.task.empty()) {
    check(snn_config_default(o.task.c_str(), &raw));
  } else {
    usage_error("one of --config or --task is required");
  }
  ConfigPtr cfg(raw);
  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) check(snn_config_set(cfg.get(), key, v->c_str()));
  };
  set(seed_key, o.seed);
  set("out", o.out);
  set("workers", o.workers);
  set(scheme_key, o.scheme);
  set("dataset", o.dataset);
  set("checkpoint", o.checkpoint);
  set("resume", o.resume);
  set("iterations", o.iterations);
  set("inject-fault", o.inject_fault);
  return cfg;
}

std::string dataset_path(const snn_config* cfg) {
  auto p = config_get(cfg, "dataset");
  if (p.empty()) p = (std::filesystem::path(config_get(cfg, "out")) / "dataset.json").string();
  return p;
}

int cmd_generate(const Options& o) {
  auto cfg = load_config(o, "data-seed", "scheme");
  snn_dataset* raw = nullptr;
  check(snn_generate_data(cfg.get(), &raw));
  DatasetPtr data(raw);
  const auto path = dataset_path(cfg.get());
  check(snn_dataset_save(data.get(), path.c_str()));
  snn_dataset_info info{};
  check(snn_dataset_get_info(data.get(), &info));
  std::printf("dataset=%s task=%s count=%llu input_dim=%d label_dim=%d seed=%llu\n", path.c_str(), info.task,
              static_cast<unsigned long long>(info.count), info.input_dim, info.label_dim,
              static_cast<unsigned long long>(info.seed));
  return 0;
}

void print_progress(int64_t k, uint64_t idx, double loss, double gnorm, double lr, void*) {
  std::fprintf(stderr, "iteration=%lld sample=%llu loss=%.6g grad_norm=%.6g lr=%.6g\n", static_cast<long long>(k),
               static_cast<unsigned long long>(idx), loss, gnorm, lr);
}

int cmd_train(const Options& o) {
  auto cfg = load_config(o, "seed", "scheme");
  snn_dataset* rawd = nullptr;
  check(snn_dataset_load(dataset_path(cfg.get()).c_str(), &rawd));
  DatasetPtr data(rawd);
  CheckpointPtr resume;
  const auto resume_path = config_get(cfg.get(), "resume");
  if (!resume_path.empty()) {
    snn_checkpoint* r = nullptr;
    check(snn_checkpoint_load(resume_path.c_str(), &r));
    resume.reset(r);
  }
  snn_checkpoint* rawc = nullptr;
  check(snn_train(cfg.get(), data.get(), resume.get(), o.quiet ? nullptr : print_progress, nullptr, &rawc));
  CheckpointPtr ckpt(rawc);
  snn_checkpoint_info info{};
  check(snn_checkpoint_get_info(ckpt.get(), &info));
  const auto out = std::filesystem::path(config_get(cfg.get(), "out"));
  std::printf("checkpoint=%s log=%s iterations=%lld config_hash=%s\n", config_get(cfg.get(), "checkpoint").c_str(),
              (out / "train_log.csv").string().c_str(), static_cast<long long>(info.iteration), info.config_hash);
  return 0;
}

int cmd_evaluate(const Options& o) {
  auto cfg = load_config(o, "eval-seed", "scheme");
  snn_checkpoint* rawc = nullptr;
  check(snn_checkpoint_load(config_get(cfg.get(), "checkpoint").c_str(), &rawc));
  CheckpointPtr ckpt(rawc);
  char* metrics = nullptr;
  check(snn_evaluate(cfg.get(), ckpt.get(), nullptr, &metrics));
  std::printf("%s\n", take(metrics).c_str());
  return 0;
}

int cmd_gradient_check(const Options& o) {
  auto cfg = load_config(o, "seed", "check-scheme");
  char* report = nullptr;
  const auto status = snn_gradient_check(cfg.get(), &report);
  std::printf("%s", take(report).c_str());
  check(status);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic neural network training by the stochastic maximum principle", "snn"};
  app.set_version_flag("--version", std::string(snn_version()));
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run configuration JSON");
    sub->add_option("--task", o.task, "Use the built-in defaults of a task instead of --config");
    sub->add_option("--seed", o.seed, "Seed override (data, training, evaluation or check seed per command)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--workers", o.workers, "Worker threads; never changes results");
    sub->add_option("--scheme", o.scheme, "Backward scheme")->check(CLI::IsMember({"right", "left"}));
  };

  auto* gen = app.add_subcommand("generate-data", "Generate a task dataset");
  add_common(gen);
  gen->add_option("--dataset", o.dataset, "Dataset file to write (default <out>/dataset.json)");

  auto* train = app.add_subcommand("train", "Train by single-sample SGD");
  add_common(train);
  train->add_option("--dataset", o.dataset, "Dataset file (default <out>/dataset.json)");
  train->add_option("--checkpoint", o.checkpoint, "Final checkpoint path (default <out>/checkpoint.json)");
  train->add_option("--resume", o.resume, "Resume from a checkpoint or snapshot");
  train->add_option("--iterations", o.iterations, "Override the iteration count");
  train->add_flag("--quiet", o.quiet, "Suppress progress lines");

  auto* eval = app.add_subcommand("evaluate", "Evaluate a checkpoint and write reports");
  add_common(eval);
  eval->add_option("--checkpoint", o.checkpoint, "Checkpoint to evaluate (default <out>/checkpoint.json)");

  auto* grad = app.add_subcommand("gradient-check", "Verify gradients against finite differences");
  add_common(grad);
  grad->add_option("--inject-fault", o.inject_fault, "Test hook")->check(CLI::IsMember({"gradW-sign"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    std::fprintf(stderr, "usage-error: %s\n", msg.c_str());
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (train->parsed()) return cmd_train(o);
    if (eval->parsed()) return cmd_evaluate(o);
    return cmd_gradient_check(o);
  } catch (const Failure& f) {
    return f.code;
  }
}
