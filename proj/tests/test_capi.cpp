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

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "snn_smp.h"

namespace fs = std::filesystem;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  snn_string_free(s);
  return out;
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("snn_capi_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

snn_config* small_config(const char* task, const fs::path& out) {
  snn_config* cfg = nullptr;
  EXPECT_EQ(snn_config_default(task, &cfg), SNN_OK);
  EXPECT_EQ(snn_config_set(cfg, "count", "200"), SNN_OK);
  EXPECT_EQ(snn_config_set(cfg, "iterations", "200"), SNN_OK);
  EXPECT_EQ(snn_config_set(cfg, "out", out.c_str()), SNN_OK);
  return cfg;
}

}  // namespace

TEST(CApi, StatusNames) {
  EXPECT_STREQ(snn_status_name(SNN_OK), "ok");
  EXPECT_STREQ(snn_status_name(SNN_CONFIG_ERROR), "config-error");
  EXPECT_STREQ(snn_status_name(SNN_DATA_ERROR), "data-error");
  EXPECT_NE(std::string(snn_version()), "");
}

TEST(CApi, ConfigErrorsCarryClassPrefix) {
  snn_config* cfg = nullptr;
  EXPECT_EQ(snn_config_default("spiral", &cfg), SNN_CONFIG_ERROR);
  EXPECT_EQ(cfg, nullptr);
  EXPECT_EQ(std::string(snn_last_error()).rfind("config-error: ", 0), 0u);
  EXPECT_EQ(snn_config_from_json("{\"task\":", &cfg), SNN_CONFIG_ERROR);
  EXPECT_EQ(snn_config_load("/nonexistent/cfg.json", &cfg), SNN_CONFIG_ERROR);
  ASSERT_EQ(snn_config_default("cubic-regression", &cfg), SNN_OK);
  EXPECT_EQ(snn_config_set(cfg, "scheme", "sideways"), SNN_CONFIG_ERROR);
  EXPECT_EQ(snn_config_set(nullptr, "scheme", "left"), SNN_CONFIG_ERROR);
  EXPECT_EQ(std::string(snn_last_error()).find('\n'), std::string::npos);
  snn_config_free(cfg);
}

TEST(CApi, ConfigJsonRoundTrip) {
  snn_config* a = nullptr;
  ASSERT_EQ(snn_config_default("tan-regression", &a), SNN_OK);
  ASSERT_EQ(snn_config_set(a, "seed", "42"), SNN_OK);
  char* text = nullptr;
  ASSERT_EQ(snn_config_to_json(a, &text), SNN_OK);
  const auto json = take(text);
  snn_config* b = nullptr;
  ASSERT_EQ(snn_config_from_json(json.c_str(), &b), SNN_OK);
  char* ha = nullptr;
  char* hb = nullptr;
  ASSERT_EQ(snn_config_get(a, "hash", &ha), SNN_OK);
  ASSERT_EQ(snn_config_get(b, "hash", &hb), SNN_OK);
  EXPECT_EQ(take(ha), take(hb));
  char* task = nullptr;
  ASSERT_EQ(snn_config_get(b, "task", &task), SNN_OK);
  EXPECT_EQ(take(task), "tan-regression");
  snn_config_free(a);
  snn_config_free(b);
}

TEST(CApi, DatasetLifecycle) {
  const auto dir = fresh_dir("data");
  auto* cfg = small_config("circle-classification", dir);
  snn_dataset* data = nullptr;
  ASSERT_EQ(snn_generate_data(cfg, &data), SNN_OK);
  snn_dataset_info info{};
  ASSERT_EQ(snn_dataset_get_info(data, &info), SNN_OK);
  EXPECT_EQ(info.count, 200u);
  EXPECT_EQ(info.input_dim, 2);
  EXPECT_EQ(info.label_dim, 1);
  EXPECT_STREQ(info.task, "circle-classification");
  const auto path = (dir / "d.json").string();
  ASSERT_EQ(snn_dataset_save(data, path.c_str()), SNN_OK);
  snn_dataset* back = nullptr;
  ASSERT_EQ(snn_dataset_load(path.c_str(), &back), SNN_OK);
  snn_dataset_info info2{};
  ASSERT_EQ(snn_dataset_get_info(back, &info2), SNN_OK);
  EXPECT_EQ(info2.count, info.count);
  EXPECT_EQ(snn_dataset_load((dir / "missing.json").c_str(), &back), SNN_DATA_ERROR);
  EXPECT_EQ(std::string(snn_last_error()).rfind("data-error: ", 0), 0u);
  snn_dataset_free(data);
  snn_dataset_free(back);
  snn_config_free(cfg);
}

namespace {
void count_progress(int64_t, uint64_t, double, double, double, void* user) { ++*static_cast<int*>(user); }
}  // namespace

TEST(CApi, TrainPredictEvaluate) {
  const auto dir = fresh_dir("train");
  auto* cfg = small_config("cubic-regression", dir);
  snn_dataset* data = nullptr;
  ASSERT_EQ(snn_generate_data(cfg, &data), SNN_OK);
  int calls = 0;
  snn_checkpoint* ckpt = nullptr;
  ASSERT_EQ(snn_train(cfg, data, nullptr, count_progress, &calls, &ckpt), SNN_OK) << snn_last_error();
  EXPECT_GT(calls, 0);
  snn_checkpoint_info info{};
  ASSERT_EQ(snn_checkpoint_get_info(ckpt, &info), SNN_OK);
  EXPECT_EQ(info.iteration, 200);
  EXPECT_EQ(info.width, 3);
  EXPECT_EQ(info.depth, 8);
  EXPECT_TRUE(fs::exists(dir / "checkpoint.json"));

  const double x = 0.5;
  std::vector<double> out(16);
  ASSERT_EQ(snn_predict(ckpt, &x, 1, 16, 9, out.data(), out.size()), SNN_OK);
  std::vector<double> again(16);
  ASSERT_EQ(snn_predict(ckpt, &x, 1, 16, 9, again.data(), again.size()), SNN_OK);
  EXPECT_EQ(out, again);
  EXPECT_EQ(snn_predict(ckpt, &x, 1, 16, 9, out.data(), 3), SNN_CONFIG_ERROR);
  EXPECT_EQ(snn_predict(ckpt, &x, 2, 16, 9, out.data(), out.size()), SNN_CONFIG_ERROR);

  char* metrics = nullptr;
  ASSERT_EQ(snn_evaluate(cfg, ckpt, (dir / "eval").c_str(), &metrics), SNN_OK) << snn_last_error();
  EXPECT_NE(take(metrics).find("\"rmse\""), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "eval" / "band.csv"));

  snn_checkpoint* loaded = nullptr;
  ASSERT_EQ(snn_checkpoint_load((dir / "checkpoint.json").c_str(), &loaded), SNN_OK);
  snn_checkpoint_info info2{};
  ASSERT_EQ(snn_checkpoint_get_info(loaded, &info2), SNN_OK);
  EXPECT_STREQ(info2.config_hash, info.config_hash);

  snn_checkpoint_free(ckpt);
  snn_checkpoint_free(loaded);
  snn_dataset_free(data);
  snn_config_free(cfg);
}

TEST(CApi, GradientCheckStatuses) {
  snn_config* cfg = nullptr;
  ASSERT_EQ(snn_config_default("cubic-regression", &cfg), SNN_OK);
  ASSERT_EQ(snn_config_from_json(R"({"task":{"name":"cubic-regression"},"gradient_check":{"mc_samples":300}})", &cfg),
            SNN_OK);
  char* report = nullptr;
  EXPECT_EQ(snn_gradient_check(cfg, &report), SNN_OK) << snn_last_error();
  EXPECT_NE(take(report).find("gradSigma"), std::string::npos);
  ASSERT_EQ(snn_config_set(cfg, "inject-fault", "gradW-sign"), SNN_OK);
  EXPECT_EQ(snn_gradient_check(cfg, &report), SNN_VERIFICATION_FAILED);
  take(report);
  const std::string err = snn_last_error();
  EXPECT_EQ(err.rfind("verification-failed: ", 0), 0u);
  EXPECT_NE(err.find("gradW"), std::string::npos);
  snn_config_free(cfg);
}
