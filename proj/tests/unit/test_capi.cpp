// Copyright 2026 The mblshadow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "mblshadow/mblshadow.h"

namespace {

namespace fs = std::filesystem;

std::string text_of(const mbls_config* c) {
  size_t needed = 0;
  EXPECT_EQ(mbls_config_to_text(c, nullptr, 0, &needed), MBLS_ERR_BUFFER_TOO_SMALL);
  std::string out(needed, '\0');
  EXPECT_EQ(mbls_config_to_text(c, out.data(), out.size(), &needed), MBLS_OK);
  out.resize(needed - 1);
  return out;
}

TEST(CApi, VersionAndConstants) {
  EXPECT_NE(std::string(mbls_version()), "");
  EXPECT_EQ(mbls_clifford_count(), 24);
  EXPECT_EQ(mbls_criterion_count(), 9);
}

TEST(CApi, NullPointers) {
  EXPECT_EQ(mbls_config_default(nullptr), MBLS_ERR_NULL_POINTER);
  EXPECT_EQ(mbls_config_parse(nullptr, nullptr), MBLS_ERR_NULL_POINTER);
  EXPECT_EQ(mbls_run(nullptr, nullptr, nullptr, nullptr), MBLS_ERR_NULL_POINTER);
  EXPECT_EQ(mbls_result_exit_code(nullptr), 2);
  mbls_config_free(nullptr);
  mbls_result_free(nullptr);
  mbls_table_free(nullptr);
}

TEST(CApi, ParseErrorListsViolations) {
  mbls_config* c = nullptr;
  EXPECT_EQ(mbls_config_parse("n = 1\nw = -2\n", &c), MBLS_ERR_CONFIG);
  EXPECT_EQ(c, nullptr);
  const std::string msg = mbls_last_error();
  EXPECT_NE(msg.find("n"), std::string::npos);
  EXPECT_NE(msg.find("w"), std::string::npos);
}

TEST(CApi, SetRevalidatesAndKeepsStateOnFailure) {
  mbls_config* c = nullptr;
  ASSERT_EQ(mbls_config_parse("n = 6\nseed = 3\n", &c), MBLS_OK);
  const std::string before = text_of(c);
  EXPECT_EQ(mbls_config_set(c, "tau", "-1"), MBLS_ERR_CONFIG);
  EXPECT_EQ(text_of(c), before);
  EXPECT_EQ(mbls_config_set(c, "nonsense", "1"), MBLS_ERR_CONFIG);
  ASSERT_EQ(mbls_config_set(c, "w", "2.5"), MBLS_OK);
  EXPECT_NE(text_of(c).find("w = 2.5"), std::string::npos);
  ASSERT_EQ(mbls_config_set(c, "seed", "9"), MBLS_OK);
  EXPECT_NE(text_of(c).find("disorder_seed = 9"), std::string::npos);

  mbls_config* back = nullptr;
  ASSERT_EQ(mbls_config_parse(text_of(c).c_str(), &back), MBLS_OK);
  EXPECT_EQ(text_of(back), text_of(c));
  mbls_config_free(back);
  mbls_config_free(c);
}

TEST(CApi, ShadowNormTable) {
  mbls_config* c = nullptr;
  ASSERT_EQ(mbls_config_parse("n = 6\nw = 1\ntau = 0.1\ntimes = 0\nk_max = 3\nchi_max = 8\n", &c),
            MBLS_OK);
  mbls_table* t = nullptr;
  ASSERT_EQ(mbls_shadow_norm(c, &t), MBLS_OK) << mbls_last_error();
  ASSERT_GT(mbls_table_size(t), 0u);
  for (size_t i = 0; i < mbls_table_size(t); ++i) {
    int k = 0;
    int start = 0;
    double time = 0.0;
    double lambda = 0.0;
    ASSERT_EQ(mbls_table_entry(t, i, &k, &start, &time, &lambda), MBLS_OK);
    EXPECT_NEAR(lambda, std::pow(3.0, -k), 1e-12);
  }
  int k = 0;
  EXPECT_EQ(mbls_table_entry(t, mbls_table_size(t), &k, &k, nullptr, nullptr),
            MBLS_ERR_INVALID_ARGUMENT);
  EXPECT_LE(mbls_table_max_discarded_weight(t), 1e-12);
  mbls_table_free(t);
  mbls_config_free(c);
}

TEST(CApi, RunWritesArtifactsAndMapsExitCodes) {
  const fs::path dir = fs::temp_directory_path() / "mbls_capi_run";
  fs::remove_all(dir);
  mbls_config* c = nullptr;
  ASSERT_EQ(mbls_config_default(&c), MBLS_OK);
  ASSERT_EQ(mbls_config_set(c, "out_dir", dir.c_str()), MBLS_OK);
  ASSERT_EQ(mbls_config_set(c, "command", "pheno"), MBLS_OK);
  ASSERT_EQ(mbls_config_set(c, "mc_draws", "100"), MBLS_OK);
  std::vector<std::string> lines;
  mbls_result* r = nullptr;
  ASSERT_EQ(mbls_run(
                c,
                [](const char* line, void* user) {
                  static_cast<std::vector<std::string>*>(user)->emplace_back(line);
                },
                &lines, &r),
            MBLS_OK);
  EXPECT_EQ(mbls_result_exit_code(r), 0) << mbls_result_error(r);
  ASSERT_EQ(mbls_result_artifact_count(r), 1u);
  EXPECT_TRUE(fs::exists(mbls_result_artifact(r, 0)));
  EXPECT_EQ(mbls_result_artifact(r, 1), nullptr);
  mbls_result_free(r);

  ASSERT_EQ(mbls_config_set(c, "command", "fit"), MBLS_OK);
  ASSERT_EQ(mbls_run(c, nullptr, nullptr, &r), MBLS_OK);
  EXPECT_EQ(mbls_result_exit_code(r), 1);
  EXPECT_NE(std::string(mbls_result_error(r)), "");
  mbls_result_free(r);

  ASSERT_EQ(mbls_config_set(c, "command", "verify"), MBLS_OK);
  ASSERT_EQ(mbls_config_set(c, "criteria", "4"), MBLS_OK);
  ASSERT_EQ(mbls_run(c, nullptr, nullptr, &r), MBLS_OK);
  ASSERT_EQ(mbls_result_criterion_count(r), 1u);
  int id = 0;
  int passed = 0;
  double seconds = -1.0;
  ASSERT_EQ(mbls_result_criterion(r, 0, &id, &passed, &seconds), MBLS_OK);
  EXPECT_EQ(id, 4);
  EXPECT_EQ(mbls_result_exit_code(r), passed ? 0 : 2);
  EXPECT_GE(seconds, 0.0);
  EXPECT_NE(std::string(mbls_result_criterion_line(r, 0)).find("[4]"), std::string::npos);
  mbls_result_free(r);
  mbls_config_free(c);
  fs::remove_all(dir);
}

TEST(CApi, MathHelpers) {
  const int k[] = {1, 2, 3, 4};
  const double norms[] = {3.0, 9.0, 27.0, 81.0};
  double c0 = 0.0;
  double alpha = 0.0;
  double se = -1.0;
  ASSERT_EQ(mbls_fit_alpha(k, norms, 4, 1, 4, &c0, &alpha, &se), MBLS_OK);
  EXPECT_NEAR(alpha, 3.0, 1e-12);
  EXPECT_NEAR(c0, 1.0, 1e-12);

  double v = 0.0;
  ASSERT_EQ(mbls_lambda_statement1(2, 1.0, 1.0, std::exp(1.0), 1, &v), MBLS_OK);
  EXPECT_NEAR(v, 64.0 / 729.0, 1e-15);
  EXPECT_EQ(mbls_lambda_statement1(2, 1.0, 1.0, 2.0, 0, &v), MBLS_ERR_DOMAIN);
  ASSERT_EQ(mbls_lambda_pair_avg(8, 1.0, 1.0, 0.0, &v), MBLS_OK);
  EXPECT_NEAR(v, 1.0 / 9.0, 1e-15);
  EXPECT_EQ(mbls_lambda_pair_avg(8, -1.0, 1.0, 0.0, &v), MBLS_ERR_INVALID_ARGUMENT);
}

}  // namespace
