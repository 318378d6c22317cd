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

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mblshadow/mblshadow.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

void log_line(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int config_failure(const std::string& what) {
  std::cerr << "error: " << what << ": " << mbls_last_error() << "\n";
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shadow norms and randomized-measurement snapshots for disordered spin chains"};
  app.set_version_flag("--version", mbls_version());

  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::vector<std::string> overrides;

  app.add_option("command", command,
                 "shadow-norm, fit, pheno, sample, estimate, oracle or verify; overrides the "
                 "config's command");
  app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--set", overrides, "Extra key=value overrides, applied in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  mbls_config* config = nullptr;
  const mbls_status loaded = config_path.empty() ? mbls_config_default(&config)
                                                 : mbls_config_load(config_path.c_str(), &config);
  if (loaded != MBLS_OK) return config_failure(config_path.empty() ? "defaults" : config_path);

  std::vector<std::pair<std::string, std::string>> settings;
  if (!command.empty()) settings.emplace_back("command", command);
  if (seed) settings.emplace_back("seed", std::to_string(*seed));
  if (out_dir) settings.emplace_back("out_dir", *out_dir);
  if (threads) settings.emplace_back("threads", std::to_string(*threads));
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got " << item << "\n";
      mbls_config_free(config);
      return kExitValidation;
    }
    settings.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  for (const auto& [key, value] : settings) {
    if (mbls_config_set(config, key.c_str(), value.c_str()) != MBLS_OK) {
      mbls_config_free(config);
      return config_failure(key);
    }
  }

  mbls_result* result = nullptr;
  const mbls_status ran = mbls_run(config, log_line, nullptr, &result);
  mbls_config_free(config);
  if (ran != MBLS_OK) {
    std::cerr << "error: " << mbls_last_error() << "\n";
    return kExitRuntime;
  }

  for (size_t i = 0; i < mbls_result_criterion_count(result); ++i) {
    std::cout << mbls_result_criterion_line(result, i) << "\n";
  }
  for (size_t i = 0; i < mbls_result_artifact_count(result); ++i) {
    std::cerr << "wrote " << mbls_result_artifact(result, i) << "\n";
  }
  const int code = mbls_result_exit_code(result);
  if (code != 0) std::cerr << "error: " << mbls_result_error(result) << "\n";
  mbls_result_free(result);
  return code;
}
