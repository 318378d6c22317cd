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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mblshadow/error.hpp"
#include "mblshadow/hamiltonians.hpp"
#include "mblshadow/mps.hpp"
#include "mblshadow/pauli.hpp"
#include "mblshadow/pheno.hpp"
#include "mblshadow/pipeline.hpp"
#include "mblshadow/shadow_norm.hpp"

namespace mbls {

enum class Command {
  kShadowNorm,
  kFit,
  kPheno,
  kSample,
  kEstimate,
  kOracle,
  kVerify,
};

enum class ModelKind {
  kXxz,
  kDqim,
};

enum class LambdaSource {
  kTebd,
  kOracle,
};

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

/// Fully resolved run description. Defaults are documented in the README.
struct RunConfig {
  Command command = Command::kShadowNorm;
  ModelKind model = ModelKind::kXxz;

  int n = 8;
  double j = 1.0;
  double delta = 1.0;
  double w = 5.0;
  /// Falls back to `seed` when not given explicitly.
  std::optional<std::uint64_t> disorder_seed;
  double delta_j = 0.0;
  std::vector<double> dqim_fields;

  TruncationPolicy policy{64, 1e-12};
  double tau = 0.1;
  std::vector<double> times = {0.0};
  int k_max = 4;
  RegionPlacement placement = RegionPlacement::kAllStarts;
  int fit_k_min = 1;
  /// 0 selects k_max.
  int fit_k_max = 0;

  double xi = 1.0;
  double j0 = 1.0;
  std::vector<double> pheno_times = {10.0};
  std::vector<int> pheno_k = {2};
  int mc_draws = 10000;
  pheno::LogBase log_base = pheno::LogBase::kNatural;
  bool pheno_force = false;

  int samples = 1000;
  InitialState state = InitialState::kGhz;
  double evolution_time = 0.0;
  std::string observables_text = "centered_z:1-4";
  LambdaSource lambda_source = LambdaSource::kTebd;

  std::string snapshots_file;
  std::string input_csv;

  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 1;
  std::vector<int> criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  std::uint64_t effective_disorder_seed() const { return disorder_seed.value_or(seed); }
  XxzParams xxz() const;
  DqimParams dqim() const;
  /// Single-copy bond terms of the configured model.
  BondSchedule schedule() const;
  std::vector<PauliString> observables() const;
  int effective_fit_k_max() const { return fit_k_max > 0 ? fit_k_max : k_max; }

  /// Checks cross-field constraints; throws ConfigError listing all of them.
  void validate() const;
};

struct ConfigIssue {
  /// 0 when the issue is not tied to a line.
  int line = 0;
  std::string key;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys, duplicate
/// keys, malformed values and constraint violations are all reported in one
/// ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Every effective setting as (key, value) in a fixed order; parse_config of
/// the joined lines reproduces the configuration.
std::vector<std::pair<std::string, std::string>> canonical_entries(const RunConfig& config);
std::string to_config_text(const RunConfig& config);

/// Observable list syntax: items separated by ';', each either a Pauli string
/// ("Z3 X4") or "centered_z:a-b" for centered Z strings of length a..b.
std::vector<PauliString> parse_observables(std::string_view text, int n);

/// Comma-separated list helpers shared by the config and file readers.
std::vector<double> parse_double_list(std::string_view text);
std::string format_double(double x);

}  // namespace mbls
