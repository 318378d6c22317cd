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

#include <exception>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mblshadow/acceptance.hpp"
#include "mblshadow/config.hpp"
#include "mblshadow/io.hpp"

namespace mbls {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Output file names inside the configured output directory.
namespace artifacts {
inline constexpr std::string_view kShadowNorm = "shadow_norm.csv";
inline constexpr std::string_view kFit = "fit.json";
inline constexpr std::string_view kPheno = "pheno.csv";
inline constexpr std::string_view kSnapshots = "snapshots.ndjson";
inline constexpr std::string_view kEstimates = "estimates.csv";
inline constexpr std::string_view kGolden = "golden.json";
inline constexpr std::string_view kVerify = "verify.txt";
}  // namespace artifacts

struct DispatchResult {
  int exit_code = kExitOk;
  std::vector<std::string> artifacts;
  std::vector<std::string> warnings;
  std::vector<acceptance::CriterionResult> criteria;
  std::string error;
};

using LogSink = std::function<void(std::string_view)>;

/// Runs the configured command and writes its artifacts. Errors are mapped
/// onto exit codes instead of being thrown.
DispatchResult dispatch(const RunConfig& config, const LogSink& log = {});

/// Configuration and argument errors map to kExitValidation, all others to
/// kExitRuntime.
int exit_code_for(const std::exception& e);

/// Lambda for every observable: the doubled-space overlap at
/// config.evolution_time, or the dense oracle when lambda_source = oracle.
std::vector<double> observable_lambdas(const RunConfig& config,
                                       const std::vector<PauliString>& observables);

/// Fits of every checkpoint of a table over the configured k range.
std::vector<io::FitRecord> fit_table(const ShadowNormTable& table, int k_min, int k_max);

}  // namespace mbls
