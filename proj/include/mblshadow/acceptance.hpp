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
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mbls::acceptance {

inline constexpr int kCriterionCount = 9;

/// Pinned parameters and tolerances of the acceptance suite.
namespace pinned {
inline constexpr std::uint64_t kSeed = 1;
inline constexpr double kBaselineTol = 1e-6;
inline constexpr double kOracleRelTol = 0.02;
inline constexpr double kAlphaMinLow = 2.0;
inline constexpr double kAlphaMinHigh = 2.4;
inline constexpr double kAlphaLongTime = 2.25;
inline constexpr double kAlphaLongTimeTol = 0.3;
inline constexpr double kConsistencyRelTol = 1e-14;
inline constexpr int kPhenoDraws = 100000;
inline constexpr double kMcSigmas = 3.0;
inline constexpr double kBruteForceTol = 1e-10;
inline constexpr int kReconstructionSamples = 5000;
inline constexpr double kReconstructionSigmas = 3.0;
inline constexpr double kVarianceRatioLow = 0.5;
inline constexpr double kVarianceRatioHigh = 1.5;
inline constexpr int kUnbiasedDraws = 20000;
inline constexpr double kUnbiasedSigmas = 4.0;
inline constexpr double kChiSquarePValue = 1e-3;
inline constexpr double kTotalVariation = 0.01;
}  // namespace pinned

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::string_view criterion_name(int id);

/// "PASS [3] scaling exponent: ... (12.3 s)".
std::string format_result(const CriterionResult& result);

/// Upper-tail probability of the chi-square statistic of `counts` against
/// `probs`; bins with expected count below 5 are pooled.
double chi_square_pvalue(const std::vector<long>& counts, const std::vector<double>& probs,
                         long draws);

struct SuiteOptions {
  int threads = 1;
  /// Receives progress lines; may be empty.
  std::function<void(std::string_view)> log;
};

/// Runs criteria on demand. Criteria 6 and 7 share one reconstruction run,
/// which is cached after the first of them executes.
class Suite {
 public:
  explicit Suite(SuiteOptions options = {});
  ~Suite();
  Suite(const Suite&) = delete;
  Suite& operator=(const Suite&) = delete;

  CriterionResult run(int id);

 private:
  struct Reconstruction;
  const Reconstruction& reconstruction();

  SuiteOptions options_;
  std::unique_ptr<Reconstruction> reconstruction_;
};

}  // namespace mbls::acceptance
