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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mblshadow/hamiltonians.hpp"
#include "mblshadow/mps.hpp"

namespace mbls {

/// Contiguous block of `length` sites starting at `start`.
struct RegionSpec {
  int start = 0;
  int length = 0;

  void validate(int n) const;
};

/// Per-site doubled-space vectors (16 entries, copy 1 most significant).
VectorXc doubled_identity_vector();  // |I>>|I>>
VectorXc doubled_pauli_average();    // (1/3) sum_P |P>>|P>>
VectorXc doubled_size_vector();      // |I>>|I>> + (1/3) sum_P |P>>|P>>

/// Size-weighting product state |S)); squared norm (4/3)^N.
Mps build_s_state(int n);
/// Region projector state |A)); squared norm 3^-k.
Mps build_a_state(const RegionSpec& region, int n);

enum class RegionPlacement {
  kAllStarts,
  kCentered,
};

/// Start of the centered block of length k, spanning N/2 - floor((k-1)/2) ..
/// N/2 + floor(k/2) in one-based site labels.
int centered_start(int n, int k);

struct ShadowNormOptions {
  TruncationPolicy policy{64, 1e-12};
  double tau = 0.1;
  std::vector<double> checkpoints;
  int k_max = 4;
  RegionPlacement placement = RegionPlacement::kAllStarts;
};

struct ShadowNormEntry {
  int k;
  int start;
  double t;
  double lambda;

  double shadow_norm() const { return 1.0 / lambda; }
};

/// lambda values for every (k, start, t) requested in one evolution run.
struct ShadowNormTable {
  XxzParams params;
  TruncationPolicy policy;
  double tau = 0.0;
  std::vector<double> checkpoints;
  std::vector<ShadowNormEntry> entries;
  double max_discarded_weight = 0.0;
  int max_bond_dim = 1;
  std::vector<std::string> warnings;

  std::optional<double> lambda(int k, int start, double t) const;
};

/// Per-step discarded weight above which a warning is recorded.
inline constexpr double kTruncationWarning = 1e-6;

/// Evolves |S)) under exp(+i H_tot t) and evaluates region overlaps. Holds
/// its own state so a run can be paused, copied and resumed.
class DoubledEvolution {
 public:
  DoubledEvolution(const BondSchedule& single_copy, double tau, TruncationPolicy policy);

  /// Starts from a stored state at the given step count.
  DoubledEvolution(const BondSchedule& single_copy, double tau, TruncationPolicy policy,
                   Mps state, long steps_done);

  void advance(long steps);
  double time() const { return static_cast<double>(steps_) * tau_; }
  long steps() const { return steps_; }
  const Mps& state() const { return state_; }
  const TruncationReport& last_report() const { return last_; }
  double max_step_discarded() const { return max_step_discarded_; }

  /// lambda for every region of length 0..k_max under the placement rule.
  std::vector<ShadowNormEntry> region_overlaps(int k_max, RegionPlacement placement) const;

  /// lambda for an arbitrary set of sites (not necessarily contiguous).
  double support_overlap(std::span<const int> sites) const;

 private:
  TrotterStep step_;
  double tau_;
  TruncationPolicy policy_;
  Mps state_;
  long steps_ = 0;
  TruncationReport last_;
  double max_step_discarded_ = 0.0;
};

/// Number of tau steps equal to t, rejecting off-grid times.
long steps_for_time(double t, double tau);

ShadowNormTable run_shadow_norm(const XxzParams& params, const ShadowNormOptions& options);
/// Same run for an explicit single-copy Hamiltonian (e.g. fixed fields or the
/// Ising backend); `params` is only recorded as metadata.
ShadowNormTable run_shadow_norm(const BondSchedule& single_copy, const XxzParams& params,
                                const ShadowNormOptions& options);

struct AveragedLambda {
  int k;
  double t;
  double mean_lambda;

  double shadow_norm() const { return 1.0 / mean_lambda; }
};

/// Arithmetic mean of lambda over start positions, sorted by (t, k).
std::vector<AveragedLambda> average_over_starts(const ShadowNormTable& table);

struct FitResult {
  double c0 = 0.0;
  double alpha = 0.0;
  double stderr_alpha = 0.0;
  int k_min = 0;
  int k_max = 0;
};

struct NormPoint {
  int k;
  double norm;
};

/// Least squares of log(norm) = log(c0) + k log(alpha) over k in [k_min, k_max].
FitResult fit_alpha(std::span<const NormPoint> points, int k_min, int k_max);

}  // namespace mbls
