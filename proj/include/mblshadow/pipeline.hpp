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
#include <span>
#include <string>
#include <vector>

#include "mblshadow/hamiltonians.hpp"
#include "mblshadow/mps.hpp"
#include "mblshadow/pauli.hpp"
#include "mblshadow/rng.hpp"

namespace mbls {

/// (|0...0> + |1...1>) / sqrt(2) with bond dimension 2.
Mps prepare_ghz(int n);

/// Projects |0...0> with every bulk stabilizer (1 + Z_i X_{i+1} Z_{i+2}) / 2,
/// i = 0..N-3, and normalizes.
Mps prepare_zxz(int n);

enum class InitialState {
  kZero,
  kGhz,
  kZxz,
};

Mps prepare_state(InitialState state, int n);

/// Trotter gates for exp(-iHt) and exp(+iHt) built once per disorder
/// realization and shared by every snapshot.
class MblDynamics {
 public:
  MblDynamics(const BondSchedule& schedule, double tau, double t, TruncationPolicy policy);

  int size() const { return n_; }
  double time() const { return t_; }
  double tau() const { return tau_; }
  long steps() const { return steps_; }
  const TruncationPolicy& policy() const { return policy_; }

  /// Applies `steps()` Trotter steps in the given direction.
  TruncationReport evolve(Mps& state, TimeDirection direction) const;

 private:
  int n_;
  double tau_;
  double t_;
  long steps_;
  TruncationPolicy policy_;
  TrotterStep forward_;
  TrotterStep backward_;
};

struct SnapshotRecord {
  std::vector<int> v;
  std::vector<int> u;
  std::vector<int> b;
  std::uint64_t stream = 0;

  bool operator==(const SnapshotRecord&) const = default;
};

/// One uniformly drawn Clifford index per site.
std::vector<int> random_clifford_layer(int n, StreamRng& rng);

/// State right before measurement: u exp(-iHt) v rho.
Mps snapshot_state(const Mps& rho, const MblDynamics& dynamics, std::span<const int> v,
                   std::span<const int> u, TruncationReport* report = nullptr);

/// Applies v, evolves forward, applies u and samples b; the discarded weight of
/// the evolution is added to `report` when given.
SnapshotRecord sample_snapshot_with_layers(const Mps& rho, const MblDynamics& dynamics,
                                           std::span<const int> v, std::span<const int> u,
                                           StreamRng& rng, TruncationReport* report = nullptr);

/// Draws v, u and b from `rng`; `stream` is recorded in the result.
SnapshotRecord sample_snapshot(const Mps& rho, const MblDynamics& dynamics, StreamRng& rng,
                               std::uint64_t stream, TruncationReport* report = nullptr);

struct SnapshotSet {
  std::vector<SnapshotRecord> records;
  double max_discarded_weight = 0.0;
  std::vector<std::string> warnings;
};

/// Snapshot m uses StreamRng(seed, streams::kSnapshotBase + m). The result
/// does not depend on the thread count.
SnapshotSet generate_snapshots(const Mps& rho, const MblDynamics& dynamics, int count,
                               std::uint64_t seed, int threads = 1);

/// exp(+iHt) u^dag |b> as a normalized MPS.
Mps back_evolved_state(const SnapshotRecord& record, const MblDynamics& dynamics);

/// lambda^-1 <phi| v O v^dag |phi> for phi = back_evolved_state(record).
double snapshot_estimate(const SnapshotRecord& record, const PauliString& op, double lambda,
                         const MblDynamics& dynamics);

/// Same estimate on an already back-evolved state.
double snapshot_estimate_on(const Mps& phi, const SnapshotRecord& record, const PauliString& op,
                            double lambda);

struct EstimateReport {
  std::string observable;
  int k = 0;
  double mean = 0.0;
  /// (1/M) sum (x - mean)^2.
  double variance = 0.0;
  double stderr = 0.0;
  int samples = 0;
  double lambda = 1.0;
};

EstimateReport summarize_estimates(const PauliString& op, std::span<const double> values,
                                   double lambda);

/// Per-snapshot estimates; result[o][m] for observable o and record m. Each
/// record is back-evolved once and reused for every observable.
std::vector<std::vector<double>> snapshot_estimates(std::span<const SnapshotRecord> records,
                                                    std::span<const PauliString> observables,
                                                    std::span<const double> lambdas,
                                                    const MblDynamics& dynamics, int threads = 1);

std::vector<EstimateReport> estimate_observables(std::span<const SnapshotRecord> records,
                                                 std::span<const PauliString> observables,
                                                 std::span<const double> lambdas,
                                                 const MblDynamics& dynamics, int threads = 1);

/// Runs `body(i)` for i in [0, count) over up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace mbls
