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

#include "mblshadow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <mutex>
#include <thread>

#include "mblshadow/error.hpp"
#include "mblshadow/shadow_norm.hpp"

namespace mbls {

namespace {

void apply_layer(Mps& state, std::span<const int> layer, bool adjoint) {
  const auto& group = clifford_group();
  require(static_cast<int>(layer.size()) == state.size(), ErrorCode::kDimensionMismatch,
          "Clifford layer length differs from N");
  for (int i = 0; i < state.size(); ++i) {
    const int idx = layer[static_cast<std::size_t>(i)];
    require(idx >= 0 && idx < kCliffordCount, ErrorCode::kInvalidArgument,
            "Clifford index out of range");
    const Eigen::Matrix2cd& m = group[static_cast<std::size_t>(idx)].matrix;
    state.apply_one_site({i, adjoint ? MatrixXc(m.adjoint()) : MatrixXc(m)});
  }
}

void merge_report(TruncationReport& into, const TruncationReport& r) {
  into.discarded_weight += r.discarded_weight;
  into.max_discarded_weight = std::max(into.max_discarded_weight, r.max_discarded_weight);
  into.max_bond_dim = std::max(into.max_bond_dim, r.max_bond_dim);
}

}  // namespace

Mps prepare_ghz(int n) {
  require(n >= 2, ErrorCode::kInvalidArgument, "GHZ state needs N >= 2");
  std::vector<SiteTensor> tensors;
  tensors.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int left = i == 0 ? 1 : 2;
    const int right = i == n - 1 ? 1 : 2;
    SiteTensor t(left, 2, right);
    for (int s = 0; s < 2; ++s) t(left == 1 ? 0 : s, s, right == 1 ? 0 : s) = 1.0;
    tensors.push_back(std::move(t));
  }
  return Mps::from_tensors(std::move(tensors), std::log(1.0 / std::sqrt(2.0)));
}

Mps prepare_zxz(int n) {
  require(n >= 3, ErrorCode::kInvalidArgument, "ZXZ state needs N >= 3");
  const VectorXc up = (VectorXc(2) << 1.0, 0.0).finished();
  const std::vector<VectorXc> sites(static_cast<std::size_t>(n), up);
  Mps state = Mps::product_state(sites);

  const MatrixXc z = pauli_matrix(Pauli::kZ);
  const MatrixXc x = pauli_matrix(Pauli::kX);
  const MatrixXc projector =
      0.5 * (MatrixXc::Identity(8, 8) + kron(kron(z, x), z));
  const TruncationPolicy exact = TruncationPolicy::exact();
  for (int i = 0; i + 2 < n; ++i) state.apply_gate(i, 3, projector, exact);
  require(norm_squared(state) > 1e-24, ErrorCode::kDomain,
          "stabilizer projection annihilated the seed state");
  state.normalize();
  return state;
}

Mps prepare_state(InitialState state, int n) {
  switch (state) {
    case InitialState::kGhz: return prepare_ghz(n);
    case InitialState::kZxz: return prepare_zxz(n);
    case InitialState::kZero: break;
  }
  const VectorXc up = (VectorXc(2) << 1.0, 0.0).finished();
  const std::vector<VectorXc> sites(static_cast<std::size_t>(n), up);
  return Mps::product_state(sites);
}

MblDynamics::MblDynamics(const BondSchedule& schedule, double tau, double t,
                         TruncationPolicy policy)
    : n_(schedule.n),
      tau_(tau),
      t_(t),
      steps_(steps_for_time(t, tau)),
      policy_(policy),
      forward_(trotterize(schedule, tau, TimeDirection::kForward)),
      backward_(trotterize(schedule, tau, TimeDirection::kBackward)) {
  policy_.validate();
  require(schedule.local_dim == 2, ErrorCode::kDimensionMismatch,
          "snapshot dynamics needs a qubit Hamiltonian");
}

TruncationReport MblDynamics::evolve(Mps& state, TimeDirection direction) const {
  require(state.size() == n_, ErrorCode::kDimensionMismatch, "state size differs from N");
  const TrotterStep& step = direction == TimeDirection::kForward ? forward_ : backward_;
  TruncationReport total;
  for (long s = 0; s < steps_; ++s) merge_report(total, apply_gate_sequence(state, step.gates, policy_));
  return total;
}

std::vector<int> random_clifford_layer(int n, StreamRng& rng) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int& idx : out) idx = static_cast<int>(rng.below(kCliffordCount));
  return out;
}

Mps snapshot_state(const Mps& rho, const MblDynamics& dynamics, std::span<const int> v,
                   std::span<const int> u, TruncationReport* report) {
  Mps state = rho;
  apply_layer(state, v, false);
  const TruncationReport r = dynamics.evolve(state, TimeDirection::kForward);
  if (report) merge_report(*report, r);
  apply_layer(state, u, false);
  return state;
}

SnapshotRecord sample_snapshot_with_layers(const Mps& rho, const MblDynamics& dynamics,
                                           std::span<const int> v, std::span<const int> u,
                                           StreamRng& rng, TruncationReport* report) {
  const Mps state = snapshot_state(rho, dynamics, v, u, report);
  SnapshotRecord out;
  out.v.assign(v.begin(), v.end());
  out.u.assign(u.begin(), u.end());
  out.b = sample_bitstring(state, rng);
  out.stream = rng.stream();
  return out;
}

SnapshotRecord sample_snapshot(const Mps& rho, const MblDynamics& dynamics, StreamRng& rng,
                               std::uint64_t stream, TruncationReport* report) {
  const std::vector<int> v = random_clifford_layer(rho.size(), rng);
  const std::vector<int> u = random_clifford_layer(rho.size(), rng);
  SnapshotRecord out = sample_snapshot_with_layers(rho, dynamics, v, u, rng, report);
  out.stream = stream;
  return out;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  const int workers = std::clamp(threads, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SnapshotSet generate_snapshots(const Mps& rho, const MblDynamics& dynamics, int count,
                               std::uint64_t seed, int threads) {
  require(count >= 0, ErrorCode::kInvalidArgument, "snapshot count must be >= 0");
  require(rho.size() == dynamics.size(), ErrorCode::kDimensionMismatch,
          "state size differs from the Hamiltonian");
  SnapshotSet out;
  out.records.resize(static_cast<std::size_t>(count));
  std::vector<TruncationReport> reports(static_cast<std::size_t>(count));
  parallel_for(count, threads, [&](int m) {
    const std::uint64_t stream = streams::kSnapshotBase + static_cast<std::uint64_t>(m);
    StreamRng rng(seed, stream);
    out.records[static_cast<std::size_t>(m)] =
        sample_snapshot(rho, dynamics, rng, stream, &reports[static_cast<std::size_t>(m)]);
  });
  for (const TruncationReport& r : reports) {
    out.max_discarded_weight = std::max(out.max_discarded_weight, r.max_discarded_weight);
  }
  if (out.max_discarded_weight > kTruncationWarning) {
    out.warnings.push_back(fmt::format("discarded weight per gate {:.3e} exceeds {:.0e}",
                                       out.max_discarded_weight, kTruncationWarning));
  }
  return out;
}

Mps back_evolved_state(const SnapshotRecord& record, const MblDynamics& dynamics) {
  require(static_cast<int>(record.b.size()) == dynamics.size(), ErrorCode::kDimensionMismatch,
          "bitstring length differs from N");
  std::vector<VectorXc> sites;
  sites.reserve(record.b.size());
  for (int bit : record.b) {
    require(bit == 0 || bit == 1, ErrorCode::kInvalidArgument, "bitstring entries must be 0/1");
    VectorXc e = VectorXc::Zero(2);
    e(bit) = 1.0;
    sites.push_back(e);
  }
  Mps phi = Mps::product_state(sites);
  apply_layer(phi, record.u, true);
  dynamics.evolve(phi, TimeDirection::kBackward);
  phi.normalize();
  return phi;
}

double snapshot_estimate_on(const Mps& phi, const SnapshotRecord& record, const PauliString& op,
                            double lambda) {
  require(lambda > 0.0, ErrorCode::kDomain, "lambda must be > 0");
  const PauliString rotated = conjugate_pauli_by_clifford_layer(op, record.v);
  std::vector<OneSiteOperator> ops;
  ops.reserve(rotated.support.size());
  for (const auto& [site, p] : rotated.support) ops.push_back({site, pauli_matrix(p)});
  const cplx value = expect_product_operator(phi, ops);
  return rotated.sign * value.real() / lambda;
}

double snapshot_estimate(const SnapshotRecord& record, const PauliString& op, double lambda,
                         const MblDynamics& dynamics) {
  return snapshot_estimate_on(back_evolved_state(record, dynamics), record, op, lambda);
}

EstimateReport summarize_estimates(const PauliString& op, std::span<const double> values,
                                   double lambda) {
  require(values.size() >= 2, ErrorCode::kInvalidArgument, "estimates need M >= 2");
  EstimateReport out;
  out.observable = op.to_string();
  out.k = op.weight();
  out.samples = static_cast<int>(values.size());
  out.lambda = lambda;
  double sum = 0.0;
  for (double x : values) sum += x;
  out.mean = sum / out.samples;
  double sq = 0.0;
  for (double x : values) sq += (x - out.mean) * (x - out.mean);
  out.variance = sq / out.samples;
  out.stderr = std::sqrt(out.variance / out.samples);
  return out;
}

std::vector<std::vector<double>> snapshot_estimates(std::span<const SnapshotRecord> records,
                                                    std::span<const PauliString> observables,
                                                    std::span<const double> lambdas,
                                                    const MblDynamics& dynamics, int threads) {
  require(observables.size() == lambdas.size(), ErrorCode::kDimensionMismatch,
          "one lambda per observable is required");
  std::vector<std::vector<double>> out(observables.size(),
                                       std::vector<double>(records.size()));
  parallel_for(static_cast<int>(records.size()), threads, [&](int m) {
    const SnapshotRecord& rec = records[static_cast<std::size_t>(m)];
    const Mps phi = back_evolved_state(rec, dynamics);
    for (std::size_t o = 0; o < observables.size(); ++o) {
      out[o][static_cast<std::size_t>(m)] =
          snapshot_estimate_on(phi, rec, observables[o], lambdas[o]);
    }
  });
  return out;
}

std::vector<EstimateReport> estimate_observables(std::span<const SnapshotRecord> records,
                                                 std::span<const PauliString> observables,
                                                 std::span<const double> lambdas,
                                                 const MblDynamics& dynamics, int threads) {
  require(records.size() >= 2, ErrorCode::kInvalidArgument, "estimates need M >= 2");
  const auto values = snapshot_estimates(records, observables, lambdas, dynamics, threads);
  std::vector<EstimateReport> out;
  out.reserve(observables.size());
  for (std::size_t o = 0; o < observables.size(); ++o) {
    out.push_back(summarize_estimates(observables[o], values[o], lambdas[o]));
  }
  return out;
}

}  // namespace mbls
