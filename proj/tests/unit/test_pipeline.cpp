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

#include "helpers.hpp"
#include "mblshadow/error.hpp"
#include "mblshadow/oracle.hpp"
#include "mblshadow/pipeline.hpp"
#include "mblshadow/shadow_norm.hpp"

namespace mbls {
namespace {

struct Stats {
  double mean = 0.0;
  double variance = 0.0;
  double stderr = 0.0;
};

Stats stats_of(const std::vector<double>& x) {
  Stats s;
  const double m = static_cast<double>(x.size());
  for (double v : x) s.mean += v;
  s.mean /= m;
  for (double v : x) s.variance += (v - s.mean) * (v - s.mean);
  s.variance /= m;
  s.stderr = std::sqrt(s.variance / m);
  return s;
}

double expectation(const Mps& psi, const PauliString& p) {
  std::vector<OneSiteOperator> ops;
  for (const auto& [site, letter] : p.support) ops.push_back({site, pauli_matrix(letter)});
  return p.sign * expect_product_operator(psi, ops).real();
}

BondSchedule xxz_schedule(const XxzParams& p) { return build_xxz_bonds(p, sample_disorder(p)); }

VectorXc dense_zxz_by_projectors(int n) {
  const int dim = 1 << n;
  VectorXc psi = VectorXc::Zero(dim);
  psi(0) = 1.0;
  for (int i = 0; i + 2 < n; ++i) {
    PauliString s;
    s.support = {{i, Pauli::kZ}, {i + 1, Pauli::kX}, {i + 2, Pauli::kZ}};
    const MatrixXc proj = (MatrixXc::Identity(dim, dim) + oracle::embed_pauli_string(s, n)) / 2.0;
    psi = proj * psi;
  }
  return psi / psi.norm();
}

TEST(States, GhzStabilizers) {
  const int n = 6;
  const Mps ghz = prepare_ghz(n);
  EXPECT_EQ(ghz.max_bond_dim(), 2);
  for (int i = 0; i + 1 < n; ++i) {
    EXPECT_NEAR(expectation(ghz, PauliString::z_string(i, 2)), 1.0, 1e-12);
  }
  for (int k = 1; k <= n; ++k) {
    EXPECT_NEAR(expectation(ghz, PauliString::z_string(0, k)), k % 2 == 0 ? 1.0 : 0.0, 1e-12);
  }
  EXPECT_NEAR(expectation(ghz, PauliString::parse("X0 X1 X2 X3 X4 X5")), 1.0, 1e-12);
}

TEST(States, ZxzStabilizersAndParity) {
  const int n = 8;
  const Mps zxz = prepare_zxz(n);
  for (int i = 0; i + 2 < n; ++i) {
    PauliString s;
    s.support = {{i, Pauli::kZ}, {i + 1, Pauli::kX}, {i + 2, Pauli::kZ}};
    EXPECT_NEAR(expectation(zxz, s), 1.0, 1e-10);
  }
  for (int k = 1; k <= 5; ++k) {
    EXPECT_NEAR(expectation(zxz, PauliString::z_string(centered_start(n, k), k)), 0.0, 1e-10);
  }
}

TEST(States, ZxzMatchesDenseProjectors) {
  const int n = 5;
  const VectorXc dense = dense_zxz_by_projectors(n);
  const VectorXc mps = to_dense(prepare_zxz(n));
  EXPECT_NEAR(std::abs(dense.dot(mps)) / mps.norm(), 1.0, 1e-10);
}

TEST(States, InitialStateSwitch) {
  EXPECT_NEAR(std::abs(to_dense(prepare_state(InitialState::kZero, 3))(0)), 1.0, 1e-15);
  EXPECT_THROW(prepare_ghz(1), Error);
}

TEST(Snapshot, IdentityLayersAtTimeZero) {
  const int n = 5;
  const MblDynamics dyn(xxz_schedule({n, 1.0, 1.0, 5.0, 1}), 0.1, 0.0, {32, 1e-12});
  const std::vector<int> id(n, 0);
  StreamRng rng(61, 0);
  const Mps zero = prepare_state(InitialState::kZero, n);
  const Mps ghz = prepare_ghz(n);
  int ones = 0;
  for (int m = 0; m < 200; ++m) {
    const SnapshotRecord a = sample_snapshot_with_layers(zero, dyn, id, id, rng);
    EXPECT_EQ(a.b, std::vector<int>(n, 0));
    const SnapshotRecord b = sample_snapshot_with_layers(ghz, dyn, id, id, rng);
    const bool all0 = b.b == std::vector<int>(n, 0);
    const bool all1 = b.b == std::vector<int>(n, 1);
    EXPECT_TRUE(all0 || all1);
    ones += all1 ? 1 : 0;
  }
  EXPECT_GT(ones, 50);
  EXPECT_LT(ones, 150);
}

TEST(Snapshot, BornDistributionMatchesDense) {
  const int n = 4;
  const XxzParams p{n, 1.0, 1.0, 5.0, 3};
  const auto fields = sample_disorder(p);
  const MblDynamics dyn(build_xxz_bonds(p, fields), 0.02, 1.0, TruncationPolicy::exact());
  const oracle::DenseEvolver ev(oracle::dense_xxz(p, fields));
  StreamRng layers(62, 0);
  const std::vector<int> v = random_clifford_layer(n, layers);
  const std::vector<int> u = random_clifford_layer(n, layers);
  const Mps psi = snapshot_state(prepare_ghz(n), dyn, v, u);
  const auto probs = oracle::snapshot_probabilities(oracle::ghz_dense(n), ev, 1.0, v, u);
  const long draws = 100000;
  std::vector<long> counts(probs.size(), 0);
  StreamRng rng(62, 1);
  for (long m = 0; m < draws; ++m) {
    const std::vector<int> b = sample_bitstring(psi, rng);
    int idx = 0;
    for (int bit : b) idx = 2 * idx + bit;
    ++counts[static_cast<std::size_t>(idx)];
  }
  EXPECT_GT(mbls::testing::chi_square_pvalue(counts, probs, draws), 1e-3);
}

TEST(Snapshot, DeterministicAcrossThreads) {
  const int n = 6;
  const MblDynamics dyn(xxz_schedule({n, 1.0, 1.0, 5.0, 2}), 0.1, 0.5, {32, 1e-12});
  const Mps rho = prepare_ghz(n);
  const SnapshotSet a = generate_snapshots(rho, dyn, 24, 9, 1);
  const SnapshotSet b = generate_snapshots(rho, dyn, 24, 9, 3);
  const SnapshotSet c = generate_snapshots(rho, dyn, 24, 10, 1);
  EXPECT_EQ(a.records, b.records);
  EXPECT_NE(a.records, c.records);
  for (std::size_t m = 0; m < a.records.size(); ++m) {
    EXPECT_EQ(a.records[m].stream, streams::kSnapshotBase + m);
  }
  const std::vector<PauliString> ops = {PauliString::parse("Z2 Z3"), PauliString::parse("X1")};
  const std::vector<double> lambdas = {0.1, 0.3};
  const auto ea = estimate_observables(a.records, ops, lambdas, dyn, 1);
  const auto eb = estimate_observables(a.records, ops, lambdas, dyn, 3);
  for (std::size_t o = 0; o < ops.size(); ++o) {
    EXPECT_EQ(ea[o].mean, eb[o].mean);
    EXPECT_EQ(ea[o].variance, eb[o].variance);
  }
}

TEST(Estimate, IdentityObservableIsOne) {
  const int n = 4;
  const MblDynamics dyn(xxz_schedule({n, 1.0, 1.0, 5.0, 1}), 0.1, 0.5, {32, 1e-12});
  const SnapshotSet set = generate_snapshots(prepare_zxz(n), dyn, 20, 4);
  for (const SnapshotRecord& r : set.records) {
    EXPECT_NEAR(snapshot_estimate(r, PauliString::parse("I"), 1.0, dyn), 1.0, 1e-12);
  }
}

TEST(Estimate, TimeZeroIsPauliMeasurement) {
  const int n = 4;
  const MblDynamics dyn(xxz_schedule({n, 1.0, 1.0, 5.0, 1}), 0.1, 0.0, {32, 1e-12});
  const SnapshotSet set = generate_snapshots(prepare_ghz(n), dyn, 20000, 5);
  const PauliString op = PauliString::parse("Z1 Z2");
  std::vector<double> values;
  for (const SnapshotRecord& r : set.records) {
    const double x = snapshot_estimate(r, op, 1.0 / 9.0, dyn);
    EXPECT_TRUE(std::abs(x) < 1e-9 || std::abs(std::abs(x) - 9.0) < 1e-9) << x;
    values.push_back(x);
  }
  const Stats s = stats_of(values);
  EXPECT_NEAR(s.mean, 1.0, 3.0 * s.stderr);
}

TEST(Estimate, CliffordCovariance) {
  const int n = 5;
  const MblDynamics dyn(xxz_schedule({n, 1.0, 1.0, 5.0, 6}), 0.1, 0.6, TruncationPolicy::exact());
  const SnapshotSet set = generate_snapshots(prepare_zxz(n), dyn, 10, 12);
  const std::vector<PauliString> ops = {PauliString::parse("X0 Z1"), PauliString::parse("Y2"),
                                        PauliString::parse("Z1 Y3 X4")};
  const auto& group = clifford_group();
  for (const SnapshotRecord& r : set.records) {
    const Mps phi = back_evolved_state(r, dyn);
    EXPECT_NEAR(norm_squared(phi), 1.0, 1e-12);
    VectorXc rotated = to_dense(phi);
    for (int i = 0; i < n; ++i) {
      const MatrixXc vdag = group[static_cast<std::size_t>(r.v[static_cast<std::size_t>(i)])].matrix.adjoint();
      oracle::apply_one_site_dense(rotated, vdag, i, n);
    }
    for (const PauliString& op : ops) {
      const double direct =
          rotated.dot(oracle::embed_pauli_string(op, n) * rotated).real();
      EXPECT_NEAR(snapshot_estimate_on(phi, r, op, 1.0), direct, 1e-10);
    }
  }
}

TEST(Estimate, ConstantValuesHaveZeroVariance) {
  const std::vector<double> values(50, 2.5);
  const EstimateReport r = summarize_estimates(PauliString::parse("Z0"), values, 0.4);
  EXPECT_EQ(r.mean, 2.5);
  EXPECT_EQ(r.variance, 0.0);
  EXPECT_EQ(r.stderr, 0.0);
  EXPECT_EQ(r.samples, 50);
  EXPECT_THROW(summarize_estimates(PauliString::parse("Z0"), std::vector<double>{1.0}, 0.4), Error);
}

TEST(Estimate, PopulationVariance) {
  const std::vector<double> values = {1.0, 2.0, 3.0, 4.0};
  const EstimateReport r = summarize_estimates(PauliString::parse("Z0 Z1"), values, 0.5);
  EXPECT_DOUBLE_EQ(r.variance, 1.25);
  EXPECT_DOUBLE_EQ(r.stderr, std::sqrt(1.25 / 4.0));
  EXPECT_EQ(r.k, 2);
}

class SmallChainReconstruction : public ::testing::Test {
 protected:
  static constexpr int kN = 4;
  static constexpr double kT = 1.0;
  static constexpr int kSnapshots = 10000;

  static void SetUpTestSuite() {
    const XxzParams p{kN, 1.0, 1.0, 5.0, 8};
    const auto fields = sample_disorder(p);
    dynamics_ = new MblDynamics(build_xxz_bonds(p, fields), 0.05, kT, TruncationPolicy::exact());
    const oracle::DenseEvolver ev(oracle::dense_xxz(p, fields));
    ops_ = new std::vector<PauliString>();
    lambdas_ = new std::vector<double>();
    for (int a = 0; a < kN; ++a) {
      for (Pauli pa : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
        PauliString one;
        one.support = {{a, pa}};
        ops_->push_back(one);
        for (int b = a + 1; b < kN; ++b) {
          for (Pauli pb : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
            PauliString two;
            two.support = {{a, pa}, {b, pb}};
            ops_->push_back(two);
          }
        }
      }
    }
    for (const PauliString& op : *ops_) lambdas_->push_back(oracle::lambda_exact(ev, kT, op.sites()));
    ghz_ = new std::vector<std::vector<double>>(run(prepare_ghz(kN), 100));
    zxz_ = new std::vector<std::vector<double>>(run(prepare_zxz(kN), 200));
  }

  static void TearDownTestSuite() {
    delete dynamics_;
    delete ops_;
    delete lambdas_;
    delete ghz_;
    delete zxz_;
  }

  static std::vector<std::vector<double>> run(const Mps& rho, std::uint64_t seed) {
    const SnapshotSet set = generate_snapshots(rho, *dynamics_, kSnapshots, seed);
    return snapshot_estimates(set.records, *ops_, *lambdas_, *dynamics_);
  }

  static void check_unbiased(const Mps& rho, const std::vector<std::vector<double>>& values) {
    for (std::size_t o = 0; o < ops_->size(); ++o) {
      const Stats s = stats_of(values[o]);
      EXPECT_NEAR(s.mean, expectation(rho, (*ops_)[o]), 4.0 * s.stderr) << (*ops_)[o].to_string();
    }
  }

  static inline MblDynamics* dynamics_ = nullptr;
  static inline std::vector<PauliString>* ops_ = nullptr;
  static inline std::vector<double>* lambdas_ = nullptr;
  static inline std::vector<std::vector<double>>* ghz_ = nullptr;
  static inline std::vector<std::vector<double>>* zxz_ = nullptr;
};

TEST_F(SmallChainReconstruction, GhzUnbiased) { check_unbiased(prepare_ghz(kN), *ghz_); }

TEST_F(SmallChainReconstruction, ZxzUnbiased) { check_unbiased(prepare_zxz(kN), *zxz_); }

TEST_F(SmallChainReconstruction, CenteredParityNearOne) {
  const PauliString zz = PauliString::z_string(centered_start(kN, 2), 2);
  for (std::size_t o = 0; o < ops_->size(); ++o) {
    if ((*ops_)[o] != zz) continue;
    const Stats s = stats_of((*ghz_)[o]);
    EXPECT_NEAR(s.mean, 1.0, 3.0 * s.stderr);
  }
}

TEST_F(SmallChainReconstruction, VarianceTracksShadowNorm) {
  for (std::size_t o = 0; o < ops_->size(); ++o) {
    bool z_only = true;
    for (const auto& [site, letter] : (*ops_)[o].support) z_only = z_only && letter == Pauli::kZ;
    if (!z_only) continue;
    for (const auto* values : {ghz_, zxz_}) {
      const double ratio = stats_of((*values)[o]).variance * (*lambdas_)[o];
      EXPECT_GT(ratio, 0.5) << (*ops_)[o].to_string();
      EXPECT_LT(ratio, 1.5) << (*ops_)[o].to_string();
    }
  }
}

}  // namespace
}  // namespace mbls
