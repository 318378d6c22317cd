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
#include "mblshadow/hamiltonians.hpp"
#include "mblshadow/oracle.hpp"

namespace mbls {
namespace {

// Two-copy dense evaluation: the Pauli-weighted purity of O(t) equals
// 4^-N tr[(O(t) x O(t)) prod_i (2/3)(1 + SWAP_i)], and the average over strings
// that are non-identity on A replaces O x O by prod_{i in A} (2 SWAP_i - 1) / 3.
MatrixXc swap_site(int site, int n) {
  const int dim = 1 << n;
  const int bit = n - 1 - site;
  MatrixXc s = MatrixXc::Zero(dim * dim, dim * dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      const int ba = (a >> bit) & 1;
      const int bb = (b >> bit) & 1;
      const int a2 = (a & ~(1 << bit)) | (bb << bit);
      const int b2 = (b & ~(1 << bit)) | (ba << bit);
      s(a2 * dim + b2, a * dim + b) = 1.0;
    }
  }
  return s;
}

double two_copy_lambda(const MatrixXc& h, double t, const std::vector<int>& region, int n) {
  const int dim = 1 << n;
  const MatrixXc id = MatrixXc::Identity(dim * dim, dim * dim);
  MatrixXc weight = id;
  MatrixXc strings = id;
  for (int i = 0; i < n; ++i) {
    const MatrixXc s = swap_site(i, n);
    weight = weight * ((2.0 / 3.0) * (id + s));
    if (std::find(region.begin(), region.end(), i) != region.end()) {
      strings = strings * ((2.0 * s - id) / 3.0);
    }
  }
  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(h);
  const MatrixXc u = eig.eigenvectors() *
                     (eig.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix().asDiagonal() *
                     eig.eigenvectors().adjoint();
  const MatrixXc uu = kron(u, u);
  const MatrixXc evolved = uu.adjoint() * strings * uu;
  return (evolved * weight).trace().real() / std::pow(4.0, n);
}

MatrixXc xxz_hamiltonian(const XxzParams& p) { return oracle::dense_xxz(p, sample_disorder(p)); }

TEST(DenseHamiltonian, HeisenbergBondSpectrum) {
  const XxzParams p{2, 1.0, 1.0, 0.0, 0};
  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(xxz_hamiltonian(p));
  const Eigen::VectorXd e = eig.eigenvalues();
  EXPECT_NEAR(e(0), -3.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(e(i), 1.0, 1e-12);
}

TEST(DenseHamiltonian, ConservesTotalZ) {
  const int n = 5;
  const MatrixXc h = xxz_hamiltonian({n, 1.0, 0.6, 5.0, 4});
  MatrixXc z = MatrixXc::Zero(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) z += oracle::embed_one_site(pauli_matrix(Pauli::kZ), i, n);
  EXPECT_LT((h * z - z * h).norm(), 1e-12);
}

TEST(DenseHamiltonian, BondAssemblyMatchesPauliSum) {
  const XxzParams p{5, 0.8, 1.3, 4.0, 9};
  const auto fields = sample_disorder(p);
  EXPECT_LT((oracle::dense_hamiltonian(build_xxz_bonds(p, fields)) -
             oracle::dense_xxz(p, fields))
                .norm(),
            1e-12);
}

TEST(DenseHamiltonian, SizeCap) {
  EXPECT_THROW(oracle::check_size(oracle::kMaxQubits + 1), Error);
  EXPECT_NO_THROW(oracle::check_size(oracle::kMaxQubits));
}

TEST(Heisenberg, TimeZeroIsIdentity) {
  const MatrixXc h = xxz_hamiltonian({4, 1.0, 1.0, 5.0, 1});
  const MatrixXc op = oracle::embed_pauli_string(PauliString::parse("X1 Z2"), 4);
  EXPECT_LT((oracle::heisenberg_evolve(h, op, 0.0) - op).norm(), 1e-12);
}

TEST(Heisenberg, ConservedOperatorUnchanged) {
  const int n = 4;
  const MatrixXc h = xxz_hamiltonian({n, 1.0, 1.0, 5.0, 1});
  MatrixXc z = MatrixXc::Zero(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) z += oracle::embed_one_site(pauli_matrix(Pauli::kZ), i, n);
  EXPECT_LT((oracle::heisenberg_evolve(h, z, 1.7) - z).norm(), 1e-10);
}

TEST(Heisenberg, PreservesNormAndMatchesEvolver) {
  const MatrixXc h = xxz_hamiltonian({4, 1.0, 1.0, 5.0, 2});
  const MatrixXc op = oracle::embed_pauli_string(PauliString::parse("Y0 X3"), 4);
  const MatrixXc evolved = oracle::heisenberg_evolve(h, op, 2.3);
  EXPECT_NEAR(evolved.squaredNorm(), op.squaredNorm(), 1e-9);
  const oracle::DenseEvolver ev(h);
  EXPECT_LT((ev.heisenberg(op, 2.3) - evolved).norm(), 1e-10);
  const MatrixXc u = ev.propagator(2.3);
  EXPECT_LT((u.adjoint() * op * u - evolved).norm(), 1e-10);
}

TEST(WeightDistribution, SinglePauli) {
  const auto p = oracle::pauli_weight_distribution(
      oracle::embed_pauli_string(PauliString::parse("Z1"), 3));
  ASSERT_EQ(p.size(), 4u);
  EXPECT_NEAR(p[1], 1.0, 1e-14);
  EXPECT_NEAR(p[0] + p[2] + p[3], 0.0, 1e-14);
}

TEST(WeightDistribution, EvenMixture) {
  const MatrixXc op = (oracle::embed_pauli_string(PauliString::parse("X0"), 3) +
                       oracle::embed_pauli_string(PauliString::parse("X0 X1"), 3)) /
                      std::sqrt(2.0);
  const auto p = oracle::pauli_weight_distribution(op);
  EXPECT_NEAR(p[1], 0.5, 1e-14);
  EXPECT_NEAR(p[2], 0.5, 1e-14);
  EXPECT_NEAR(oracle::size_weighted_lambda(p), 0.5 / 3.0 + 0.5 / 9.0, 1e-14);
}

TEST(WeightDistribution, CoefficientsReconstructOperator) {
  StreamRng rng(31, 0);
  const int n = 3;
  const MatrixXc op = mbls::testing::random_hermitian(1 << n, rng);
  const auto c = oracle::pauli_coefficients(op);
  ASSERT_EQ(c.size(), 64u);
  MatrixXc rebuilt = MatrixXc::Zero(1 << n, 1 << n);
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    PauliString p;
    for (int site = 0; site < n; ++site) {
      const auto letter = static_cast<Pauli>((idx >> (2 * (n - 1 - site))) & 3u);
      if (letter != Pauli::kI) p.support.emplace(site, letter);
    }
    rebuilt += c[idx] * oracle::embed_pauli_string(p, n);
  }
  EXPECT_LT((rebuilt - op).norm(), 1e-12);
}

TEST(LambdaExact, TimeZeroAndEmptyRegion) {
  const oracle::DenseEvolver ev(xxz_hamiltonian({5, 1.0, 1.0, 5.0, 3}));
  for (int k = 1; k <= 4; ++k) {
    std::vector<int> region;
    for (int i = 0; i < k; ++i) region.push_back(i);
    EXPECT_NEAR(oracle::lambda_exact(ev, 0.0, region), std::pow(3.0, -k), 1e-14);
  }
  EXPECT_NEAR(oracle::lambda_exact(ev, 1.5, std::vector<int>{}), 1.0, 1e-14);
}

TEST(LambdaExact, MatchesTwoCopyFormula) {
  const int n = 4;
  const MatrixXc h = xxz_hamiltonian({n, 1.0, 1.0, 5.0, 7});
  const oracle::DenseEvolver ev(h);
  for (double t : {0.4, 1.0, 2.5}) {
    for (const std::vector<int>& region :
         {std::vector<int>{0}, std::vector<int>{2}, std::vector<int>{1, 2}, std::vector<int>{0, 3},
          std::vector<int>{0, 1, 2, 3}}) {
      EXPECT_NEAR(oracle::lambda_exact(ev, t, region), two_copy_lambda(h, t, region, n), 1e-12);
    }
  }
}

TEST(LambdaExact, FrozenReference) {
  // Values from two_copy_lambda at N=5, W=5, Delta=1, J=1, disorder seed 1.
  const int n = 5;
  const MatrixXc h = xxz_hamiltonian({n, 1.0, 1.0, 5.0, 1});
  const oracle::DenseEvolver ev(h);
  struct Case {
    double t;
    std::vector<int> region;
    double lambda;
  };
  const std::vector<Case> cases = {
      {1.0, {2}, 0.079709935287053849},
      {1.0, {1, 2}, 0.048001235936716576},
      {1.0, {1, 2, 3}, 0.033464170757723122},
      {2.0, {2}, 0.067358367783003498},
      {2.0, {1, 2}, 0.036233686110811729},
      {2.0, {1, 2, 3}, 0.029648339234212534},
  };
  for (const Case& c : cases) {
    EXPECT_NEAR(oracle::lambda_exact(ev, c.t, c.region), c.lambda, 1e-10 * c.lambda)
        << "t=" << c.t << " k=" << c.region.size();
  }
}

TEST(LambdaExact, SamplingAgreesWithEnumeration) {
  const oracle::DenseEvolver ev(xxz_hamiltonian({5, 1.0, 1.0, 5.0, 3}));
  const std::vector<int> region{1, 2, 3};
  const double exact = oracle::lambda_exact(ev, 1.0, region, oracle::LambdaMode::kEnumerate);
  const double sampled =
      oracle::lambda_exact(ev, 1.0, region, oracle::LambdaMode::kSample, 4000, 5);
  EXPECT_NEAR(sampled, exact, 0.05 * exact);
}

TEST(LambdaMc, IdentityHasNoVariance) {
  const oracle::DenseEvolver ev(xxz_hamiltonian({3, 1.0, 1.0, 5.0, 1}));
  StreamRng rng(41, 0);
  const auto v = oracle::lambda_mc_definition(ev, 1.0, PauliString::parse("I"), 200, rng);
  EXPECT_NEAR(v.mean, 1.0, 1e-12);
  EXPECT_NEAR(v.stderr, 0.0, 1e-12);
}

TEST(LambdaMc, SingleQubitSchemeAtTimeZero) {
  const oracle::DenseEvolver ev(xxz_hamiltonian({3, 1.0, 1.0, 5.0, 1}));
  StreamRng rng(42, 0);
  const auto v = oracle::lambda_mc_definition(ev, 0.0, PauliString::parse("Z1"), 20000, rng);
  EXPECT_NEAR(v.mean, 1.0 / 3.0, 3.0 * v.stderr);
}

TEST(LambdaMc, MatchesExactOnRandomDraws) {
  StreamRng draw(43, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const double w = draw.uniform(1.0, 8.0);
    const double t = draw.uniform(0.2, 3.0);
    const int k = 1 + static_cast<int>(draw.below(3));
    const int start = static_cast<int>(draw.below(static_cast<std::uint64_t>(6 - k + 1)));
    const XxzParams p{6, 1.0, 1.0, w, static_cast<std::uint64_t>(100 + trial)};
    const oracle::DenseEvolver ev(xxz_hamiltonian(p));
    std::vector<int> region;
    PauliString avg_member;
    for (int i = start; i < start + k; ++i) region.push_back(i);
    const double exact = oracle::lambda_exact(ev, t, region);
    // The Clifford twirl makes every string on the region equivalent in mean.
    for (int i : region) avg_member.support.emplace(i, Pauli::kZ);
    StreamRng rng(44, static_cast<std::uint64_t>(trial));
    const auto mc = oracle::lambda_mc_definition(ev, t, avg_member, 20000, rng);
    EXPECT_NEAR(mc.mean, exact, 4.0 * mc.stderr) << "trial " << trial;
  }
}

TEST(SnapshotProbabilities, NormalizedAndIdentityAtTimeZero) {
  const int n = 3;
  const oracle::DenseEvolver ev(xxz_hamiltonian({n, 1.0, 1.0, 5.0, 1}));
  const VectorXc ghz = oracle::ghz_dense(n);
  const std::vector<int> id(n, 0);
  const auto p0 = oracle::snapshot_probabilities(ghz, ev, 0.0, id, id);
  EXPECT_NEAR(p0[0], 0.5, 1e-14);
  EXPECT_NEAR(p0[7], 0.5, 1e-14);
  StreamRng rng(45, 0);
  std::vector<int> v(n), u(n);
  for (int& x : v) x = static_cast<int>(rng.below(kCliffordCount));
  for (int& x : u) x = static_cast<int>(rng.below(kCliffordCount));
  const auto p = oracle::snapshot_probabilities(ghz, ev, 1.3, v, u);
  double total = 0.0;
  for (double x : p) {
    EXPECT_GE(x, -1e-15);
    total += x;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(DenseReference, GhzParityNearOne) {
  const int n = 4;
  const oracle::DenseEvolver ev(xxz_hamiltonian({n, 1.0, 1.0, 5.0, 1}));
  const std::vector<PauliString> ops = {PauliString::parse("Z1 Z2")};
  const std::vector<double> lambdas = {oracle::lambda_exact(ev, 1.0, std::vector<int>{1, 2})};
  StreamRng rng(46, 0);
  const auto est =
      oracle::dense_snapshot_reference(oracle::ghz_dense(n), ev, 1.0, ops, lambdas, 10000, rng);
  double mean = 0.0;
  for (double x : est[0]) mean += x;
  mean /= static_cast<double>(est[0].size());
  double var = 0.0;
  for (double x : est[0]) var += (x - mean) * (x - mean);
  var /= static_cast<double>(est[0].size());
  EXPECT_NEAR(mean, 1.0, 4.0 * std::sqrt(var / static_cast<double>(est[0].size())));
}

TEST(DenseReference, MaximallyMixedGivesZero) {
  const int n = 3;
  const oracle::DenseEvolver ev(xxz_hamiltonian({n, 1.0, 1.0, 5.0, 2}));
  const std::vector<PauliString> ops = {PauliString::parse("Z0"), PauliString::parse("X1"),
                                        PauliString::parse("Z0 Z1"), PauliString::parse("Y1 X2")};
  std::vector<double> lambdas;
  for (const PauliString& op : ops) lambdas.push_back(oracle::lambda_exact(ev, 0.8, op.sites()));
  std::vector<std::vector<double>> pooled(ops.size());
  for (int basis = 0; basis < (1 << n); ++basis) {
    VectorXc psi = VectorXc::Zero(1 << n);
    psi(basis) = 1.0;
    StreamRng rng(47, static_cast<std::uint64_t>(basis));
    const auto est = oracle::dense_snapshot_reference(psi, ev, 0.8, ops, lambdas, 1500, rng);
    for (std::size_t o = 0; o < ops.size(); ++o) {
      pooled[o].insert(pooled[o].end(), est[o].begin(), est[o].end());
    }
  }
  for (std::size_t o = 0; o < ops.size(); ++o) {
    const double m = static_cast<double>(pooled[o].size());
    double mean = 0.0;
    for (double x : pooled[o]) mean += x;
    mean /= m;
    double var = 0.0;
    for (double x : pooled[o]) var += (x - mean) * (x - mean);
    var /= m;
    EXPECT_NEAR(mean, 0.0, 4.0 * std::sqrt(var / m)) << ops[o].to_string();
  }
}

}  // namespace
}  // namespace mbls
