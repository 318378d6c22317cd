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

#include "mblshadow/oracle.hpp"

#include <cmath>
#include <fmt/format.h>

#include "mblshadow/error.hpp"

namespace mbls::oracle {

namespace {

std::size_t dim_of(int n) { return std::size_t{1} << n; }

int bit_of(int site, int n) { return n - 1 - site; }

// P|psi> for a signed Pauli string.
VectorXc apply_pauli(const VectorXc& psi, const PauliString& p, int n) {
  std::size_t flip = 0;
  for (const auto& [site, pauli] : p.support) {
    if (pauli == Pauli::kX || pauli == Pauli::kY) flip |= std::size_t{1} << bit_of(site, n);
  }
  VectorXc out(psi.size());
  for (std::size_t x = 0; x < dim_of(n); ++x) {
    cplx phase = static_cast<double>(p.sign);
    for (const auto& [site, pauli] : p.support) {
      const bool one = (x >> bit_of(site, n)) & 1u;
      if (pauli == Pauli::kY) phase *= one ? -kI : kI;
      if (pauli == Pauli::kZ && one) phase = -phase;
    }
    out(static_cast<Eigen::Index>(x ^ flip)) = phase * psi(static_cast<Eigen::Index>(x));
  }
  return out;
}

double pauli_expectation(const VectorXc& psi, const PauliString& p, int n) {
  return psi.dot(apply_pauli(psi, p, n)).real();
}

std::vector<int> random_layer(int n, StreamRng& rng) {
  std::vector<int> layer(static_cast<std::size_t>(n));
  for (int& c : layer) c = static_cast<int>(rng.below(kCliffordCount));
  return layer;
}

void apply_layer(VectorXc& psi, std::span<const int> layer, int n, bool adjoint) {
  const auto& group = clifford_group();
  for (int i = 0; i < n; ++i) {
    const Eigen::Matrix2cd& m = group[static_cast<std::size_t>(layer[static_cast<std::size_t>(i)])].matrix;
    apply_one_site_dense(psi, adjoint ? MatrixXc(m.adjoint()) : MatrixXc(m), i, n);
  }
}

VectorXc basis_state(std::size_t index, int n) {
  VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(dim_of(n)));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

}  // namespace

void check_size(int n) {
  require(n >= 1 && n <= kMaxQubits, ErrorCode::kInvalidArgument,
          fmt::format("dense oracle supports 1..{} qubits, got {}", kMaxQubits, n));
}

MatrixXc embed_one_site(const MatrixXc& op, int site, int n) {
  check_size(n);
  const MatrixXc left = MatrixXc::Identity(static_cast<Eigen::Index>(dim_of(site)),
                                           static_cast<Eigen::Index>(dim_of(site)));
  const int rest = n - site - static_cast<int>(std::log2(op.rows()));
  const MatrixXc right = MatrixXc::Identity(static_cast<Eigen::Index>(dim_of(rest)),
                                            static_cast<Eigen::Index>(dim_of(rest)));
  return kron(left, kron(op, right));
}

MatrixXc dense_hamiltonian(const BondSchedule& schedule) {
  check_size(schedule.n);
  require(schedule.local_dim == 2, ErrorCode::kDimensionMismatch,
          "dense Hamiltonian expects qubit bond terms");
  const auto d = static_cast<Eigen::Index>(dim_of(schedule.n));
  MatrixXc h = MatrixXc::Zero(d, d);
  for (const BondTerm& term : schedule.bonds) h += embed_one_site(term.matrix, term.bond, schedule.n);
  return h;
}

MatrixXc embed_pauli_string(const PauliString& p, int n) {
  check_size(n);
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  MatrixXc out = MatrixXc::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const VectorXc image = apply_pauli(basis_state(static_cast<std::size_t>(col), n), p, n);
    out.col(col) = image;
  }
  return out;
}

MatrixXc dense_xxz(const XxzParams& params, std::span<const double> fields) {
  check_size(params.n);
  const auto d = static_cast<Eigen::Index>(dim_of(params.n));
  MatrixXc h = MatrixXc::Zero(d, d);
  for (int i = 0; i + 1 < params.n; ++i) {
    for (Pauli p : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
      PauliString s;
      s.support = {{i, p}, {i + 1, p}};
      const double w = p == Pauli::kZ ? params.j * params.delta : params.j;
      h += w * embed_pauli_string(s, params.n);
    }
  }
  for (int i = 0; i < params.n; ++i) {
    PauliString s;
    s.support = {{i, Pauli::kZ}};
    h += fields[static_cast<std::size_t>(i)] * embed_pauli_string(s, params.n);
  }
  return h;
}

MatrixXc dense_dqim(int n, std::span<const double> couplings, std::span<const double> fields) {
  check_size(n);
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  MatrixXc h = MatrixXc::Zero(d, d);
  for (int i = 0; i + 1 < n; ++i) {
    PauliString s;
    s.support = {{i, Pauli::kZ}, {i + 1, Pauli::kZ}};
    h += couplings[static_cast<std::size_t>(i)] * embed_pauli_string(s, n);
  }
  for (int i = 0; i < n; ++i) {
    PauliString s;
    s.support = {{i, Pauli::kX}};
    h += fields[static_cast<std::size_t>(i)] * embed_pauli_string(s, n);
  }
  return h;
}

DenseEvolver::DenseEvolver(const MatrixXc& hamiltonian) : h_(hamiltonian) {
  require(h_.rows() == h_.cols(), ErrorCode::kDimensionMismatch, "Hamiltonian must be square");
  n_ = static_cast<int>(std::lround(std::log2(static_cast<double>(h_.rows()))));
  check_size(n_);
  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(h_);
  require(eig.info() == Eigen::Success, ErrorCode::kRuntime, "eigendecomposition failed");
  energies_ = eig.eigenvalues();
  vectors_ = eig.eigenvectors();
}

MatrixXc DenseEvolver::propagator(double t) const {
  const VectorXc phases = (-kI * t * energies_.cast<cplx>()).array().exp();
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

MatrixXc DenseEvolver::heisenberg(const MatrixXc& op, double t) const {
  require(op.rows() == h_.rows() && op.cols() == h_.cols(), ErrorCode::kDimensionMismatch,
          "operator shape does not match the Hamiltonian");
  const MatrixXc u = propagator(t);
  return u.adjoint() * op * u;
}

MatrixXc heisenberg_evolve(const MatrixXc& h, const MatrixXc& op, double t) {
  return DenseEvolver(h).heisenberg(op, t);
}

std::vector<cplx> pauli_coefficients(const MatrixXc& op) {
  const auto d = static_cast<std::size_t>(op.rows());
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(d))));
  check_size(n);
  std::vector<cplx> a(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      a[r * d + c] = op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  for (int q = 0; q < n; ++q) {
    const std::size_t col_bit = std::size_t{1} << bit_of(q, n);
    const std::size_t row_bit = col_bit << n;
    for (std::size_t idx = 0; idx < d * d; ++idx) {
      if (idx & (col_bit | row_bit)) continue;
      const cplx o00 = a[idx];
      const cplx o01 = a[idx | col_bit];
      const cplx o10 = a[idx | row_bit];
      const cplx o11 = a[idx | row_bit | col_bit];
      a[idx] = 0.5 * (o00 + o11);
      a[idx | col_bit] = 0.5 * (o01 + o10);
      a[idx | row_bit] = 0.5 * kI * (o01 - o10);
      a[idx | row_bit | col_bit] = 0.5 * (o00 - o11);
    }
  }
  std::vector<cplx> out(d * d);
  for (std::size_t idx = 0; idx < d * d; ++idx) {
    const std::size_t r = idx / d;
    const std::size_t c = idx % d;
    std::size_t code = 0;
    for (int q = 0; q < n; ++q) {
      const std::size_t rb = (r >> bit_of(q, n)) & 1u;
      const std::size_t cb = (c >> bit_of(q, n)) & 1u;
      code = code * 4 + (2 * rb + cb);
    }
    out[code] = a[idx];
  }
  return out;
}

std::vector<double> pauli_weight_distribution(const MatrixXc& op) {
  const std::vector<cplx> coeffs = pauli_coefficients(op);
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(op.rows()))));
  std::vector<double> weights(static_cast<std::size_t>(n) + 1, 0.0);
  double total = 0.0;
  for (std::size_t code = 0; code < coeffs.size(); ++code) {
    int w = 0;
    for (std::size_t c = code; c != 0; c /= 4) w += (c % 4) != 0;
    const double m = std::norm(coeffs[code]);
    weights[static_cast<std::size_t>(w)] += m;
    total += m;
  }
  require(total > 0.0, ErrorCode::kDomain, "weight distribution of a zero operator");
  for (double& x : weights) x /= total;
  return weights;
}

double size_weighted_lambda(std::span<const double> weights) {
  double out = 0.0;
  double factor = 1.0;
  for (double p : weights) {
    out += p * factor;
    factor /= 3.0;
  }
  return out;
}

double lambda_exact(const DenseEvolver& evolver, double t, std::span<const int> support,
                    LambdaMode mode, int samples, std::uint64_t seed) {
  const int n = evolver.qubits();
  for (int s : support) {
    require(s >= 0 && s < n, ErrorCode::kInvalidArgument, "support site out of range");
  }
  const auto k = static_cast<int>(support.size());
  if (k == 0) return 1.0;
  long long strings = 1;
  for (int i = 0; i < k; ++i) strings *= 3;
  const bool enumerate = mode == LambdaMode::kEnumerate ||
                         (mode == LambdaMode::kAuto && strings <= kEnumerateLimit);

  auto value_of = [&](const std::vector<int>& letters) {
    PauliString p;
    for (int i = 0; i < k; ++i) {
      p.support.emplace(support[static_cast<std::size_t>(i)],
                        static_cast<Pauli>(letters[static_cast<std::size_t>(i)] + 1));
    }
    const MatrixXc evolved = evolver.heisenberg(embed_pauli_string(p, n), t);
    return size_weighted_lambda(pauli_weight_distribution(evolved));
  };

  double sum = 0.0;
  std::vector<int> letters(static_cast<std::size_t>(k), 0);
  if (enumerate) {
    for (long long code = 0; code < strings; ++code) {
      long long c = code;
      for (int i = 0; i < k; ++i) {
        letters[static_cast<std::size_t>(i)] = static_cast<int>(c % 3);
        c /= 3;
      }
      sum += value_of(letters);
    }
    return sum / static_cast<double>(strings);
  }
  require(samples > 0, ErrorCode::kInvalidArgument, "sampled lambda needs samples > 0");
  StreamRng rng(seed, streams::kOracle);
  for (int m = 0; m < samples; ++m) {
    for (int& l : letters) l = static_cast<int>(rng.below(3));
    sum += value_of(letters);
  }
  return sum / samples;
}

MonteCarloValue lambda_mc_definition(const DenseEvolver& evolver, double t,
                                     const PauliString& op, int draws, StreamRng& rng) {
  require(draws >= 2, ErrorCode::kInvalidArgument, "Monte Carlo needs >= 2 draws");
  const int n = evolver.qubits();
  const MatrixXc back = evolver.propagator(t).adjoint();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int m = 0; m < draws; ++m) {
    const std::vector<int> v = random_layer(n, rng);
    const std::vector<int> u = random_layer(n, rng);
    VectorXc psi = basis_state(0, n);
    apply_layer(psi, u, n, true);
    psi = back * psi;
    apply_layer(psi, v, n, true);
    const double e = pauli_expectation(psi, op, n);
    sum += e * e;
    sum_sq += e * e * e * e;
  }
  MonteCarloValue out;
  out.mean = sum / draws;
  const double var = std::max(0.0, sum_sq / draws - out.mean * out.mean);
  out.stderr = std::sqrt(var / (draws - 1));
  return out;
}

void apply_one_site_dense(VectorXc& psi, const MatrixXc& gate, int site, int n) {
  const std::size_t bit = std::size_t{1} << bit_of(site, n);
  for (std::size_t x = 0; x < dim_of(n); ++x) {
    if (x & bit) continue;
    const cplx a = psi(static_cast<Eigen::Index>(x));
    const cplx b = psi(static_cast<Eigen::Index>(x | bit));
    psi(static_cast<Eigen::Index>(x)) = gate(0, 0) * a + gate(0, 1) * b;
    psi(static_cast<Eigen::Index>(x | bit)) = gate(1, 0) * a + gate(1, 1) * b;
  }
}

VectorXc ghz_dense(int n) {
  check_size(n);
  VectorXc psi = VectorXc::Zero(static_cast<Eigen::Index>(dim_of(n)));
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(static_cast<Eigen::Index>(dim_of(n) - 1)) = 1.0 / std::sqrt(2.0);
  return psi;
}

VectorXc zxz_dense(int n) {
  check_size(n);
  VectorXc psi = basis_state(0, n);
  for (int i = 0; i + 2 < n; ++i) {
    PauliString s;
    s.support = {{i, Pauli::kZ}, {i + 1, Pauli::kX}, {i + 2, Pauli::kZ}};
    psi = 0.5 * (psi + apply_pauli(psi, s, n));
  }
  const double nrm = psi.norm();
  require(nrm > 1e-12, ErrorCode::kDomain, "stabilizer projection annihilated the seed state");
  return psi / nrm;
}

std::vector<double> snapshot_probabilities(const VectorXc& psi, const DenseEvolver& evolver,
                                           double t, std::span<const int> v_layer,
                                           std::span<const int> u_layer) {
  const int n = evolver.qubits();
  VectorXc phi = psi;
  apply_layer(phi, v_layer, n, false);
  phi = evolver.propagator(t) * phi;
  apply_layer(phi, u_layer, n, false);
  std::vector<double> probs(static_cast<std::size_t>(phi.size()));
  for (Eigen::Index i = 0; i < phi.size(); ++i) probs[static_cast<std::size_t>(i)] = std::norm(phi(i));
  return probs;
}

std::vector<std::vector<double>> dense_snapshot_reference(
    const VectorXc& psi, const DenseEvolver& evolver, double t,
    std::span<const PauliString> observables, std::span<const double> lambdas, int draws,
    StreamRng& rng) {
  require(observables.size() == lambdas.size(), ErrorCode::kDimensionMismatch,
          "one lambda per observable is required");
  const int n = evolver.qubits();
  const MatrixXc forward = evolver.propagator(t);
  const MatrixXc back = forward.adjoint();
  std::vector<std::vector<double>> out(observables.size());
  for (auto& v : out) v.reserve(static_cast<std::size_t>(draws));
  for (int m = 0; m < draws; ++m) {
    const std::vector<int> v = random_layer(n, rng);
    const std::vector<int> u = random_layer(n, rng);
    VectorXc phi = psi;
    apply_layer(phi, v, n, false);
    phi = forward * phi;
    apply_layer(phi, u, n, false);
    double r = rng.uniform() * phi.squaredNorm();
    std::size_t b = 0;
    for (; b + 1 < dim_of(n); ++b) {
      const double p = std::norm(phi(static_cast<Eigen::Index>(b)));
      if (r < p) break;
      r -= p;
    }
    VectorXc chi = basis_state(b, n);
    apply_layer(chi, u, n, true);
    chi = back * chi;
    apply_layer(chi, v, n, true);
    for (std::size_t o = 0; o < observables.size(); ++o) {
      out[o].push_back(pauli_expectation(chi, observables[o], n) / lambdas[o]);
    }
  }
  return out;
}

}  // namespace mbls::oracle
