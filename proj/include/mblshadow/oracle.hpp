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

#include <span>
#include <vector>

#include "mblshadow/hamiltonians.hpp"
#include "mblshadow/linalg.hpp"
#include "mblshadow/pauli.hpp"
#include "mblshadow/rng.hpp"

namespace mbls::oracle {

/// Dense operators are capped at this many qubits.
inline constexpr int kMaxQubits = 10;

void check_size(int n);

/// Kronecker embedding of the bond terms (site 0 most significant).
MatrixXc dense_hamiltonian(const BondSchedule& schedule);

/// Direct sum of embedded Pauli strings for the XXZ chain; independent of the
/// bond decomposition.
MatrixXc dense_xxz(const XxzParams& params, std::span<const double> fields);

/// Direct Pauli-sum Ising chain sum J_b Z_b Z_{b+1} + sum h_i X_i.
MatrixXc dense_dqim(int n, std::span<const double> couplings, std::span<const double> fields);

MatrixXc embed_pauli_string(const PauliString& p, int n);
MatrixXc embed_one_site(const MatrixXc& op, int site, int n);

/// Exact propagators from one cached eigendecomposition of H.
class DenseEvolver {
 public:
  explicit DenseEvolver(const MatrixXc& hamiltonian);

  int qubits() const { return n_; }
  const MatrixXc& hamiltonian() const { return h_; }
  /// exp(-i H t).
  MatrixXc propagator(double t) const;
  /// exp(i H t) O exp(-i H t).
  MatrixXc heisenberg(const MatrixXc& op, double t) const;

 private:
  int n_;
  MatrixXc h_;
  Eigen::VectorXd energies_;
  MatrixXc vectors_;
};

MatrixXc heisenberg_evolve(const MatrixXc& h, const MatrixXc& op, double t);

/// Pauli-basis coefficients c_P = tr(P O) / 2^N; index encodes one Pauli per
/// qubit in base 4 (site 0 most significant, I=0, X=1, Y=2, Z=3).
std::vector<cplx> pauli_coefficients(const MatrixXc& op);

/// P(n) for n = 0..N.
std::vector<double> pauli_weight_distribution(const MatrixXc& op);

/// sum_n P(n) 3^-n.
double size_weighted_lambda(std::span<const double> weights);

enum class LambdaMode {
  kAuto,
  kEnumerate,
  kSample,
};

/// Enumeration threshold on the number of strings 3^k.
inline constexpr int kEnumerateLimit = 729;

/// Mean over Pauli strings that are non-identity on every site of `support`
/// of sum_n P(n) 3^-n for the Heisenberg-evolved string.
double lambda_exact(const DenseEvolver& evolver, double t, std::span<const int> support,
                    LambdaMode mode = LambdaMode::kAuto, int samples = 2000,
                    std::uint64_t seed = 0);

struct MonteCarloValue {
  double mean = 0.0;
  double stderr = 0.0;
};

/// E_{u,v}[<0|U O U^dag|0>^2] with U = (x u_i) exp(-iHt) (x v_j) and u, v drawn
/// from the single-qubit Clifford group.
MonteCarloValue lambda_mc_definition(const DenseEvolver& evolver, double t,
                                     const PauliString& op, int draws, StreamRng& rng);

/// Statevector helpers (site 0 most significant bit).
void apply_one_site_dense(VectorXc& psi, const MatrixXc& gate, int site, int n);
VectorXc ghz_dense(int n);
VectorXc zxz_dense(int n);

/// Born probabilities of all 2^N outcomes after (x u) exp(-iHt) (x v).
std::vector<double> snapshot_probabilities(const VectorXc& psi, const DenseEvolver& evolver,
                                           double t, std::span<const int> v_layer,
                                           std::span<const int> u_layer);

/// Exact-pipeline single-snapshot estimates lambda_O^-1 <b|U O U^dag|b> for
/// M fresh draws; result[o][m] for observable o and draw m.
std::vector<std::vector<double>> dense_snapshot_reference(
    const VectorXc& psi, const DenseEvolver& evolver, double t,
    std::span<const PauliString> observables, std::span<const double> lambdas, int draws,
    StreamRng& rng);

}  // namespace mbls::oracle
