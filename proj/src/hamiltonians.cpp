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

#include "mblshadow/hamiltonians.hpp"

#include <string>

#include "mblshadow/error.hpp"
#include "mblshadow/rng.hpp"

namespace mbls {

namespace {

MatrixXc two_site(Pauli a, Pauli b) { return kron(pauli_matrix(a), pauli_matrix(b)); }

// Weight of site i's field on each adjacent bond.
double field_share(int site, int n) { return (site == 0 || site == n - 1) ? 1.0 : 0.5; }

BondSchedule nearest_neighbour(int n, const std::vector<MatrixXc>& couplings,
                               std::span<const double> fields, Pauli field_axis) {
  BondSchedule out;
  out.n = n;
  out.local_dim = 2;
  const MatrixXc field_left = two_site(field_axis, Pauli::kI);
  const MatrixXc field_right = two_site(Pauli::kI, field_axis);
  for (int b = 0; b + 1 < n; ++b) {
    MatrixXc h = couplings[static_cast<std::size_t>(b)];
    h += field_share(b, n) * fields[static_cast<std::size_t>(b)] * field_left;
    h += field_share(b + 1, n) * fields[static_cast<std::size_t>(b) + 1] * field_right;
    out.bonds.push_back({b, std::move(h)});
  }
  return out;
}

}  // namespace

void XxzParams::validate() const {
  require(n >= 2, ErrorCode::kInvalidArgument, "XXZ chain needs N >= 2");
  require(w >= 0.0, ErrorCode::kInvalidArgument, "disorder width W must be >= 0");
}

void DqimParams::validate() const {
  require(n >= 2, ErrorCode::kInvalidArgument, "Ising chain needs N >= 2");
  require(delta_j >= 0.0, ErrorCode::kInvalidArgument, "deltaJ must be >= 0");
  require(fields.empty() || static_cast<int>(fields.size()) == n,
          ErrorCode::kDimensionMismatch, "transverse fields must have length N");
}

std::vector<double> sample_disorder(const XxzParams& params) {
  params.validate();
  StreamRng rng(params.seed, streams::kDisorder);
  std::vector<double> h(static_cast<std::size_t>(params.n));
  for (double& x : h) x = rng.uniform(-params.w, params.w);
  return h;
}

BondSchedule build_xxz_bonds(const XxzParams& params, std::span<const double> fields) {
  params.validate();
  require(static_cast<int>(fields.size()) == params.n, ErrorCode::kDimensionMismatch,
          "field list length " + std::to_string(fields.size()) + " != N");
  const MatrixXc coupling =
      params.j * (two_site(Pauli::kX, Pauli::kX) + two_site(Pauli::kY, Pauli::kY) +
                  params.delta * two_site(Pauli::kZ, Pauli::kZ));
  std::vector<MatrixXc> couplings(static_cast<std::size_t>(params.n - 1), coupling);
  return nearest_neighbour(params.n, couplings, fields, Pauli::kZ);
}

std::vector<double> sample_dqim_couplings(const DqimParams& params) {
  params.validate();
  StreamRng rng(params.seed, streams::kCouplings);
  std::vector<double> j(static_cast<std::size_t>(params.n - 1));
  for (double& x : j) x = rng.uniform(params.j - params.delta_j, params.j + params.delta_j);
  return j;
}

BondSchedule build_dqim_bonds(const DqimParams& params) {
  params.validate();
  const std::vector<double> j = sample_dqim_couplings(params);
  std::vector<MatrixXc> couplings;
  couplings.reserve(j.size());
  const MatrixXc zz = two_site(Pauli::kZ, Pauli::kZ);
  for (double jb : j) couplings.push_back(jb * zz);
  std::vector<double> fields = params.fields;
  if (fields.empty()) fields.assign(static_cast<std::size_t>(params.n), 0.0);
  return nearest_neighbour(params.n, couplings, fields, Pauli::kX);
}

TrotterStep trotterize(const BondSchedule& schedule, double tau, TimeDirection direction) {
  require(tau > 0.0, ErrorCode::kInvalidArgument, "Trotter step tau must be > 0");
  const cplx sign = direction == TimeDirection::kForward ? -kI : kI;
  TrotterStep step;
  step.tau = tau;
  step.direction = direction;

  std::vector<const BondTerm*> even;
  std::vector<const BondTerm*> odd;
  for (const BondTerm& term : schedule.bonds) (term.bond % 2 == 0 ? even : odd).push_back(&term);

  auto emit = [&](const std::vector<const BondTerm*>& group, double dt, bool ascending) {
    if (ascending) {
      for (const BondTerm* t : group) step.gates.push_back({t->bond, expm_hermitian(t->matrix, sign * dt)});
    } else {
      for (auto it = group.rbegin(); it != group.rend(); ++it) {
        step.gates.push_back({(*it)->bond, expm_hermitian((*it)->matrix, sign * dt)});
      }
    }
  };
  emit(even, tau / 2.0, true);
  emit(odd, tau, false);
  emit(even, tau / 2.0, true);
  return step;
}

MatrixXc lift_bond_term(const MatrixXc& h) {
  require(h.rows() == 4 && h.cols() == 4, ErrorCode::kDimensionMismatch,
          "doubled lift expects a two-qubit bond term");
  const MatrixXc ht = h.transpose();
  const MatrixXc* copy_term[4] = {&h, &ht, &h, &ht};
  const double copy_sign[4] = {1.0, -1.0, 1.0, -1.0};

  MatrixXc out = MatrixXc::Zero(256, 256);
  for (int row = 0; row < 256; ++row) {
    const int a = row >> 4;
    const int b = row & 15;
    for (int col = 0; col < 256; ++col) {
      const int ap = col >> 4;
      const int bp = col & 15;
      cplx value{};
      for (int c = 0; c < 4; ++c) {
        const int shift = 3 - c;
        const int others = 15 & ~(1 << shift);
        if ((a & others) != (ap & others) || (b & others) != (bp & others)) continue;
        const int x = (((a >> shift) & 1) << 1) | ((b >> shift) & 1);
        const int y = (((ap >> shift) & 1) << 1) | ((bp >> shift) & 1);
        value += copy_sign[c] * (*copy_term[c])(x, y);
      }
      out(row, col) = value;
    }
  }
  return out;
}

BondSchedule build_doubled_bonds(const BondSchedule& schedule) {
  require(schedule.local_dim == 2, ErrorCode::kDimensionMismatch,
          "doubled lift expects qubit bond terms");
  BondSchedule out;
  out.n = schedule.n;
  out.local_dim = 16;
  for (const BondTerm& term : schedule.bonds) out.bonds.push_back({term.bond, lift_bond_term(term.matrix)});
  return out;
}

}  // namespace mbls
