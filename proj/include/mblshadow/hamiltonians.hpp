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
#include <span>
#include <vector>

#include "mblshadow/linalg.hpp"
#include "mblshadow/mps.hpp"

namespace mbls {

/// Random-field XXZ chain J sum(XX + YY + Delta ZZ) + sum h_i Z_i, h_i ~ U[-W, W].
struct XxzParams {
  int n = 2;
  double j = 1.0;
  double delta = 1.0;
  double w = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Disordered transverse-field Ising chain sum J_i Z_i Z_{i+1} + sum h_i X_i,
/// with J_i ~ U[J - deltaJ, J + deltaJ].
struct DqimParams {
  int n = 2;
  double j = 1.0;
  double delta_j = 0.0;
  std::vector<double> fields;
  std::uint64_t seed = 0;

  void validate() const;
};

struct BondTerm {
  int bond;
  MatrixXc matrix;
};

/// Nearest-neighbour decomposition H = sum_b h_b with open boundaries.
struct BondSchedule {
  int n = 0;
  int local_dim = 2;
  std::vector<BondTerm> bonds;
};

enum class TimeDirection {
  kForward,   // exp(-i H tau)
  kBackward,  // exp(+i H tau)
};

/// Gates of one second-order step: even bonds (tau/2), odd bonds (tau),
/// even bonds (tau/2).
struct TrotterStep {
  std::vector<TwoSiteGate> gates;
  double tau = 0.0;
  int order = 2;
  TimeDirection direction = TimeDirection::kForward;
};

std::vector<double> sample_disorder(const XxzParams& params);

/// On-site fields are split evenly between the bonds touching each site, so
/// chain ends carry their full field on their single bond.
BondSchedule build_xxz_bonds(const XxzParams& params, std::span<const double> fields);

std::vector<double> sample_dqim_couplings(const DqimParams& params);
BondSchedule build_dqim_bonds(const DqimParams& params);

TrotterStep trotterize(const BondSchedule& schedule, double tau,
                       TimeDirection direction = TimeDirection::kForward);

/// Lifts every bond term h to h(1) - h(2)^T + h(3) - h(4)^T on the 16-dim
/// per-site space of four interleaved copies (copy index fastest; copy 1 is
/// the most significant bit of the local index).
BondSchedule build_doubled_bonds(const BondSchedule& schedule);

/// Lifts one d^2 x d^2 bond term to the doubled space.
MatrixXc lift_bond_term(const MatrixXc& h);

}  // namespace mbls
