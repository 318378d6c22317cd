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

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mblshadow/linalg.hpp"

namespace mbls {

/// Signed Pauli string with sparse support; sites absent from `support`
/// carry the identity.
struct PauliString {
  std::map<int, Pauli> support;
  int sign = 1;

  int weight() const { return static_cast<int>(support.size()); }
  std::vector<int> sites() const;

  /// Parses "Z3 X4 Z5", "-Y0" or "I"; sites are zero-based.
  static PauliString parse(std::string_view text);
  std::string to_string() const;

  /// Z on `length` consecutive sites starting at `start`.
  static PauliString z_string(int start, int length);

  bool operator==(const PauliString&) const = default;
};

struct SignedPauli {
  Pauli pauli;
  int sign;
};

/// Single-qubit Clifford, stored modulo global phase.
struct CliffordGate {
  int index = 0;
  Eigen::Matrix2cd matrix;
  /// image[p - 1] = C P C^dag for P = X, Y, Z.
  std::array<SignedPauli, 3> image;
  int inverse = 0;

  SignedPauli conjugate(Pauli p) const;
};

inline constexpr int kCliffordCount = 24;

/// The 24 single-qubit Cliffords, identity first, in breadth-first order
/// over words in the Hadamard and phase gates.
const std::vector<CliffordGate>& clifford_group();
std::vector<CliffordGate> enumerate_cliffords();

/// Per-site layer[i] P_i layer[i]^dag for every site in the support.
PauliString conjugate_pauli_by_clifford_layer(const PauliString& p, std::span<const int> layer);

/// Layer of inverse elements.
std::vector<int> inverse_layer(std::span<const int> layer);

}  // namespace mbls
