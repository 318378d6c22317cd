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

#include "mblshadow/pauli.hpp"

#include <cctype>
#include <cmath>
#include <deque>
#include <fmt/format.h>

#include "mblshadow/error.hpp"

namespace mbls {

namespace {

// Fixes the global phase so the first entry with |z| > 1e-9 (column-major)
// is real and positive.
Eigen::Matrix2cd canonical_phase(const Eigen::Matrix2cd& m) {
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      const cplx z = m(i, j);
      if (std::abs(z) > 1e-9) return m * (std::abs(z) / z);
    }
  }
  return m;
}

SignedPauli identify(const Eigen::Matrix2cd& m) {
  for (Pauli p : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
    const Eigen::Matrix2cd ref = pauli_matrix(p);
    if ((m - ref).cwiseAbs().maxCoeff() < 1e-9) return {p, 1};
    if ((m + ref).cwiseAbs().maxCoeff() < 1e-9) return {p, -1};
  }
  throw Error(ErrorCode::kRuntime, "conjugation did not produce a signed Pauli");
}

char pauli_letter(Pauli p) {
  switch (p) {
    case Pauli::kI: return 'I';
    case Pauli::kX: return 'X';
    case Pauli::kY: return 'Y';
    case Pauli::kZ: return 'Z';
  }
  return '?';
}

}  // namespace

std::vector<int> PauliString::sites() const {
  std::vector<int> out;
  out.reserve(support.size());
  for (const auto& [site, p] : support) out.push_back(site);
  return out;
}

PauliString PauliString::parse(std::string_view text) {
  PauliString out;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_space();
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    out.sign = text[i] == '-' ? -1 : 1;
    ++i;
    skip_space();
  }
  if (i < text.size() && text[i] == 'I') {
    ++i;
    skip_space();
    require(i == text.size(), ErrorCode::kInvalidArgument,
            fmt::format("unexpected text after identity in '{}'", text));
    return out;
  }
  require(i < text.size(), ErrorCode::kInvalidArgument, "empty Pauli string");
  while (i < text.size()) {
    Pauli p;
    switch (text[i]) {
      case 'X': p = Pauli::kX; break;
      case 'Y': p = Pauli::kY; break;
      case 'Z': p = Pauli::kZ; break;
      default:
        throw Error(ErrorCode::kInvalidArgument,
                    fmt::format("bad Pauli letter '{}' in '{}'", text[i], text));
    }
    ++i;
    const std::size_t digits = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    require(i > digits, ErrorCode::kInvalidArgument,
            fmt::format("missing site index in '{}'", text));
    const int site = std::stoi(std::string(text.substr(digits, i - digits)));
    require(out.support.emplace(site, p).second, ErrorCode::kInvalidArgument,
            fmt::format("site {} repeated in '{}'", site, text));
    skip_space();
  }
  return out;
}

std::string PauliString::to_string() const {
  std::string out = sign < 0 ? "-" : "";
  if (support.empty()) return out + "I";
  bool first = true;
  for (const auto& [site, p] : support) {
    if (!first) out += ' ';
    first = false;
    out += fmt::format("{}{}", pauli_letter(p), site);
  }
  return out;
}

PauliString PauliString::z_string(int start, int length) {
  PauliString out;
  for (int i = start; i < start + length; ++i) out.support.emplace(i, Pauli::kZ);
  return out;
}

SignedPauli CliffordGate::conjugate(Pauli p) const {
  if (p == Pauli::kI) return {Pauli::kI, 1};
  return image[static_cast<std::size_t>(p) - 1];
}

std::vector<CliffordGate> enumerate_cliffords() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd hadamard;
  hadamard << r, r, r, -r;
  Eigen::Matrix2cd phase;
  phase << 1.0, 0.0, 0.0, kI;
  const std::array<Eigen::Matrix2cd, 2> generators = {hadamard, phase};

  std::vector<Eigen::Matrix2cd> found = {Eigen::Matrix2cd::Identity()};
  std::deque<std::size_t> frontier = {0};
  while (!frontier.empty()) {
    const Eigen::Matrix2cd current = found[frontier.front()];
    frontier.pop_front();
    for (const Eigen::Matrix2cd& g : generators) {
      const Eigen::Matrix2cd next = canonical_phase(g * current);
      bool seen = false;
      for (const Eigen::Matrix2cd& m : found) {
        if ((m - next).cwiseAbs().maxCoeff() < 1e-9) {
          seen = true;
          break;
        }
      }
      if (!seen) {
        found.push_back(next);
        frontier.push_back(found.size() - 1);
      }
    }
  }
  require(found.size() == kCliffordCount, ErrorCode::kRuntime,
          "Clifford closure did not produce 24 elements");

  std::vector<CliffordGate> out(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    CliffordGate& c = out[i];
    c.index = static_cast<int>(i);
    c.matrix = found[i];
    for (Pauli p : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
      const Eigen::Matrix2cd pm = pauli_matrix(p);
      c.image[static_cast<std::size_t>(p) - 1] = identify(c.matrix * pm * c.matrix.adjoint());
    }
  }
  for (CliffordGate& c : out) {
    for (const CliffordGate& d : out) {
      const Eigen::Matrix2cd prod = canonical_phase(d.matrix * c.matrix);
      if ((prod - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-9) {
        c.inverse = d.index;
        break;
      }
    }
  }
  return out;
}

const std::vector<CliffordGate>& clifford_group() {
  static const std::vector<CliffordGate> group = enumerate_cliffords();
  return group;
}

PauliString conjugate_pauli_by_clifford_layer(const PauliString& p, std::span<const int> layer) {
  const auto& group = clifford_group();
  PauliString out;
  out.sign = p.sign;
  for (const auto& [site, pauli] : p.support) {
    require(site >= 0 && site < static_cast<int>(layer.size()), ErrorCode::kInvalidArgument,
            fmt::format("Pauli site {} outside the Clifford layer", site));
    const int idx = layer[static_cast<std::size_t>(site)];
    require(idx >= 0 && idx < kCliffordCount, ErrorCode::kInvalidArgument,
            "Clifford index out of range");
    const SignedPauli img = group[static_cast<std::size_t>(idx)].conjugate(pauli);
    out.sign *= img.sign;
    out.support.emplace(site, img.pauli);
  }
  return out;
}

std::vector<int> inverse_layer(std::span<const int> layer) {
  const auto& group = clifford_group();
  std::vector<int> out;
  out.reserve(layer.size());
  for (int idx : layer) out.push_back(group.at(static_cast<std::size_t>(idx)).inverse);
  return out;
}

}  // namespace mbls
