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

#include <optional>
#include <span>
#include <vector>

#include "mblshadow/linalg.hpp"
#include "mblshadow/rng.hpp"

namespace mbls {

/// Bond-dimension cap and discarded-weight threshold used after every SVD.
struct TruncationPolicy {
  int chi_max = 64;
  /// Largest relative squared-singular-value weight that may be discarded.
  double cutoff = 0.0;

  void validate() const;
  static TruncationPolicy exact() { return {1 << 30, 0.0}; }
};

/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kSingularValueFloor = 1e-14;

struct TruncationReport {
  /// Sum over the applied gates of the relative discarded weight.
  double discarded_weight = 0.0;
  /// Largest single-gate discarded weight.
  double max_discarded_weight = 0.0;
  int max_bond_dim = 1;
};

/// Rank-3 site tensor, indexed (left bond, physical, right bond), row-major.
class SiteTensor {
 public:
  SiteTensor() = default;
  SiteTensor(int left, int phys, int right);

  int left() const { return left_; }
  int phys() const { return phys_; }
  int right() const { return right_; }

  cplx& operator()(int a, int s, int b) { return data_[index(a, s, b)]; }
  const cplx& operator()(int a, int s, int b) const { return data_[index(a, s, b)]; }

  /// (left * phys) x right view.
  Eigen::Map<RowMatrixXc> grouped_left() { return {data_.data(), left_ * phys_, right_}; }
  Eigen::Map<const RowMatrixXc> grouped_left() const {
    return {data_.data(), left_ * phys_, right_};
  }
  /// left x (phys * right) view.
  Eigen::Map<RowMatrixXc> grouped_right() { return {data_.data(), left_, phys_ * right_}; }
  Eigen::Map<const RowMatrixXc> grouped_right() const {
    return {data_.data(), left_, phys_ * right_};
  }
  /// left x right slice for one physical index.
  Eigen::Map<const RowMatrixXc, 0, Eigen::OuterStride<>> slice(int s) const {
    return {data_.data() + static_cast<std::ptrdiff_t>(s) * right_, left_, right_,
            Eigen::OuterStride<>(phys_ * right_)};
  }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

 private:
  std::size_t index(int a, int s, int b) const {
    return (static_cast<std::size_t>(a) * phys_ + s) * right_ + b;
  }

  int left_ = 1;
  int phys_ = 1;
  int right_ = 1;
  std::vector<cplx, Eigen::aligned_allocator<cplx>> data_ = {1.0};
};

struct OneSiteOperator {
  int site;
  MatrixXc matrix;
};

/// Gate on sites (bond, bond + 1); the matrix acts on the d^2 space with the
/// left site as the more significant index.
struct TwoSiteGate {
  int bond;
  MatrixXc matrix;
};

/// Open-boundary matrix product state. The represented vector is
/// exp(log_scale) times the contraction of the site tensors.
class Mps {
 public:
  /// Bond-dimension-one state from per-site vectors of a common length.
  static Mps product_state(std::span<const VectorXc> local_vectors);
  /// Takes ownership of explicitly built tensors; validates shapes.
  static Mps from_tensors(std::vector<SiteTensor> tensors, double log_scale = 0.0);

  int size() const { return static_cast<int>(tensors_.size()); }
  int phys_dim() const { return phys_dim_; }
  /// N + 1 entries including the two trivial boundary bonds.
  std::vector<int> bond_dims() const;
  int max_bond_dim() const;
  std::optional<int> ortho_center() const { return center_; }
  double log_scale() const { return log_scale_; }
  const SiteTensor& site(int i) const { return tensors_.at(static_cast<std::size_t>(i)); }

  /// Moves the orthogonality center to `center`, leaving the tensors on the
  /// left left-isometric and those on the right right-isometric. The center
  /// tensor is normalized and its norm moved into log_scale.
  void canonicalize(int center);

  /// Applies a gate acting on `count` consecutive sites starting at `first`
  /// (matrix of dimension d^count), re-splitting with truncated SVDs.
  /// With `center_left` the orthogonality center ends on `first`, otherwise on
  /// the last touched site.
  TruncationReport apply_gate(int first, int count, const MatrixXc& gate,
                              const TruncationPolicy& policy, bool center_left = false);

  TruncationReport apply_two_site_gate(const TwoSiteGate& gate, const TruncationPolicy& policy,
                                       bool center_left = false) {
    return apply_gate(gate.bond, 2, gate.matrix, policy, center_left);
  }

  void apply_one_site(const OneSiteOperator& op);

  /// Sets log_scale so that the state has unit norm.
  void normalize();

  /// Largest deviation from the isometry condition over all non-center sites.
  double isometry_defect() const;

 private:
  void left_orthonormalize(int i);
  void right_orthonormalize(int i);
  void absorb_center_norm(int i);

  std::vector<SiteTensor> tensors_;
  int phys_dim_ = 2;
  std::optional<int> center_;
  double log_scale_ = 0.0;
};

/// <a|b>, including both log_scale factors.
cplx inner(const Mps& a, const Mps& b);
double norm_squared(const Mps& a);

/// <psi| prod_i op_i |psi> / <psi|psi> for operators on distinct sites.
cplx expect_product_operator(const Mps& mps, std::span<const OneSiteOperator> ops);

/// Draws a configuration with Born probability by sequential conditional
/// sampling from the left end.
std::vector<int> sample_bitstring(const Mps& mps, StreamRng& rng);

/// Applies gates in order; the sweep direction for each gate follows the
/// position of the next gate so the orthogonality center travels minimally.
TruncationReport apply_gate_sequence(Mps& mps, std::span<const TwoSiteGate> gates,
                                     const TruncationPolicy& policy);

/// Dense amplitude vector (site 0 most significant). Small states only.
VectorXc to_dense(const Mps& mps);

}  // namespace mbls
