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

#include "mblshadow/mps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "mblshadow/error.hpp"

namespace mbls {

namespace {

int checked_power(int base, int exponent) {
  long long value = 1;
  for (int i = 0; i < exponent; ++i) {
    value *= base;
    require(value < (1ll << 31), ErrorCode::kDimensionMismatch, "gate dimension overflow");
  }
  return static_cast<int>(value);
}

struct KeptRank {
  int keep = 1;
  double discarded = 0.0;
};

KeptRank choose_rank(const Eigen::VectorXd& s, const TruncationPolicy& policy) {
  KeptRank out;
  const auto n = static_cast<int>(s.size());
  if (n == 0) return out;
  const double total = s.squaredNorm();
  if (total == 0.0) return out;

  const double floor = kSingularValueFloor * s(0);
  int keep = 0;
  while (keep < n && s(keep) > floor) ++keep;
  keep = std::max(keep, 1);

  double dropped = 0.0;
  while (keep > 1) {
    const double w = s(keep - 1) * s(keep - 1);
    if (dropped + w > policy.cutoff * total) break;
    dropped += w;
    --keep;
  }
  keep = std::min(keep, policy.chi_max);

  double discarded = 0.0;
  for (int i = keep; i < n; ++i) {
    if (s(i) > floor) discarded += s(i) * s(i);
  }
  out.keep = keep;
  out.discarded = discarded / total;
  return out;
}

// Contraction of <a|b> without the log_scale factors.
cplx inner_raw(const Mps& a, const Mps& b) {
  MatrixXc env = MatrixXc::Ones(1, 1);
  for (int i = 0; i < a.size(); ++i) {
    const SiteTensor& ta = a.site(i);
    const SiteTensor& tb = b.site(i);
    MatrixXc next = MatrixXc::Zero(ta.right(), tb.right());
    for (int s = 0; s < ta.phys(); ++s) {
      next.noalias() += ta.slice(s).adjoint() * (env * tb.slice(s));
    }
    env = std::move(next);
  }
  return env(0, 0);
}

}  // namespace

void TruncationPolicy::validate() const {
  require(chi_max >= 1, ErrorCode::kInvalidArgument, "chi_max must be >= 1");
  require(cutoff >= 0.0 && cutoff < 1.0, ErrorCode::kInvalidArgument,
          "cutoff must lie in [0, 1)");
}

SiteTensor::SiteTensor(int left, int phys, int right)
    : left_(left),
      phys_(phys),
      right_(right),
      data_(static_cast<std::size_t>(left) * phys * right, cplx{0.0, 0.0}) {}

Mps Mps::product_state(std::span<const VectorXc> local_vectors) {
  require(!local_vectors.empty(), ErrorCode::kInvalidArgument, "product state needs >= 1 site");
  const auto d = static_cast<int>(local_vectors.front().size());
  require(d >= 2, ErrorCode::kDimensionMismatch, "local dimension must be >= 2");
  Mps out;
  out.phys_dim_ = d;
  bool all_nonzero = true;
  for (const VectorXc& v : local_vectors) {
    require(v.size() == d, ErrorCode::kDimensionMismatch,
            "product state vectors have mixed lengths");
    SiteTensor t(1, d, 1);
    const double nrm = v.norm();
    if (nrm > 0.0) {
      for (int s = 0; s < d; ++s) t(0, s, 0) = v(s) / nrm;
      out.log_scale_ += std::log(nrm);
    } else {
      all_nonzero = false;
    }
    out.tensors_.push_back(std::move(t));
  }
  if (all_nonzero) {
    out.center_ = 0;
  } else {
    // Zero state: keep explicit zeros and no gauge.
    out.log_scale_ = 0.0;
    for (std::size_t i = 0; i < local_vectors.size(); ++i) {
      for (int s = 0; s < d; ++s) out.tensors_[i](0, s, 0) = local_vectors[i](s);
    }
  }
  return out;
}

Mps Mps::from_tensors(std::vector<SiteTensor> tensors, double log_scale) {
  require(!tensors.empty(), ErrorCode::kInvalidArgument, "MPS needs >= 1 site");
  const int d = tensors.front().phys();
  require(tensors.front().left() == 1 && tensors.back().right() == 1,
          ErrorCode::kDimensionMismatch, "boundary bond dimensions must be 1");
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    require(tensors[i].phys() == d, ErrorCode::kDimensionMismatch,
            "physical dimension differs between sites");
    if (i + 1 < tensors.size()) {
      require(tensors[i].right() == tensors[i + 1].left(), ErrorCode::kDimensionMismatch,
              "bond dimension mismatch between sites " + std::to_string(i) + " and " +
                  std::to_string(i + 1));
    }
  }
  Mps out;
  out.tensors_ = std::move(tensors);
  out.phys_dim_ = d;
  out.log_scale_ = log_scale;
  return out;
}

std::vector<int> Mps::bond_dims() const {
  std::vector<int> dims;
  dims.reserve(tensors_.size() + 1);
  dims.push_back(tensors_.front().left());
  for (const SiteTensor& t : tensors_) dims.push_back(t.right());
  return dims;
}

int Mps::max_bond_dim() const {
  const auto dims = bond_dims();
  return *std::max_element(dims.begin(), dims.end());
}

void Mps::left_orthonormalize(int i) {
  SiteTensor& t = tensors_[static_cast<std::size_t>(i)];
  const MatrixXc m = t.grouped_left();
  Eigen::HouseholderQR<MatrixXc> qr(m);
  const auto k = std::min(m.rows(), m.cols());
  const MatrixXc q = qr.householderQ() * MatrixXc::Identity(m.rows(), k);
  const MatrixXc r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  SiteTensor left(t.left(), t.phys(), static_cast<int>(k));
  left.grouped_left() = q;
  SiteTensor& next = tensors_[static_cast<std::size_t>(i) + 1];
  SiteTensor merged(static_cast<int>(k), next.phys(), next.right());
  merged.grouped_right() = r * next.grouped_right();
  t = std::move(left);
  next = std::move(merged);
}

void Mps::right_orthonormalize(int i) {
  SiteTensor& t = tensors_[static_cast<std::size_t>(i)];
  const MatrixXc m = t.grouped_right().adjoint();
  Eigen::HouseholderQR<MatrixXc> qr(m);
  const auto k = std::min(m.rows(), m.cols());
  const MatrixXc q = qr.householderQ() * MatrixXc::Identity(m.rows(), k);
  const MatrixXc r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  SiteTensor right(static_cast<int>(k), t.phys(), t.right());
  right.grouped_right() = q.adjoint();
  SiteTensor& prev = tensors_[static_cast<std::size_t>(i) - 1];
  SiteTensor merged(prev.left(), prev.phys(), static_cast<int>(k));
  merged.grouped_left() = prev.grouped_left() * r.adjoint();
  t = std::move(right);
  prev = std::move(merged);
}

void Mps::absorb_center_norm(int i) {
  SiteTensor& t = tensors_[static_cast<std::size_t>(i)];
  const double nrm = t.grouped_left().norm();
  if (nrm > 0.0) {
    t.grouped_left() /= nrm;
    log_scale_ += std::log(nrm);
  }
}

void Mps::canonicalize(int center) {
  require(center >= 0 && center < size(), ErrorCode::kInvalidArgument,
          "canonicalization center out of range");
  if (center_) {
    for (int i = *center_; i < center; ++i) left_orthonormalize(i);
    for (int i = *center_; i > center; --i) right_orthonormalize(i);
  } else {
    for (int i = 0; i < center; ++i) left_orthonormalize(i);
    for (int i = size() - 1; i > center; --i) right_orthonormalize(i);
  }
  absorb_center_norm(center);
  center_ = center;
}

TruncationReport Mps::apply_gate(int first, int count, const MatrixXc& gate,
                                 const TruncationPolicy& policy, bool center_left) {
  require(count >= 1, ErrorCode::kInvalidArgument, "gate must act on >= 1 site");
  require(first >= 0 && first + count <= size(), ErrorCode::kInvalidArgument,
          "gate sites out of range");
  const int d = phys_dim_;
  const int span_dim = checked_power(d, count);
  require(gate.rows() == span_dim && gate.cols() == span_dim, ErrorCode::kDimensionMismatch,
          "gate dimension does not match d^" + std::to_string(count));
  policy.validate();
  const int last = first + count - 1;

  if (!center_ || *center_ < first) {
    canonicalize(first);
  } else if (*center_ > last) {
    canonicalize(last);
  }

  // theta: (left, d^count, right), row-major.
  RowMatrixXc theta = tensors_[static_cast<std::size_t>(first)].grouped_left();
  for (int i = first + 1; i <= last; ++i) {
    const SiteTensor& t = tensors_[static_cast<std::size_t>(i)];
    RowMatrixXc next = theta * t.grouped_right();
    theta = Eigen::Map<RowMatrixXc>(next.data(), next.rows() * d, t.right());
  }
  const int left_dim = tensors_[static_cast<std::size_t>(first)].left();
  const int right_dim = tensors_[static_cast<std::size_t>(last)].right();
  for (int a = 0; a < left_dim; ++a) {
    Eigen::Map<RowMatrixXc> block(theta.data() + static_cast<std::ptrdiff_t>(a) * span_dim *
                                                     right_dim,
                                  span_dim, right_dim);
    RowMatrixXc updated = gate * block;
    block = updated;
  }

  TruncationReport report;
  int bond_left = left_dim;
  int remaining = span_dim;
  for (int i = first; i < last; ++i) {
    remaining /= d;
    const MatrixXc mat =
        Eigen::Map<RowMatrixXc>(theta.data(), bond_left * d, remaining * right_dim);
    const Svd dec = svd(mat);
    const KeptRank kept = choose_rank(dec.s, policy);
    report.discarded_weight += kept.discarded;
    report.max_discarded_weight = std::max(report.max_discarded_weight, kept.discarded);
    const int keep = kept.keep;

    const bool final_split = (i + 1 == last);
    SiteTensor left(bond_left, d, keep);
    RowMatrixXc rest(keep, remaining * right_dim);
    if (final_split && center_left) {
      left.grouped_left() = dec.u.leftCols(keep) * dec.s.head(keep).cast<cplx>().asDiagonal();
      rest = dec.vh.topRows(keep);
    } else {
      left.grouped_left() = dec.u.leftCols(keep);
      rest = dec.s.head(keep).cast<cplx>().asDiagonal() * dec.vh.topRows(keep);
    }
    tensors_[static_cast<std::size_t>(i)] = std::move(left);
    theta = Eigen::Map<RowMatrixXc>(rest.data(), keep * remaining, right_dim);
    bond_left = keep;
  }
  SiteTensor tail(bond_left, d, right_dim);
  tail.grouped_left() = theta;
  tensors_[static_cast<std::size_t>(last)] = std::move(tail);

  const int new_center = (count > 1 && center_left) ? last - 1 : last;
  center_ = new_center;
  absorb_center_norm(new_center);
  if (count > 2 && center_left) canonicalize(first);
  report.max_bond_dim = max_bond_dim();
  return report;
}

void Mps::apply_one_site(const OneSiteOperator& op) {
  require(op.site >= 0 && op.site < size(), ErrorCode::kInvalidArgument,
          "operator site out of range");
  require(op.matrix.rows() == phys_dim_ && op.matrix.cols() == phys_dim_,
          ErrorCode::kDimensionMismatch, "one-site operator dimension mismatch");
  SiteTensor& t = tensors_[static_cast<std::size_t>(op.site)];
  SiteTensor out(t.left(), t.phys(), t.right());
  for (int a = 0; a < t.left(); ++a) {
    for (int s = 0; s < t.phys(); ++s) {
      for (int u = 0; u < t.phys(); ++u) {
        const cplx w = op.matrix(s, u);
        if (w == cplx{}) continue;
        for (int b = 0; b < t.right(); ++b) out(a, s, b) += w * t(a, u, b);
      }
    }
  }
  t = std::move(out);
  if (center_ && *center_ != op.site && unitarity_defect(op.matrix) > 1e-12) center_.reset();
}

void Mps::normalize() {
  const double raw = inner_raw(*this, *this).real();
  require(raw > 0.0, ErrorCode::kDomain, "cannot normalize a zero-norm state");
  log_scale_ = -0.5 * std::log(raw);
}

double Mps::isometry_defect() const {
  if (!center_) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int i = 0; i < size(); ++i) {
    const SiteTensor& t = tensors_[static_cast<std::size_t>(i)];
    if (i < *center_) {
      const MatrixXc m = t.grouped_left();
      worst = std::max(worst, unitarity_defect(m));
    } else if (i > *center_) {
      const MatrixXc m = t.grouped_right().adjoint();
      worst = std::max(worst, unitarity_defect(m));
    }
  }
  return worst;
}

cplx inner(const Mps& a, const Mps& b) {
  require(a.size() == b.size() && a.phys_dim() == b.phys_dim(), ErrorCode::kDimensionMismatch,
          "inner product of states with different shapes");
  return inner_raw(a, b) * std::exp(a.log_scale() + b.log_scale());
}

double norm_squared(const Mps& a) { return inner(a, a).real(); }

cplx expect_product_operator(const Mps& mps, std::span<const OneSiteOperator> ops) {
  std::map<int, const MatrixXc*> by_site;
  for (const OneSiteOperator& op : ops) {
    require(op.site >= 0 && op.site < mps.size(), ErrorCode::kInvalidArgument,
            "operator on out-of-range site " + std::to_string(op.site));
    require(op.matrix.rows() == mps.phys_dim() && op.matrix.cols() == mps.phys_dim(),
            ErrorCode::kDimensionMismatch, "operator dimension mismatch");
    require(by_site.emplace(op.site, &op.matrix).second, ErrorCode::kInvalidArgument,
            "more than one operator on site " + std::to_string(op.site));
  }
  MatrixXc env = MatrixXc::Ones(1, 1);
  MatrixXc norm_env = MatrixXc::Ones(1, 1);
  for (int i = 0; i < mps.size(); ++i) {
    const SiteTensor& t = mps.site(i);
    MatrixXc next = MatrixXc::Zero(t.right(), t.right());
    MatrixXc next_norm = MatrixXc::Zero(t.right(), t.right());
    const auto it = by_site.find(i);
    for (int s = 0; s < t.phys(); ++s) {
      next_norm.noalias() += t.slice(s).adjoint() * (norm_env * t.slice(s));
      if (it == by_site.end()) {
        next.noalias() += t.slice(s).adjoint() * (env * t.slice(s));
        continue;
      }
      const MatrixXc& op = *it->second;
      const MatrixXc left = t.slice(s).adjoint() * env;
      for (int u = 0; u < t.phys(); ++u) {
        if (op(s, u) == cplx{}) continue;
        next.noalias() += op(s, u) * (left * t.slice(u));
      }
    }
    env = std::move(next);
    norm_env = std::move(next_norm);
  }
  const double den = norm_env(0, 0).real();
  require(den > 0.0, ErrorCode::kDomain, "expectation value of a zero-norm state");
  return env(0, 0) / den;
}

std::vector<int> sample_bitstring(const Mps& mps, StreamRng& rng) {
  Mps work = mps;
  work.canonicalize(0);
  require(work.site(0).grouped_left().norm() > 0.0, ErrorCode::kDomain,
          "cannot sample from a zero-norm state");
  std::vector<int> out(static_cast<std::size_t>(work.size()));
  RowMatrixXc env = RowMatrixXc::Ones(1, 1);
  std::vector<RowMatrixXc> candidates(static_cast<std::size_t>(work.phys_dim()));
  std::vector<double> weights(static_cast<std::size_t>(work.phys_dim()));
  for (int i = 0; i < work.size(); ++i) {
    const SiteTensor& t = work.site(i);
    double total = 0.0;
    for (int s = 0; s < t.phys(); ++s) {
      candidates[static_cast<std::size_t>(s)] = env * t.slice(s);
      weights[static_cast<std::size_t>(s)] = candidates[static_cast<std::size_t>(s)].squaredNorm();
      total += weights[static_cast<std::size_t>(s)];
    }
    require(total > 0.0, ErrorCode::kDomain, "conditional distribution vanished");
    double u = rng.uniform() * total;
    int pick = t.phys() - 1;
    for (int s = 0; s < t.phys(); ++s) {
      if (u < weights[static_cast<std::size_t>(s)]) {
        pick = s;
        break;
      }
      u -= weights[static_cast<std::size_t>(s)];
    }
    while (weights[static_cast<std::size_t>(pick)] == 0.0) --pick;
    out[static_cast<std::size_t>(i)] = pick;
    env = candidates[static_cast<std::size_t>(pick)] /
          std::sqrt(weights[static_cast<std::size_t>(pick)]);
  }
  return out;
}

TruncationReport apply_gate_sequence(Mps& mps, std::span<const TwoSiteGate> gates,
                                     const TruncationPolicy& policy) {
  TruncationReport total;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const bool center_left = g + 1 < gates.size() && gates[g + 1].bond < gates[g].bond;
    const TruncationReport r = mps.apply_two_site_gate(gates[g], policy, center_left);
    total.discarded_weight += r.discarded_weight;
    total.max_discarded_weight = std::max(total.max_discarded_weight, r.max_discarded_weight);
  }
  total.max_bond_dim = mps.max_bond_dim();
  return total;
}

VectorXc to_dense(const Mps& mps) {
  RowMatrixXc acc = mps.site(0).grouped_left();
  for (int i = 1; i < mps.size(); ++i) {
    const SiteTensor& t = mps.site(i);
    RowMatrixXc next = acc * t.grouped_right();
    acc = Eigen::Map<RowMatrixXc>(next.data(), next.rows() * t.phys(), t.right());
  }
  return VectorXc(Eigen::Map<VectorXc>(acc.data(), acc.rows())) * std::exp(mps.log_scale());
}

}  // namespace mbls
