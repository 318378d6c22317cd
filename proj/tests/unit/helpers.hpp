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

#include <boost/math/distributions/chi_squared.hpp>
#include <vector>

#include "mblshadow/linalg.hpp"
#include "mblshadow/mps.hpp"
#include "mblshadow/rng.hpp"

namespace mbls::testing {

inline cplx random_complex(StreamRng& rng) { return {rng.normal(), rng.normal()}; }

/// Random open-boundary MPS with the given bond dimensions (size N - 1).
inline Mps random_mps(int n, int d, const std::vector<int>& bonds, StreamRng& rng) {
  std::vector<SiteTensor> tensors;
  for (int i = 0; i < n; ++i) {
    const int left = i == 0 ? 1 : bonds[static_cast<std::size_t>(i) - 1];
    const int right = i == n - 1 ? 1 : bonds[static_cast<std::size_t>(i)];
    SiteTensor t(left, d, right);
    for (cplx& z : t.data()) z = random_complex(rng);
    tensors.push_back(std::move(t));
  }
  return Mps::from_tensors(std::move(tensors));
}

inline MatrixXc random_unitary(int dim, StreamRng& rng) {
  MatrixXc a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = random_complex(rng);
  Eigen::HouseholderQR<MatrixXc> qr(a);
  return qr.householderQ();
}

inline MatrixXc random_hermitian(int dim, StreamRng& rng) {
  MatrixXc a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = random_complex(rng);
  return (a + a.adjoint()) / 2.0;
}

/// Dense contraction written independently of the library's to_dense.
inline VectorXc contract(const Mps& mps) {
  RowMatrixXc acc = RowMatrixXc::Ones(1, 1);
  int d_total = 1;
  for (int i = 0; i < mps.size(); ++i) {
    const SiteTensor& t = mps.site(i);
    RowMatrixXc next(d_total * t.phys(), t.right());
    for (int row = 0; row < d_total; ++row) {
      for (int s = 0; s < t.phys(); ++s) {
        next.row(row * t.phys() + s) = acc.row(row) * t.slice(s);
      }
    }
    acc = std::move(next);
    d_total *= t.phys();
  }
  return VectorXc(acc.col(0)) * std::exp(mps.log_scale());
}

/// Pearson chi-square p-value; bins with expected count below 5 are pooled.
inline double chi_square_pvalue(const std::vector<long>& counts, const std::vector<double>& probs,
                                long draws) {
  double stat = 0.0;
  int bins = 0;
  double pooled_expected = 0.0;
  long pooled_observed = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = probs[i] * static_cast<double>(draws);
    if (expected < 5.0) {
      pooled_expected += expected;
      pooled_observed += counts[i];
      continue;
    }
    const double diff = static_cast<double>(counts[i]) - expected;
    stat += diff * diff / expected;
    ++bins;
  }
  if (pooled_expected >= 5.0) {
    const double diff = static_cast<double>(pooled_observed) - pooled_expected;
    stat += diff * diff / pooled_expected;
    ++bins;
  }
  if (bins < 2) return 1.0;
  boost::math::chi_squared dist(bins - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace mbls::testing
