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

#include "helpers.hpp"
#include "mblshadow/linalg.hpp"

using namespace mbls;
using mbls::testing::random_complex;

namespace {

MatrixXc random_matrix(int rows, int cols, StreamRng& rng) {
  MatrixXc a(rows, cols);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = random_complex(rng);
  return a;
}

}  // namespace

class SvdShapes : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(SvdShapes, ReconstructsAndIsOrthonormal) {
  const auto [rows, cols] = GetParam();
  StreamRng rng(11, static_cast<std::uint64_t>(rows * 1000 + cols));
  const MatrixXc a = random_matrix(rows, cols, rng);
  const Svd d = svd(a);
  const Eigen::Index k = std::min(rows, cols);
  ASSERT_EQ(d.s.size(), k);
  const MatrixXc rebuilt = d.u * d.s.cast<cplx>().asDiagonal() * d.vh;
  EXPECT_LT((rebuilt - a).norm() / a.norm(), 1e-12);
  EXPECT_LT((d.u.adjoint() * d.u - MatrixXc::Identity(k, k)).norm(), 1e-12);
  EXPECT_LT((d.vh * d.vh.adjoint() - MatrixXc::Identity(k, k)).norm(), 1e-12);
  for (Eigen::Index i = 1; i < k; ++i) EXPECT_GE(d.s(i - 1), d.s(i));
}

INSTANTIATE_TEST_SUITE_P(Linalg, SvdShapes,
                         ::testing::Values(std::pair{1, 1}, std::pair{4, 16}, std::pair{16, 4},
                                           std::pair{64, 64}, std::pair{200, 200},
                                           std::pair{256, 256}, std::pair{255, 256},
                                           std::pair{300, 256}, std::pair{256, 512}));

TEST(Linalg, SvdRankDeficient) {
  StreamRng rng(12, 0);
  const MatrixXc left = random_matrix(40, 3, rng);
  const MatrixXc right = random_matrix(3, 30, rng);
  const Svd d = svd(left * right);
  EXPECT_GT(d.s(2), 1e-8);
  EXPECT_LT(d.s(3), 1e-12 * d.s(0));
}

TEST(Linalg, ExpmHermitianIsUnitary) {
  StreamRng rng(13, 0);
  const MatrixXc h = mbls::testing::random_hermitian(16, rng);
  const MatrixXc u = expm_hermitian(h, cplx(0.0, -0.3));
  EXPECT_LT(unitarity_defect(u), 1e-12);
  const MatrixXc back = expm_hermitian(h, cplx(0.0, 0.3));
  EXPECT_LT((u * back - MatrixXc::Identity(16, 16)).norm(), 1e-12);
}

TEST(Linalg, KronMatchesEigenBlocks) {
  const MatrixXc x = pauli_matrix(Pauli::kX);
  const MatrixXc z = pauli_matrix(Pauli::kZ);
  const MatrixXc xz = kron(x, z);
  EXPECT_EQ(xz(0, 2), cplx(1.0));
  EXPECT_EQ(xz(1, 3), cplx(-1.0));
  EXPECT_EQ(xz(2, 0), cplx(1.0));
  EXPECT_EQ(xz(0, 0), cplx(0.0));
}
