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

#include <Eigen/Dense>

#include <complex>

namespace mbls {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using RowMatrixXc = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr cplx kI{0.0, 1.0};

enum class Pauli : unsigned char { kI = 0, kX = 1, kY = 2, kZ = 3 };

/// 2x2 matrix of a single-qubit Pauli.
MatrixXc pauli_matrix(Pauli p);

MatrixXc kron(const MatrixXc& a, const MatrixXc& b);

/// Thin SVD A = U diag(S) Vh, singular values descending.
struct Svd {
  MatrixXc u;
  Eigen::VectorXd s;
  MatrixXc vh;
};

/// Divide-and-conquer SVD with a one-sided Jacobi fallback when it fails to
/// converge.
Svd svd(const MatrixXc& a);

/// exp(factor * h) for Hermitian h, through its eigendecomposition.
MatrixXc expm_hermitian(const MatrixXc& h, cplx factor);

double unitarity_defect(const MatrixXc& u);
double hermiticity_defect(const MatrixXc& h);

}  // namespace mbls
