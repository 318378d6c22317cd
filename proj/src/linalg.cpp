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

#include "mblshadow/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>

#include "mblshadow/error.hpp"

namespace mbls {

MatrixXc pauli_matrix(Pauli p) {
  MatrixXc m = MatrixXc::Zero(2, 2);
  switch (p) {
    case Pauli::kI:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
    case Pauli::kX:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::kY:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case Pauli::kZ:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

MatrixXc kron(const MatrixXc& a, const MatrixXc& b) {
  MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Svd svd(const MatrixXc& a) {
  constexpr unsigned kThin = Eigen::ComputeThinU | Eigen::ComputeThinV;
  Svd out;
  if (a.size() == 0) {
    const Eigen::Index k = std::min(a.rows(), a.cols());
    out.u.resize(a.rows(), k);
    out.s.resize(k);
    out.vh.resize(k, a.cols());
    return out;
  }
  Eigen::BDCSVD<MatrixXc> dc(a, kThin);
  if (dc.info() == Eigen::Success && dc.singularValues().allFinite()) {
    out.u = dc.matrixU();
    out.s = dc.singularValues();
    out.vh = dc.matrixV().adjoint();
    return out;
  }
  Eigen::JacobiSVD<MatrixXc> jacobi(a, kThin);
  require(jacobi.info() == Eigen::Success, ErrorCode::kRuntime, "SVD failed to converge");
  out.u = jacobi.matrixU();
  out.s = jacobi.singularValues();
  out.vh = jacobi.matrixV().adjoint();
  return out;
}

MatrixXc expm_hermitian(const MatrixXc& h, cplx factor) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(h);
  require(eig.info() == Eigen::Success, ErrorCode::kRuntime, "eigendecomposition failed");
  const VectorXc phases = (factor * eig.eigenvalues().cast<cplx>()).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

double unitarity_defect(const MatrixXc& u) {
  return (u.adjoint() * u - MatrixXc::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const MatrixXc& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace mbls
