// Copyright 2026 The entdyn authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTDYN_LINALG_HPP
#define ENTDYN_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace entdyn {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

/// (A + A†)/2 for any square expression.
template <typename Derived>
MatrixXcd hermitize(const Eigen::MatrixBase<Derived>& a) {
  return 0.5 * (a.derived() + a.derived().adjoint());
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a.derived() - a.derived().adjoint()).cwiseAbs().maxCoeff();
}

/// Smallest eigenvalue of the Hermitian part of `a`.
template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitize(a),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Kronecker product, column-major vectorization convention:
/// vec(A X B) = (B^T ⊗ A) vec(X).
template <typename DerivedA, typename DerivedB>
MatrixXcd kron(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.derived();
  return out;
}

/// Trace distance ||rho - sigma||_1 / 2 of two Hermitian matrices.
template <typename DerivedA, typename DerivedB>
double trace_distance(const Eigen::MatrixBase<DerivedA>& rho,
                      const Eigen::MatrixBase<DerivedB>& sigma) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(
      MatrixXcd(rho.derived() - sigma.derived()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Orthonormal basis of the (right) null space of `a`, relative threshold on
/// singular values.
inline std::vector<VectorXcd> null_space(const MatrixXcd& a,
                                         double rel_tol = 1e-10) {
  Eigen::BDCSVD<MatrixXcd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = (sv.size() > 0 ? sv(0) : 0.0) * rel_tol;
  std::vector<VectorXcd> basis;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cutoff) basis.push_back(svd.matrixV().col(i));
  }
  return basis;
}

}  // namespace entdyn

#endif  // ENTDYN_LINALG_HPP
