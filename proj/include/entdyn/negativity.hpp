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

#ifndef ENTDYN_NEGATIVITY_HPP
#define ENTDYN_NEGATIVITY_HPP

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "entdyn/states.hpp"

namespace entdyn {

enum class NegativityMethod { kFormula, kOracle };

struct NegativityReport {
  double value = 0.0;
  /// (k, l) -> Tr sqrt(R_{k,l}); filled by the formula route only.
  std::map<std::pair<int, int>, double> per_block;
  NegativityMethod method = NegativityMethod::kFormula;
};

namespace detail {

/// The rearranged coefficient block
/// W[(sigma', tau'), (sigma, tau)] = rho_{k sigma' sigma, l tau tau'};
/// R_{k,l} = conj(W) W^T, so Tr sqrt(R_{k,l}) is the nuclear norm of W.
inline MatrixXcd rearranged_block(const BlockDecomposition& dec, int k,
                                  int l) {
  const MatrixXcd& block = dec.block(k, l);
  const Eigen::Index a_k = dec.dim_a(k);
  const Eigen::Index b_k = dec.dim_b(k);
  const Eigen::Index a_l = dec.dim_a(l);
  const Eigen::Index b_l = dec.dim_b(l);
  MatrixXcd w(a_k * b_l, b_k * a_l);
  for (Eigen::Index sp = 0; sp < a_k; ++sp)
    for (Eigen::Index tp = 0; tp < b_l; ++tp)
      for (Eigen::Index s = 0; s < b_k; ++s)
        for (Eigen::Index tau = 0; tau < a_l; ++tau)
          w(sp * b_l + tp, s * a_l + tau) =
              block(sp * b_k + s, tau * b_l + tp);
  return w;
}

/// Tr sqrt(R_{k,l}) through the singular values of W, which carry full
/// relative accuracy where eigenvalues of R would square them first. The
/// Hermitian eigenvalues of R guard the construction: R is positive
/// semidefinite analytically, tiny negative values are clipped, anything
/// below -1e-9 raises.
inline double trace_sqrt_r(const MatrixXcd& w, int k, int l) {
  if (w.size() == 0 || w.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const MatrixXcd r = w.conjugate() * w.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(r, Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -1e-9)
    throw NegativeEigenvalueInR("R_{" + std::to_string(k) + "," +
                                std::to_string(l) + "} has eigenvalue " +
                                std::to_string(min_ev));
  Eigen::JacobiSVD<MatrixXcd> svd(w);
  return svd.singularValues().sum();
}

}  // namespace detail

/// Negativity via the block closed form
///   N(rho) = 1/2 (sum_{k,l} Tr sqrt(R_{k,l}) - 1).
inline NegativityReport negativity_formula(const SectorDensityMatrix& rho,
                                           const Bipartition& bip) {
  const BlockDecomposition dec(rho, bip);
  NegativityReport report;
  report.method = NegativityMethod::kFormula;
  double sum = 0.0;
  for (int k = 0; k <= rho.particles(); ++k) {
    for (int l = 0; l <= rho.particles(); ++l) {
      const double tr =
          detail::trace_sqrt_r(detail::rearranged_block(dec, k, l), k, l);
      report.per_block[{k, l}] = tr;
      sum += tr;
    }
  }
  report.value = std::max(0.0, 0.5 * (sum - 1.0));
  return report;
}

namespace detail {

/// Host space and partial transpose for the oracle: the A-side and B-side
/// labels actually present in the state span a product space (larger than the
/// N-sector); the partial transpose lives there.
struct PartialTranspose {
  std::vector<std::pair<int, Eigen::Index>> labels_a, labels_b;
  MatrixXcd matrix;

  PartialTranspose(const SectorDensityMatrix& rho, const Bipartition& bip) {
    const BlockDecomposition dec(rho, bip);
    const int n = rho.particles();
    std::map<std::pair<int, Eigen::Index>, Eigen::Index> index_a, index_b;
    auto touch = [](auto& index, int k, Eigen::Index s) {
      index.emplace(std::make_pair(k, s), 0);
    };
    for (int k = 0; k <= n; ++k)
      for (int l = 0; l <= n; ++l) {
        const MatrixXcd& block = dec.block(k, l);
        for (Eigen::Index r = 0; r < block.rows(); ++r)
          for (Eigen::Index c = 0; c < block.cols(); ++c) {
            if (block(r, c) == Complex(0, 0)) continue;
            touch(index_a, k, r / dec.dim_b(k));
            touch(index_b, n - k, r % dec.dim_b(k));
            touch(index_a, l, c / dec.dim_b(l));
            touch(index_b, n - l, c % dec.dim_b(l));
          }
      }
    for (auto& [label, idx] : index_a) {
      idx = static_cast<Eigen::Index>(labels_a.size());
      labels_a.push_back(label);
    }
    for (auto& [label, idx] : index_b) {
      idx = static_cast<Eigen::Index>(labels_b.size());
      labels_b.push_back(label);
    }
    const Eigen::Index na = static_cast<Eigen::Index>(labels_a.size());
    const Eigen::Index nb = static_cast<Eigen::Index>(labels_b.size());
    matrix = MatrixXcd::Zero(na * nb, na * nb);
    for (int k = 0; k <= n; ++k)
      for (int l = 0; l <= n; ++l) {
        const MatrixXcd& block = dec.block(k, l);
        for (Eigen::Index r = 0; r < block.rows(); ++r)
          for (Eigen::Index c = 0; c < block.cols(); ++c) {
            const Complex v = block(r, c);
            if (v == Complex(0, 0)) continue;
            // |k,sigma;N-k,sigma'><l,tau;N-l,tau'|  ->  transpose on A:
            // |l,tau;N-k,sigma'><k,sigma;N-l,tau'|.
            const Eigen::Index row_a = index_a.at({l, c / dec.dim_b(l)});
            const Eigen::Index row_b = index_b.at({n - k, r % dec.dim_b(k)});
            const Eigen::Index col_a = index_a.at({k, r / dec.dim_b(k)});
            const Eigen::Index col_b = index_b.at({n - l, c % dec.dim_b(l)});
            matrix(row_a * nb + row_b, col_a * nb + col_b) = v;
          }
      }
  }

  VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitize(matrix),
                                                Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
};

}  // namespace detail

/// Negativity as the sum of |negative eigenvalues| of the partial transpose,
/// computed without the block formula. Serves as the independent check of
/// negativity_formula.
inline NegativityReport negativity_oracle(const SectorDensityMatrix& rho,
                                          const Bipartition& bip) {
  const detail::PartialTranspose pt(rho, bip);
  const VectorXd evs = pt.eigenvalues();
  NegativityReport report;
  report.method = NegativityMethod::kOracle;
  for (Eigen::Index i = 0; i < evs.size(); ++i)
    if (evs(i) < 0) report.value -= evs(i);
  return report;
}

inline double negativity(const SectorDensityMatrix& rho, const Bipartition& bip,
                         NegativityMethod method = NegativityMethod::kFormula) {
  return method == NegativityMethod::kFormula
             ? negativity_formula(rho, bip).value
             : negativity_oracle(rho, bip).value;
}

/// Average negativity of a particle-number mixture, sum_N p_N N(rho^(N)).
inline double negativity_mixture(
    const NumberMixture& mixture, const Bipartition& bip,
    NegativityMethod method = NegativityMethod::kFormula) {
  double sum = 0.0;
  for (const auto& c : mixture.components()) {
    if (c.weight == 0.0) continue;
    sum += c.weight * negativity(c.state, bip, method);
  }
  return sum;
}

/// True iff the partial transpose has no eigenvalue below -tol.
inline bool is_ppt(const SectorDensityMatrix& rho, const Bipartition& bip,
                   double tol) {
  if (tol <= 0) throw InvalidState("tolerance must be positive");
  return detail::PartialTranspose(rho, bip).eigenvalues().minCoeff() >= -tol;
}

}  // namespace entdyn

#endif  // ENTDYN_NEGATIVITY_HPP
