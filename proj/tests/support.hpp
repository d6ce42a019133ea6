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

#ifndef ENTDYN_TESTS_SUPPORT_HPP
#define ENTDYN_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "entdyn/operators.hpp"
#include "entdyn/states.hpp"

namespace entdyn::testing {

/// Full-rank random density matrix on the (N, M) sector (Ginibre ensemble).
inline SectorDensityMatrix random_state(int n_particles, int n_modes,
                                        std::mt19937_64& rng) {
  const auto dim =
      static_cast<Eigen::Index>(sector_dimension(n_particles, n_modes));
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXcd g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      g(i, j) = Complex(gauss(rng), gauss(rng));
  MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return SectorDensityMatrix(n_particles, n_modes, hermitize(rho));
}

/// Random homogeneous creation polynomial of the given degree on modes
/// [lo, hi] (1-based, inclusive).
inline OperatorSpec random_creation_polynomial(int degree, int lo, int hi,
                                               std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  OperatorSpec poly;
  for (const auto& occ : enumerate_sector(degree, hi - lo + 1)) {
    OperatorTerm term;
    term.coeff = Complex(gauss(rng), gauss(rng));
    for (int j = 0; j < occ.size(); ++j)
      for (int rep = 0; rep < occ(j); ++rep)
        term.word.push_back({lo + j, Ladder::kCreate});
    poly.terms.push_back(std::move(term));
  }
  return poly;
}

/// Random separable pure state: P(a†) on side A of degree k, Q(a†) on side B
/// of degree N-k.
inline SectorDensityMatrix random_separable_pure(int n_particles,
                                                 const Bipartition& bip,
                                                 std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick_k(0, n_particles);
  for (;;) {
    const int k = pick_k(rng);
    OperatorSpec poly_a = random_creation_polynomial(k, 1, bip.m, rng);
    OperatorSpec poly_b =
        random_creation_polynomial(n_particles - k, bip.m + 1, bip.n_modes, rng);
    try {
      return separable_pure(poly_a, poly_b, bip);
    } catch (const EmptyState&) {
      continue;  // vanishing random polynomial; retry
    }
  }
}

/// Random convex combination of separable pure states (hence separable).
inline SectorDensityMatrix random_separable_mixed(int n_particles,
                                                  const Bipartition& bip,
                                                  int n_components,
                                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.1, 1.0);
  MatrixXcd rho;
  double total = 0.0;
  for (int i = 0; i < n_components; ++i) {
    const double w = uniform(rng);
    const auto pure = random_separable_pure(n_particles, bip, rng);
    if (i == 0)
      rho = w * pure.matrix();
    else
      rho += w * pure.matrix();
    total += w;
  }
  rho /= total;
  return SectorDensityMatrix(n_particles, bip.n_modes, hermitize(rho));
}

}  // namespace entdyn::testing

#endif  // ENTDYN_TESTS_SUPPORT_HPP
