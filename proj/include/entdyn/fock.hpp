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

#ifndef ENTDYN_FOCK_HPP
#define ENTDYN_FOCK_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "entdyn/errors.hpp"

namespace entdyn {

/// Occupation-number vector (k_1, ..., k_M) of M bosonic modes.
using FockState = Eigen::VectorXi;

inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) /
             static_cast<std::uint64_t>(i);
  }
  return result;
}

/// Number of Fock states of `n_particles` bosons in `n_modes` modes,
/// C(N + M - 1, N).
inline std::uint64_t sector_dimension(int n_particles, int n_modes) {
  return binomial(n_particles + n_modes - 1, n_particles);
}

/// All occupation vectors with total `n_particles` over `n_modes` modes, in
/// the canonical order: decreasing lexicographic, so (N,0,...,0) first and
/// (0,...,0,N) last. This order is fixed project-wide; separable labels and
/// block extraction rely on it.
inline std::vector<FockState> enumerate_sector(int n_particles, int n_modes) {
  std::vector<FockState> states;
  states.reserve(sector_dimension(n_particles, n_modes));
  FockState occ = FockState::Zero(n_modes);
  occ(0) = n_particles;
  states.push_back(occ);
  if (n_modes == 1 || n_particles == 0) return states;
  while (occ(n_modes - 1) < n_particles) {
    // Rightmost position before the last mode holding a particle.
    int i = n_modes - 2;
    while (occ(i) == 0) --i;
    int tail = 0;
    for (int j = i + 1; j < n_modes; ++j) tail += occ(j);
    occ(i) -= 1;
    occ(i + 1) = tail + 1;
    for (int j = i + 2; j < n_modes; ++j) occ(j) = 0;
    states.push_back(occ);
  }
  return states;
}

/// Position of `occ` in the canonical order of its own (total, modes) sector.
inline Eigen::Index sector_rank(const FockState& occ) {
  const int n_modes = static_cast<int>(occ.size());
  int remaining = occ.sum();
  std::uint64_t rank = 0;
  for (int j = 0; j + 1 < n_modes; ++j) {
    // States with a larger occupation at mode j come earlier.
    for (int v = remaining; v > occ(j); --v) {
      rank += sector_dimension(remaining - v, n_modes - j - 1);
    }
    remaining -= occ(j);
  }
  return static_cast<Eigen::Index>(rank);
}

/// Fixed-(N, M) sector with cached canonical basis.
class FockBasis {
 public:
  FockBasis(int n_particles, int n_modes)
      : n_particles_(n_particles),
        n_modes_(n_modes),
        states_(enumerate_sector(n_particles, n_modes)) {
    if (n_particles < 0 || n_modes < 1)
      throw InvalidState("FockBasis requires N >= 0 and M >= 1");
  }

  int particles() const { return n_particles_; }
  int modes() const { return n_modes_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(states_.size()); }
  const FockState& state(Eigen::Index i) const { return states_[i]; }
  const std::vector<FockState>& states() const { return states_; }
  Eigen::Index rank(const FockState& occ) const { return sector_rank(occ); }

 private:
  int n_particles_;
  int n_modes_;
  std::vector<FockState> states_;
};

/// Split of M modes into subsystem A = modes 1..m and B = modes m+1..M.
struct Bipartition {
  int m;        // modes in A
  int n_modes;  // M

  Bipartition(int m_in, int n_modes_in) : m(m_in), n_modes(n_modes_in) {
    if (m < 1 || m >= n_modes)
      throw InvalidState("Bipartition requires 1 <= m < M");
  }

  int modes_a() const { return m; }
  int modes_b() const { return n_modes - m; }
};

/// (k, sigma; N-k, sigma'): k particles on side A arranged as sigma, the rest
/// on side B arranged as sigma'. sigma/sigma' are canonical sector ranks of
/// the sub-occupations.
struct SeparableLabel {
  int k;
  Eigen::Index sigma;
  Eigen::Index sigma_prime;
};

inline SeparableLabel separable_label(const FockState& occ,
                                      const Bipartition& bip) {
  if (occ.size() != bip.n_modes)
    throw InvalidState("occupation vector length does not match bipartition");
  const FockState occ_a = occ.head(bip.m);
  const FockState occ_b = occ.tail(bip.n_modes - bip.m);
  return SeparableLabel{occ_a.sum(), sector_rank(occ_a), sector_rank(occ_b)};
}

/// Inverse of separable_label for a sector with `n_particles` total.
inline FockState state_from_label(const SeparableLabel& label, int n_particles,
                                  const Bipartition& bip) {
  const auto side_a = enumerate_sector(label.k, bip.m);
  const auto side_b =
      enumerate_sector(n_particles - label.k, bip.n_modes - bip.m);
  FockState occ(bip.n_modes);
  occ.head(bip.m) = side_a.at(label.sigma);
  occ.tail(bip.n_modes - bip.m) = side_b.at(label.sigma_prime);
  return occ;
}

}  // namespace entdyn

#endif  // ENTDYN_FOCK_HPP
