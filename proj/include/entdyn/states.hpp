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

#ifndef ENTDYN_STATES_HPP
#define ENTDYN_STATES_HPP

#include <cmath>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "entdyn/fock.hpp"
#include "entdyn/linalg.hpp"
#include "entdyn/operators.hpp"

namespace entdyn {

/// Density matrix on the fixed-N Fock sector, indexed by the canonical basis
/// order. Validated on construction: Hermitian to 1e-12, unit trace to 1e-12,
/// smallest eigenvalue >= -1e-10. Immutable afterwards.
class SectorDensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPositivityTol = 1e-10;

  SectorDensityMatrix(int n_particles, int n_modes, MatrixXcd matrix)
      : n_particles_(n_particles),
        n_modes_(n_modes),
        matrix_(std::move(matrix)) {
    const auto dim =
        static_cast<Eigen::Index>(sector_dimension(n_particles, n_modes));
    if (matrix_.rows() != dim || matrix_.cols() != dim)
      throw InvalidState("matrix dimension does not match the sector");
    if (hermiticity_defect(matrix_) > kHermitianTol)
      throw InvalidState("density matrix is not Hermitian");
    if (std::abs(matrix_.trace().real() - 1.0) > kTraceTol ||
        std::abs(matrix_.trace().imag()) > kTraceTol)
      throw InvalidState("density matrix trace is not 1");
    if (min_eigenvalue(matrix_) < -kPositivityTol)
      throw InvalidState("density matrix has a negative eigenvalue");
  }

  int particles() const { return n_particles_; }
  int modes() const { return n_modes_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const MatrixXcd& matrix() const { return matrix_; }

  static SectorDensityMatrix pure(int n_particles, int n_modes,
                                  const VectorXcd& psi) {
    const double norm = psi.norm();
    if (norm < 1e-14) throw EmptyState("cannot normalize the zero vector");
    const VectorXcd unit = psi / norm;
    return SectorDensityMatrix(n_particles, n_modes,
                               unit * unit.adjoint());
  }

  static SectorDensityMatrix vacuum(int n_modes) {
    return SectorDensityMatrix(0, n_modes, MatrixXcd::Ones(1, 1));
  }

 private:
  int n_particles_;
  int n_modes_;
  MatrixXcd matrix_;
};

/// Statistical mixture over particle-number sectors. Coherences across
/// different N are unrepresentable by construction, which encodes the
/// particle-number superselection rule.
class NumberMixture {
 public:
  struct Component {
    double weight;
    SectorDensityMatrix state;
  };

  explicit NumberMixture(std::vector<Component> components,
                         double sum_tolerance = 1e-12)
      : components_(std::move(components)) {
    if (components_.empty()) throw InvalidState("mixture has no components");
    double sum = 0.0;
    const int n_modes = components_.front().state.modes();
    for (const auto& c : components_) {
      if (c.weight < -1e-15) throw InvalidState("negative mixture weight");
      if (c.state.modes() != n_modes)
        throw InvalidState("mixture components live on different mode counts");
      sum += c.weight;
    }
    for (std::size_t i = 0; i < components_.size(); ++i)
      for (std::size_t j = i + 1; j < components_.size(); ++j)
        if (components_[i].state.particles() ==
            components_[j].state.particles())
          throw InvalidState("duplicate particle number in mixture");
    if (std::abs(sum - 1.0) > sum_tolerance)
      throw InvalidState("mixture weights do not sum to 1");
  }

  static NumberMixture pure_sector(SectorDensityMatrix rho) {
    return NumberMixture({Component{1.0, std::move(rho)}});
  }

  const std::vector<Component>& components() const { return components_; }
  int modes() const { return components_.front().state.modes(); }

  int max_particles() const {
    int n = 0;
    for (const auto& c : components_)
      n = std::max(n, c.state.particles());
    return n;
  }

  const Component* component(int n_particles) const {
    for (const auto& c : components_)
      if (c.state.particles() == n_particles) return &c;
    return nullptr;
  }

 private:
  std::vector<Component> components_;
};

/// The sector density matrix re-indexed by separable labels (k, sigma;
/// N-k, sigma'): one sub-matrix per ordered pair (k, l) of local particle
/// numbers. Lossless; reassemble() restores the source exactly.
class BlockDecomposition {
 public:
  BlockDecomposition(const SectorDensityMatrix& rho, const Bipartition& bip)
      : n_particles_(rho.particles()), bip_(bip) {
    if (bip.n_modes != rho.modes())
      throw InvalidState("bipartition does not match the state's mode count");
    const int n = n_particles_;
    dim_a_.resize(n + 1);
    dim_b_.resize(n + 1);
    fock_index_.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
      dim_a_[k] = static_cast<Eigen::Index>(sector_dimension(k, bip.modes_a()));
      dim_b_[k] =
          static_cast<Eigen::Index>(sector_dimension(n - k, bip.modes_b()));
      fock_index_[k].resize(dim_a_[k] * dim_b_[k]);
    }
    // Fill the label -> Fock-rank maps, sigma-major then sigma'.
    const FockBasis basis(n, bip.n_modes);
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
      const SeparableLabel lab = separable_label(basis.state(i), bip);
      fock_index_[lab.k][lab.sigma * dim_b_[lab.k] + lab.sigma_prime] = i;
    }
    blocks_.resize(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int k = 0; k <= n; ++k) {
      for (int l = 0; l <= n; ++l) {
        MatrixXcd& block = blocks_[index(k, l)];
        block.resize(dim_a_[k] * dim_b_[k], dim_a_[l] * dim_b_[l]);
        for (Eigen::Index r = 0; r < block.rows(); ++r)
          for (Eigen::Index c = 0; c < block.cols(); ++c)
            block(r, c) = rho.matrix()(fock_index_[k][r], fock_index_[l][c]);
      }
    }
  }

  int particles() const { return n_particles_; }
  const Bipartition& bipartition() const { return bip_; }

  /// Coefficients rho_{k sigma sigma', l tau tau'}; rows indexed
  /// sigma * dim_b(k) + sigma', columns tau * dim_b(l) + tau'.
  const MatrixXcd& block(int k, int l) const { return blocks_[index(k, l)]; }

  Eigen::Index dim_a(int k) const { return dim_a_[k]; }
  Eigen::Index dim_b(int k) const { return dim_b_[k]; }

  /// Fock rank of label (k, sigma, sigma') at position sigma*dim_b+sigma'.
  const std::vector<Eigen::Index>& sector_indices(int k) const {
    return fock_index_[k];
  }

  MatrixXcd reassemble() const {
    const auto dim =
        static_cast<Eigen::Index>(sector_dimension(n_particles_, bip_.n_modes));
    MatrixXcd out = MatrixXcd::Zero(dim, dim);
    for (int k = 0; k <= n_particles_; ++k)
      for (int l = 0; l <= n_particles_; ++l) {
        const MatrixXcd& block = blocks_[index(k, l)];
        for (Eigen::Index r = 0; r < block.rows(); ++r)
          for (Eigen::Index c = 0; c < block.cols(); ++c)
            out(fock_index_[k][r], fock_index_[l][c]) = block(r, c);
      }
    return out;
  }

  /// Largest coefficient magnitude over all blocks with k != l.
  double max_off_block() const {
    double m = 0.0;
    for (int k = 0; k <= n_particles_; ++k)
      for (int l = 0; l <= n_particles_; ++l) {
        if (k == l) continue;
        const MatrixXcd& block = blocks_[index(k, l)];
        if (block.size() > 0) m = std::max(m, block.cwiseAbs().maxCoeff());
      }
    return m;
  }

 private:
  std::size_t index(int k, int l) const {
    return static_cast<std::size_t>(k) * (n_particles_ + 1) + l;
  }

  int n_particles_;
  Bipartition bip_;
  std::vector<Eigen::Index> dim_a_, dim_b_;
  std::vector<std::vector<Eigen::Index>> fock_index_;
  std::vector<MatrixXcd> blocks_;
};

inline BlockDecomposition to_separable_basis(const SectorDensityMatrix& rho,
                                             const Bipartition& bip) {
  return BlockDecomposition(rho, bip);
}

/// True iff every coefficient with k != l has magnitude <= tol.
inline bool is_block_diagonal(const SectorDensityMatrix& rho,
                              const Bipartition& bip, double tol) {
  if (tol <= 0) throw InvalidState("tolerance must be positive");
  return BlockDecomposition(rho, bip).max_off_block() <= tol;
}

/// The two-particle four-mode reference state
///   rho = p |psi1><psi1| + (1-p)/2 (|psi2><psi2| + |psi3><psi3|)
/// with psi1 = (|0,1,0,1> + |1,0,1,0>)/sqrt(2), psi2 = |0,1,1,0>,
/// psi3 = |1,0,0,1>. Block-diagonal for the m=2 split and entangled iff
/// p > 1/2.
inline SectorDensityMatrix example_state(double p) {
  if (p < 0.0 || p > 1.0)
    throw InvalidProbability("p must lie in [0, 1]");
  const FockBasis basis(2, 4);
  auto fock = [&](int k1, int k2, int k3, int k4) {
    FockState occ(4);
    occ << k1, k2, k3, k4;
    return basis.rank(occ);
  };
  VectorXcd psi1 = VectorXcd::Zero(basis.dim());
  psi1(fock(0, 1, 0, 1)) = 1.0 / std::sqrt(2.0);
  psi1(fock(1, 0, 1, 0)) = 1.0 / std::sqrt(2.0);
  VectorXcd psi2 = VectorXcd::Zero(basis.dim());
  psi2(fock(0, 1, 1, 0)) = 1.0;
  VectorXcd psi3 = VectorXcd::Zero(basis.dim());
  psi3(fock(1, 0, 0, 1)) = 1.0;
  MatrixXcd rho = p * psi1 * psi1.adjoint() +
                  0.5 * (1.0 - p) *
                      (psi2 * psi2.adjoint() + psi3 * psi3.adjoint());
  return SectorDensityMatrix(2, 4, std::move(rho));
}

/// Normalized pure state P(a†) Q(a†) |0> with P supported on side-A modes and
/// Q on side-B modes. Separable by construction for the given bipartition.
inline SectorDensityMatrix separable_pure(const OperatorSpec& poly_a,
                                          const OperatorSpec& poly_b,
                                          const Bipartition& bip) {
  auto check_side = [&](const OperatorSpec& poly, int lo, int hi,
                        const char* side) {
    for (const auto& t : poly.terms)
      for (const auto& op : t.word) {
        if (op.kind != Ladder::kCreate)
          throw InvalidState(std::string("polynomial for side ") + side +
                             " must contain only creation operators");
        if (op.mode < lo || op.mode > hi)
          throw ModeOutOfRange(std::string("side-") + side +
                               " polynomial touches a foreign mode");
      }
  };
  check_side(poly_a, 1, bip.m, "A");
  check_side(poly_b, bip.m + 1, bip.n_modes, "B");

  OperatorSpec product = poly_a * poly_b;
  if (poly_a.empty()) product = poly_b;
  if (poly_b.empty()) product = poly_a;
  if (product.empty()) throw EmptyState("both polynomials are empty");
  const int n = product.net_particle_change();  // throws on mixed degrees

  const FockBasis target(n, bip.n_modes);
  VectorXcd psi = VectorXcd::Zero(target.dim());
  for (const auto& term : product.terms) {
    FockState occ = FockState::Zero(bip.n_modes);
    const Complex amp = detail::apply_word(term.word, occ);
    psi(target.rank(occ)) += term.coeff * amp;
  }
  if (psi.norm() < 1e-14)
    throw EmptyState("polynomial annihilates the vacuum's image");
  return SectorDensityMatrix::pure(n, bip.n_modes, psi);
}

/// Dense coefficient table for the diagonal coherence class: value of
/// rho_{k sigma sigma', l sigma sigma'} keyed by (k, l, sigma, sigma').
/// Entries for (l, k, ...) are implied by Hermiticity when omitted.
struct DiagonalClassCoefficients {
  std::map<std::tuple<int, int, Eigen::Index, Eigen::Index>, Complex> entries;

  void set(int k, int l, Eigen::Index sigma, Eigen::Index sigma_prime,
           Complex value) {
    entries[{k, l, sigma, sigma_prime}] = value;
  }
};

namespace detail {

/// Finds the unique partner occupation vector for the diagonal class: l_j
/// differing from k_j by c_j |k-l|^alpha with signs that restore the sector
/// sums. Throws ConstraintViolation when none or several patterns fit.
inline FockState diagonal_class_partner(const FockState& occ, int k, int l,
                                        const Bipartition& bip, double alpha,
                                        const std::vector<double>& c) {
  const int n_modes = bip.n_modes;
  const double step = std::pow(std::abs(k - l), alpha);
  std::vector<int> delta(n_modes);
  std::vector<int> active;
  for (int j = 0; j < n_modes; ++j) {
    const double d = c[j] * step;
    delta[j] = static_cast<int>(std::llround(d));
    if (std::abs(d - delta[j]) > 1e-9)
      throw ConstraintViolation(
          "c_j |k-l|^alpha is not an integer occupation shift");
    if (delta[j] != 0) active.push_back(j);
  }
  const int n_total = occ.sum();
  std::vector<FockState> solutions;
  const int patterns = 1 << active.size();
  for (int bits = 0; bits < patterns; ++bits) {
    FockState partner = occ;
    bool ok = true;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const int j = active[i];
      const int sign = (bits >> i) & 1 ? 1 : -1;
      partner(j) = occ(j) - sign * delta[j];
      if (partner(j) < 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (partner.sum() != n_total) continue;
    if (partner.head(bip.m).sum() != l) continue;
    solutions.push_back(partner);
  }
  if (solutions.empty())
    throw ConstraintViolation(
        "no occupation pattern matches (alpha, c) for this (k, l) pair");
  if (solutions.size() > 1)
    throw ConstraintViolation(
        "ambiguous occupation pattern for this (alpha, c); supply a finer "
        "class");
  return solutions.front();
}

}  // namespace detail

/// Builds a state of the diagonal coherence class: coherences only between
/// Fock states related by occupation shifts c_j |k-l|^alpha, with labels
/// (sigma, sigma') preserved. The two-mode case forces alpha = c_1 = c_2 = 1.
inline SectorDensityMatrix diagonal_class_state(
    int n_particles, const Bipartition& bip,
    const DiagonalClassCoefficients& r, double alpha,
    const std::vector<double>& c) {
  if (static_cast<int>(c.size()) != bip.n_modes)
    throw ConstraintViolation("need one coefficient c_j per mode");
  for (double cj : c)
    if (cj < 0) throw ConstraintViolation("c_j must be non-negative");
  if (alpha <= 0) throw ConstraintViolation("alpha must be positive");
  if (bip.n_modes == 2 &&
      (alpha != 1.0 || c[0] != 1.0 || c[1] != 1.0))
    throw ConstraintViolation("the two-mode class forces alpha = c_j = 1");

  const FockBasis basis(n_particles, bip.n_modes);
  MatrixXcd rho = MatrixXcd::Zero(basis.dim(), basis.dim());
  std::vector<bool> assigned(basis.dim() * basis.dim(), false);
  for (const auto& [key, value] : r.entries) {
    const auto [k, l, sigma, sigma_prime] = key;
    if (k < 0 || k > n_particles || l < 0 || l > n_particles)
      throw ConstraintViolation("k, l outside [0, N]");
    const FockState ket =
        state_from_label({k, sigma, sigma_prime}, n_particles, bip);
    const FockState bra =
        (k == l) ? ket
                 : detail::diagonal_class_partner(ket, k, l, bip, alpha, c);
    const Eigen::Index rk = basis.rank(ket);
    const Eigen::Index rb = basis.rank(bra);
    const std::size_t flat = static_cast<std::size_t>(rk) * basis.dim() + rb;
    if (assigned[flat] && std::abs(rho(rk, rb) - value) > 1e-12)
      throw ConstraintViolation(
          "conflicting values for one coefficient (Hermiticity)");
    rho(rk, rb) = value;
    rho(rb, rk) = std::conj(value);
    assigned[flat] = true;
    assigned[static_cast<std::size_t>(rb) * basis.dim() + rk] = true;
  }
  return SectorDensityMatrix(n_particles, bip.n_modes, std::move(rho));
}

/// Uniform two-mode member of the diagonal class: every coefficient equal to
/// 1/(N+1), i.e. the projector onto sum_k |k, N-k> / sqrt(N+1).
inline SectorDensityMatrix flat_two_mode_state(int n_particles) {
  DiagonalClassCoefficients r;
  const Complex value(1.0 / (n_particles + 1), 0.0);
  for (int k = 0; k <= n_particles; ++k)
    for (int l = k; l <= n_particles; ++l) r.set(k, l, 0, 0, value);
  return diagonal_class_state(n_particles, Bipartition(1, 2), r, 1.0,
                              {1.0, 1.0});
}

}  // namespace entdyn

#endif  // ENTDYN_STATES_HPP
