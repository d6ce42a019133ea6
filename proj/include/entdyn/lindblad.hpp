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

#ifndef ENTDYN_LINDBLAD_HPP
#define ENTDYN_LINDBLAD_HPP

#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "entdyn/negativity.hpp"
#include "entdyn/operators.hpp"
#include "entdyn/states.hpp"

namespace entdyn {

struct JumpOperator {
  double rate;  // lambda_j >= 0, in 1/time
  OperatorSpec op;
};

/// Hamiltonian plus weighted jump operators. H must be number conserving and
/// Hermitian on every sector; each jump maps any N-sector into a single
/// N'-sector (uniform net particle change).
struct LindbladGenerator {
  OperatorSpec hamiltonian;
  std::vector<JumpOperator> jumps;

  static LindbladGenerator dephasing(const std::vector<double>& rates,
                                     OperatorSpec h = {}) {
    LindbladGenerator gen;
    gen.hamiltonian = std::move(h);
    for (int j = 0; j < static_cast<int>(rates.size()); ++j)
      gen.jumps.push_back({rates[j], OperatorSpec::number(j + 1)});
    return gen;
  }

  static LindbladGenerator loss(const std::vector<double>& rates,
                                OperatorSpec h = {}) {
    LindbladGenerator gen;
    gen.hamiltonian = std::move(h);
    for (int j = 0; j < static_cast<int>(rates.size()); ++j)
      gen.jumps.push_back({rates[j], OperatorSpec::annihilation(j + 1)});
    return gen;
  }

  LindbladGenerator hamiltonian_only() const {
    return LindbladGenerator{hamiltonian, {}};
  }

  /// Largest coupling in the generator (rates and |H| coefficients); its
  /// inverse is the characteristic time reported in diagnostics.
  double max_scale() const {
    double scale = 0.0;
    for (const auto& j : jumps) scale = std::max(scale, j.rate);
    for (const auto& t : hamiltonian.terms)
      scale = std::max(scale, std::abs(t.coeff));
    return scale;
  }
};

/// The generator rendered as a matrix on vectorized density-matrix blocks
/// over a direct sum of particle-number sectors. Number-conserving terms act
/// within each sector; loss terms feed sector N into sector N + d (d < 0).
class Liouvillian {
 public:
  Liouvillian(const LindbladGenerator& gen, std::vector<int> sectors,
              int n_modes)
      : generator_(gen), sectors_(std::move(sectors)), n_modes_(n_modes) {
    if (sectors_.empty()) throw InvalidState("empty sector list");
    gen.hamiltonian.validate_modes(n_modes);
    if (!gen.hamiltonian.empty() &&
        gen.hamiltonian.net_particle_change() != 0)
      throw InvalidState("hamiltonian must conserve the particle number");
    for (const auto& j : gen.jumps) {
      j.op.validate_modes(n_modes);
      if (j.rate < 0) throw InvalidState("negative jump rate");
      if (j.op.net_particle_change() > 0)
        throw InvalidState(
            "jump operators must not increase the particle number");
    }

    dims_.reserve(sectors_.size());
    offsets_.reserve(sectors_.size());
    Eigen::Index total = 0;
    for (int s : sectors_) {
      const auto d = static_cast<Eigen::Index>(sector_dimension(s, n_modes));
      dims_.push_back(d);
      offsets_.push_back(total);
      total += d * d;
    }
    matrix_ = MatrixXcd::Zero(total, total);

    const Complex i_unit(0, 1);
    for (std::size_t si = 0; si < sectors_.size(); ++si) {
      const int s = sectors_[si];
      const Eigen::Index d = dims_[si];
      const MatrixXcd eye = MatrixXcd::Identity(d, d);
      MatrixXcd block = MatrixXcd::Zero(d * d, d * d);
      if (!gen.hamiltonian.empty()) {
        const MatrixXcd h = ladder_matrix(gen.hamiltonian, s, n_modes);
        if (hermiticity_defect(h) > 1e-12)
          throw InvalidState("hamiltonian is not Hermitian on sector " +
                             std::to_string(s));
        block += -i_unit * (kron(eye, h) - kron(h.transpose(), eye));
      }
      for (const auto& jump : gen.jumps) {
        if (jump.rate == 0.0) continue;
        const MatrixXcd a = ladder_matrix(jump.op, s, n_modes);
        const MatrixXcd k = a.adjoint() * a;
        block -= 0.5 * jump.rate * (kron(eye, k) + kron(k.transpose(), eye));
        const int target = s + jump.op.net_particle_change();
        if (target == s) {
          block += jump.rate * kron(a.conjugate(), a);
        } else if (target >= 0 && a.size() > 0 && a.cwiseAbs().maxCoeff() > 0) {
          const auto ti = sector_index(target);
          if (!ti)
            throw InvalidState(
                "loss feed from sector " + std::to_string(s) +
                " lands outside the represented direct sum");
          matrix_.block(offsets_[*ti], offsets_[si],
                        dims_[*ti] * dims_[*ti], d * d) +=
              jump.rate * kron(a.conjugate(), a);
        }
      }
      matrix_.block(offsets_[si], offsets_[si], d * d, d * d) += block;
    }
  }

  const MatrixXcd& matrix() const { return matrix_; }
  const std::vector<int>& sectors() const { return sectors_; }
  int modes() const { return n_modes_; }
  Eigen::Index total_dim() const { return matrix_.rows(); }
  const LindbladGenerator& generator() const { return generator_; }

  std::optional<std::size_t> sector_index(int s) const {
    for (std::size_t i = 0; i < sectors_.size(); ++i)
      if (sectors_[i] == s) return i;
    return std::nullopt;
  }

  Eigen::Index sector_dim(std::size_t index) const { return dims_[index]; }
  Eigen::Index sector_offset(std::size_t index) const {
    return offsets_[index];
  }

  /// Stacks weight * rho per sector into the direct-sum vector
  /// (column-major vectorization).
  VectorXcd to_vector(const NumberMixture& mixture) const {
    if (mixture.modes() != n_modes_)
      throw InvalidState("mixture mode count does not match the Liouvillian");
    VectorXcd v = VectorXcd::Zero(total_dim());
    for (const auto& c : mixture.components()) {
      const auto si = sector_index(c.state.particles());
      if (!si)
        throw InvalidState("mixture component in sector " +
                           std::to_string(c.state.particles()) +
                           " outside the Liouvillian domain");
      const Eigen::Index d = dims_[*si];
      Eigen::Map<MatrixXcd>(v.data() + offsets_[*si], d, d) =
          c.weight * c.state.matrix();
    }
    return v;
  }

  /// Splits a direct-sum vector back into a validated mixture. The total
  /// trace must stay within `trace_tol` of 1; each nonvanishing sector block
  /// must be Hermitian to 1e-10 and have min eigenvalue >= -positivity_tol
  /// after normalization.
  NumberMixture to_mixture(const VectorXcd& v, double trace_tol = 1e-9,
                           double positivity_tol = 1e-8) const {
    std::vector<NumberMixture::Component> components;
    double total = 0.0;
    for (std::size_t si = 0; si < sectors_.size(); ++si) {
      const Eigen::Index d = dims_[si];
      const MatrixXcd block =
          Eigen::Map<const MatrixXcd>(v.data() + offsets_[si], d, d);
      const double w = block.trace().real();
      total += w;
      if (w < 1e-14) continue;
      MatrixXcd rho = block / w;
      if (hermiticity_defect(rho) > 1e-10)
        throw PositivityViolation("evolved block lost Hermiticity in sector " +
                                  std::to_string(sectors_[si]));
      if (min_eigenvalue(rho) < -positivity_tol)
        throw PositivityViolation(
            "evolved state has a negative eigenvalue in sector " +
            std::to_string(sectors_[si]));
      components.push_back({w, SectorDensityMatrix(sectors_[si], n_modes_,
                                                   hermitize(rho))});
    }
    if (std::abs(total - 1.0) > trace_tol)
      throw TaskFailed("trace drifted to " + std::to_string(total));
    return NumberMixture(std::move(components), trace_tol);
  }

 private:
  LindbladGenerator generator_;
  std::vector<int> sectors_;
  int n_modes_;
  std::vector<Eigen::Index> dims_;
  std::vector<Eigen::Index> offsets_;
  MatrixXcd matrix_;
};

/// Liouvillian on the direct sum of sectors 0..n_max.
inline Liouvillian build_liouvillian(const LindbladGenerator& gen, int n_max,
                                     int n_modes) {
  std::vector<int> sectors(n_max + 1);
  for (int s = 0; s <= n_max; ++s) sectors[s] = s;
  return Liouvillian(gen, std::move(sectors), n_modes);
}

/// Liouvillian restricted to one particle-number sector; requires a
/// number-conserving generator.
inline Liouvillian build_sector_liouvillian(const LindbladGenerator& gen,
                                            int n_particles, int n_modes) {
  return Liouvillian(gen, {n_particles}, n_modes);
}

enum class ExpMethod { kEigendecomposition, kScalingSquaring };

struct EvolveDiagnostics {
  ExpMethod method = ExpMethod::kEigendecomposition;
  double eigenvector_condition = 0.0;
  double characteristic_time = 0.0;  // 1 / (largest rate or energy)
};

/// exp(tL) applied through a cached spectral decomposition of the assembled
/// superoperator; falls back to scaling-and-squaring when the eigenvector
/// matrix is ill conditioned.
class Propagator {
 public:
  explicit Propagator(Liouvillian liouvillian, double condition_limit = 1e8)
      : liouvillian_(std::move(liouvillian)) {
    const double scale = liouvillian_.generator().max_scale();
    diagnostics_.characteristic_time = scale > 0 ? 1.0 / scale : 0.0;
    Eigen::ComplexEigenSolver<MatrixXcd> es(liouvillian_.matrix());
    bool usable = es.info() == Eigen::Success;
    if (usable) {
      eigenvalues_ = es.eigenvalues();
      vectors_ = es.eigenvectors();
      Eigen::PartialPivLU<MatrixXcd> lu(vectors_);
      inverse_vectors_ = lu.inverse();
      diagnostics_.eigenvector_condition =
          vectors_.norm() * inverse_vectors_.norm();
      const double rec_err =
          (vectors_ * eigenvalues_.asDiagonal() * inverse_vectors_ -
           liouvillian_.matrix())
              .cwiseAbs()
              .maxCoeff();
      const double l_scale =
          std::max(1.0, liouvillian_.matrix().cwiseAbs().maxCoeff());
      usable = diagnostics_.eigenvector_condition < condition_limit &&
               rec_err < 1e-10 * l_scale * diagnostics_.eigenvector_condition;
    }
    diagnostics_.method = usable ? ExpMethod::kEigendecomposition
                                 : ExpMethod::kScalingSquaring;
  }

  const EvolveDiagnostics& diagnostics() const { return diagnostics_; }
  const Liouvillian& liouvillian() const { return liouvillian_; }

  VectorXcd apply(const VectorXcd& v, double t) const {
    if (t < 0) throw InvalidState("negative evolution time");
    if (diagnostics_.method == ExpMethod::kEigendecomposition) {
      VectorXcd phases(eigenvalues_.size());
      for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i)
        phases(i) = std::exp(t * eigenvalues_(i));
      return vectors_ *
             (phases.asDiagonal() * (inverse_vectors_ * v));
    }
    const MatrixXcd propagator = (t * liouvillian_.matrix()).exp();
    return propagator * v;
  }

  NumberMixture evolve(const NumberMixture& rho0, double t) const {
    return liouvillian_.to_mixture(apply(liouvillian_.to_vector(rho0), t));
  }

 private:
  Liouvillian liouvillian_;
  VectorXcd eigenvalues_;
  MatrixXcd vectors_, inverse_vectors_;
  EvolveDiagnostics diagnostics_;
};

/// rho_t = exp(tL)[rho_0].
inline NumberMixture evolve_exact(const Liouvillian& liouvillian,
                                  const NumberMixture& rho0, double t,
                                  EvolveDiagnostics* diagnostics = nullptr) {
  const Propagator propagator(liouvillian);
  if (diagnostics) *diagnostics = propagator.diagnostics();
  return propagator.evolve(rho0, t);
}

/// Classical fourth-order Runge-Kutta on the vectorized direct sum. Default
/// step is t/1000, which keeps the global error below the comparison
/// tolerances of the regression cases.
inline NumberMixture evolve_rk4(const Liouvillian& liouvillian,
                                const NumberMixture& rho0, double t,
                                double dt = -1.0) {
  if (t < 0) throw InvalidState("negative evolution time");
  if (t == 0.0) return rho0;
  if (dt <= 0.0) dt = t / 1000.0;
  const int n_steps = std::max(1, static_cast<int>(std::ceil(t / dt)));
  const double h = t / n_steps;
  const MatrixXcd& l = liouvillian.matrix();
  VectorXcd x = liouvillian.to_vector(rho0);
  for (int step = 0; step < n_steps; ++step) {
    const VectorXcd k1 = l * x;
    const VectorXcd k2 = l * (x + 0.5 * h * k1);
    const VectorXcd k3 = l * (x + 0.5 * h * k2);
    const VectorXcd k4 = l * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return liouvillian.to_mixture(x);
}

/// (exp(tL_a/n) exp(tL_b/n))^n applied to rho0; converges to
/// evolve_exact(L_a + L_b) with error O(1/n).
inline NumberMixture evolve_trotter(const Liouvillian& l_a,
                                    const Liouvillian& l_b,
                                    const NumberMixture& rho0, double t,
                                    int n) {
  if (n < 1) throw InvalidState("Trotter steps must be >= 1");
  if (l_a.total_dim() != l_b.total_dim() || l_a.modes() != l_b.modes() ||
      l_a.sectors() != l_b.sectors())
    throw InvalidState("Trotter factors live on different domains");
  const MatrixXcd step_a = (t / n * l_a.matrix()).exp();
  const MatrixXcd step_b = (t / n * l_b.matrix()).exp();
  VectorXcd x = l_a.to_vector(rho0);
  for (int i = 0; i < n; ++i) x = step_a * (step_b * x);
  return l_a.to_mixture(x);
}

/// Null space of L: its dimension, a Hilbert-Schmidt-orthonormal Hermitian
/// basis (as direct-sum vectors), and the stationary density matrices found
/// inside it. For a unique kernel the single basis element, trace-normalized,
/// is the stationary state.
struct StationarySpace {
  int dimension = 0;
  std::vector<VectorXcd> hermitian_basis;
  std::vector<NumberMixture> states;
};

namespace detail {

inline VectorXcd adjoint_vector(const Liouvillian& l, const VectorXcd& v) {
  VectorXcd out(v.size());
  for (std::size_t si = 0; si < l.sectors().size(); ++si) {
    const Eigen::Index d = l.sector_dim(si);
    Eigen::Map<MatrixXcd>(out.data() + l.sector_offset(si), d, d) =
        Eigen::Map<const MatrixXcd>(v.data() + l.sector_offset(si), d, d)
            .adjoint();
  }
  return out;
}

inline double direct_sum_trace(const Liouvillian& l, const VectorXcd& v) {
  double tr = 0.0;
  for (std::size_t si = 0; si < l.sectors().size(); ++si) {
    const Eigen::Index d = l.sector_dim(si);
    tr += Eigen::Map<const MatrixXcd>(v.data() + l.sector_offset(si), d, d)
              .trace()
              .real();
  }
  return tr;
}

inline std::optional<NumberMixture> as_state(const Liouvillian& l,
                                             const VectorXcd& v) {
  const double tr = direct_sum_trace(l, v);
  if (std::abs(tr) < 1e-10) return std::nullopt;
  const VectorXcd scaled = v / tr;
  std::vector<NumberMixture::Component> components;
  for (std::size_t si = 0; si < l.sectors().size(); ++si) {
    const Eigen::Index d = l.sector_dim(si);
    MatrixXcd block =
        Eigen::Map<const MatrixXcd>(scaled.data() + l.sector_offset(si), d, d);
    block = hermitize(block);
    const double w = block.trace().real();
    if (std::abs(w) < 1e-12) continue;
    if (w < 0 || min_eigenvalue(block / w) < -1e-9) return std::nullopt;
    components.push_back(
        {w, SectorDensityMatrix(l.sectors()[si], l.modes(), block / w)});
  }
  if (components.empty()) return std::nullopt;
  return NumberMixture(std::move(components), 1e-9);
}

}  // namespace detail

inline StationarySpace stationary_states(const Liouvillian& liouvillian) {
  StationarySpace space;
  const auto kernel = null_space(liouvillian.matrix());
  space.dimension = static_cast<int>(kernel.size());

  // Hermitian ON basis: the kernel is closed under the adjoint, so the
  // Hermitian/anti-Hermitian parts of the complex basis span it over R.
  std::vector<VectorXcd> candidates;
  for (const auto& v : kernel) {
    const VectorXcd vdag = detail::adjoint_vector(liouvillian, v);
    candidates.push_back(0.5 * (v + vdag));
    candidates.push_back(Complex(0, -0.5) * (v - vdag));
  }
  for (const auto& c : candidates) {
    VectorXcd r = c;
    for (const auto& b : space.hermitian_basis) r -= b.dot(r) * b;
    if (r.norm() > 1e-8) space.hermitian_basis.push_back(r / r.norm());
    if (static_cast<int>(space.hermitian_basis.size()) == space.dimension)
      break;
  }

  // Stationary density matrices: basis elements that are (sign-fixed)
  // positive, plus positive/negative parts that happen to stay in the kernel.
  const double l_norm = std::max(1.0, liouvillian.matrix().norm());
  auto in_kernel = [&](const VectorXcd& v) {
    return (liouvillian.matrix() * v).norm() <= 1e-8 * l_norm * v.norm();
  };
  std::vector<VectorXcd> state_vectors;
  auto consider = [&](const VectorXcd& v) {
    if (v.norm() < 1e-12 || !in_kernel(v)) return;
    auto state = detail::as_state(liouvillian, v);
    if (!state) return;
    VectorXcd unit = v / v.norm();
    for (const auto& seen : state_vectors)
      unit -= seen.dot(unit) * seen;
    if (unit.norm() < 1e-6) return;  // linearly dependent on earlier states
    state_vectors.push_back(unit / unit.norm());
    space.states.push_back(std::move(*state));
  };
  for (const auto& b : space.hermitian_basis) {
    const double tr = detail::direct_sum_trace(liouvillian, b);
    consider(tr >= 0 ? b : VectorXcd(-b));
    // Split into positive and negative parts sector by sector.
    VectorXcd pos = VectorXcd::Zero(b.size());
    VectorXcd neg = VectorXcd::Zero(b.size());
    for (std::size_t si = 0; si < liouvillian.sectors().size(); ++si) {
      const Eigen::Index d = liouvillian.sector_dim(si);
      const MatrixXcd block = hermitize(Eigen::Map<const MatrixXcd>(
          b.data() + liouvillian.sector_offset(si), d, d));
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(block);
      MatrixXcd p = MatrixXcd::Zero(d, d), q = MatrixXcd::Zero(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        const auto vec = es.eigenvectors().col(i);
        if (es.eigenvalues()(i) > 0)
          p += es.eigenvalues()(i) * vec * vec.adjoint();
        else
          q -= es.eigenvalues()(i) * vec * vec.adjoint();
      }
      Eigen::Map<MatrixXcd>(pos.data() + liouvillian.sector_offset(si), d, d) =
          p;
      Eigen::Map<MatrixXcd>(neg.data() + liouvillian.sector_offset(si), d, d) =
          q;
    }
    consider(pos);
    consider(neg);
  }
  return space;
}

/// Closed-form evolution of example_state(p) under the single loss operator
/// A_0 = a_1 a_3 with rate lambda0 and H = sum_j eps_j n_j: the two-particle
/// sector keeps psi2, psi3 and the damped psi1(t), while the vacuum picks up
/// weight p/2 (1 - e^{-t lambda0}).
inline NumberMixture analytic_loss_example(double p, double lambda0,
                                           const std::array<double, 4>& eps,
                                           double t) {
  if (p < 0.0 || p > 1.0) throw InvalidProbability("p must lie in [0, 1]");
  if (lambda0 < 0 || t < 0) throw InvalidState("negative rate or time");
  const FockBasis basis(2, 4);
  auto fock = [&](int k1, int k2, int k3, int k4) {
    FockState occ(4);
    occ << k1, k2, k3, k4;
    return basis.rank(occ);
  };
  const Complex i_unit(0, 1);
  VectorXcd psi1 = VectorXcd::Zero(basis.dim());
  psi1(fock(0, 1, 0, 1)) =
      std::exp(-i_unit * t * (eps[1] + eps[3])) / std::sqrt(2.0);
  psi1(fock(1, 0, 1, 0)) =
      std::exp(-t * (lambda0 / 2.0) - i_unit * t * (eps[0] + eps[2])) /
      std::sqrt(2.0);
  VectorXcd psi2 = VectorXcd::Zero(basis.dim());
  psi2(fock(0, 1, 1, 0)) = 1.0;
  VectorXcd psi3 = VectorXcd::Zero(basis.dim());
  psi3(fock(1, 0, 0, 1)) = 1.0;
  MatrixXcd two_particle =
      p * psi1 * psi1.adjoint() +
      0.5 * (1.0 - p) * (psi2 * psi2.adjoint() + psi3 * psi3.adjoint());
  const double w2 = two_particle.trace().real();
  const double w0 = 0.5 * p * (1.0 - std::exp(-t * lambda0));
  std::vector<NumberMixture::Component> components;
  components.push_back(
      {w2, SectorDensityMatrix(2, 4, two_particle / w2)});
  components.push_back({w0, SectorDensityMatrix::vacuum(4)});
  return NumberMixture(std::move(components), 1e-9);
}

/// Closed-form evolution of example_state(p) under dephasing with rates
/// lambda_j and H = sum_j eps_j n_j: the psi1 coherence is damped by
/// e^{-t sum_j lambda_j / 2} and rotated by the energy mismatch.
inline SectorDensityMatrix analytic_dephasing_example(
    double p, const std::array<double, 4>& lambda,
    const std::array<double, 4>& eps, double t) {
  if (p < 0.0 || p > 1.0) throw InvalidProbability("p must lie in [0, 1]");
  for (double l : lambda)
    if (l < 0) throw InvalidState("negative dephasing rate");
  if (t < 0) throw InvalidState("negative time");
  const FockBasis basis(2, 4);
  auto fock = [&](int k1, int k2, int k3, int k4) {
    FockState occ(4);
    occ << k1, k2, k3, k4;
    return basis.rank(occ);
  };
  const Eigen::Index i1010 = fock(1, 0, 1, 0);
  const Eigen::Index i0101 = fock(0, 1, 0, 1);
  const Eigen::Index i0110 = fock(0, 1, 1, 0);
  const Eigen::Index i1001 = fock(1, 0, 0, 1);
  const double lambda_sum = lambda[0] + lambda[1] + lambda[2] + lambda[3];
  const Complex i_unit(0, 1);
  const Complex coherence =
      0.5 * p * std::exp(-t * lambda_sum / 2.0) *
      std::exp(i_unit * t * (eps[1] + eps[3] - eps[0] - eps[2]));
  MatrixXcd rho = MatrixXcd::Zero(basis.dim(), basis.dim());
  rho(i0101, i0101) = 0.5 * p;
  rho(i1010, i1010) = 0.5 * p;
  rho(i0110, i0110) = 0.5 * (1.0 - p);
  rho(i1001, i1001) = 0.5 * (1.0 - p);
  rho(i1010, i0101) = coherence;
  rho(i0101, i1010) = std::conj(coherence);
  return SectorDensityMatrix(2, 4, std::move(rho));
}

}  // namespace entdyn

#endif  // ENTDYN_LINDBLAD_HPP
