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

#ifndef ENTDYN_ANALYSIS_HPP
#define ENTDYN_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "entdyn/lindblad.hpp"
#include "entdyn/negativity.hpp"

namespace entdyn {

/// Negativity trajectory against an exponentially damped reference: lhs_i =
/// N(rho_{t_i}) under the full generator, rhs_i = e^{-t_i rate} times the
/// negativity of the Hamiltonian-only flow. margin = min(lhs - rhs).
struct BoundTrace {
  std::vector<double> times;
  std::vector<double> lhs;
  std::vector<double> rhs;
  double rate = 0.0;  // eta for losses, N^2 sum(lambda)/2 for dephasing
  double margin = 0.0;

  bool holds(double tol = 1e-9) const { return margin >= -tol; }
};

namespace detail {

/// Product-local per the algebraic bipartition: a single word always factors
/// into its A-side and B-side parts; a multi-term polynomial qualifies only
/// when all terms act on one side.
inline bool is_product_local(const OperatorSpec& spec, const Bipartition& bip) {
  if (spec.terms.size() <= 1) return true;
  bool all_a = true, all_b = true;
  for (const auto& t : spec.terms)
    for (const auto& op : t.word) {
      if (op.mode <= bip.m)
        all_b = false;
      else
        all_a = false;
    }
  return all_a || all_b;
}

inline bool is_number_operator(const OperatorSpec& spec, int* mode = nullptr) {
  if (spec.terms.size() != 1) return false;
  const auto& t = spec.terms.front();
  if (std::abs(t.coeff - Complex(1, 0)) > 1e-12) return false;
  if (t.word.size() != 2) return false;
  if (t.word[0].kind != Ladder::kCreate ||
      t.word[1].kind != Ladder::kAnnihilate)
    return false;
  if (t.word[0].mode != t.word[1].mode) return false;
  if (mode) *mode = t.word[0].mode;
  return true;
}

inline BoundTrace bound_trace(const LindbladGenerator& gen,
                              const SectorDensityMatrix& rho0,
                              const Bipartition& bip,
                              const std::vector<double>& times, double rate) {
  const int n = rho0.particles();
  const Liouvillian full = build_liouvillian(gen, n, bip.n_modes);
  const Liouvillian ham =
      build_liouvillian(gen.hamiltonian_only(), n, bip.n_modes);
  const Propagator full_prop(full);
  const Propagator ham_prop(ham);
  const NumberMixture rho_mix = NumberMixture::pure_sector(rho0);
  BoundTrace trace;
  trace.times = times;
  trace.rate = rate;
  trace.margin = std::numeric_limits<double>::infinity();
  for (double t : times) {
    const double lhs = negativity_mixture(full_prop.evolve(rho_mix, t), bip);
    const double rhs = std::exp(-t * rate) *
                       negativity_mixture(ham_prop.evolve(rho_mix, t), bip);
    trace.lhs.push_back(lhs);
    trace.rhs.push_back(rhs);
    trace.margin = std::min(trace.margin, lhs - rhs);
  }
  return trace;
}

}  // namespace detail

/// Verifies the loss lower bound N(rho_t) >= e^{-t eta} N(ham flow) with eta
/// the top eigenvalue of sum_j lambda_j A_j†A_j on the N-particle sector.
/// Jump operators must be product-local for the bipartition.
inline BoundTrace check_loss_bound(const LindbladGenerator& gen,
                                   const SectorDensityMatrix& rho0,
                                   const Bipartition& bip,
                                   const std::vector<double>& times) {
  for (const auto& j : gen.jumps)
    if (!detail::is_product_local(j.op, bip))
      throw PreconditionViolated(
          "a jump operator straddles the bipartition without factorizing");
  const int n = rho0.particles();
  const auto dim =
      static_cast<Eigen::Index>(sector_dimension(n, bip.n_modes));
  MatrixXcd k = MatrixXcd::Zero(dim, dim);
  for (const auto& j : gen.jumps) {
    const MatrixXcd a = ladder_matrix(j.op, n, bip.n_modes);
    k += j.rate * a.adjoint() * a;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(k, Eigen::EigenvaluesOnly);
  const double eta = dim > 0 ? es.eigenvalues().maxCoeff() : 0.0;
  return detail::bound_trace(gen, rho0, bip, times, eta);
}

/// Verifies the dephasing lower bound
/// N(rho_t) >= e^{-t N^2 sum_j lambda_j / 2} N(ham flow); jumps must be
/// number operators a_j†a_j.
inline BoundTrace check_dephasing_bound(const LindbladGenerator& gen,
                                        const SectorDensityMatrix& rho0,
                                        const Bipartition& bip,
                                        const std::vector<double>& times) {
  double lambda_sum = 0.0;
  for (const auto& j : gen.jumps) {
    if (!detail::is_number_operator(j.op))
      throw PreconditionViolated("dephasing bound requires a_j†a_j jumps");
    lambda_sum += j.rate;
  }
  const double n = rho0.particles();
  return detail::bound_trace(gen, rho0, bip, times, 0.5 * n * n * lambda_sum);
}

/// Checks |<k|rho_t|kbar>| = e^{-t sum_j lambda_j (k_j - kbar_j)^2 / 2}
/// |<k|rho_0|kbar>| element by element; returns the largest deviation
/// relative to the largest initial coefficient. The equality holds exactly
/// for Fock-diagonal H and fails once hopping is added.
inline double check_decoherence_equality(const LindbladGenerator& gen,
                                         const SectorDensityMatrix& rho0,
                                         double t) {
  std::vector<double> rates(rho0.modes(), 0.0);
  for (const auto& j : gen.jumps) {
    int mode = 0;
    if (!detail::is_number_operator(j.op, &mode))
      throw PreconditionViolated(
          "decoherence equality requires a_j†a_j jumps");
    rates[mode - 1] += j.rate;
  }
  const int n = rho0.particles();
  const Liouvillian l = build_sector_liouvillian(gen, n, rho0.modes());
  const NumberMixture evolved =
      evolve_exact(l, NumberMixture::pure_sector(rho0), t);
  const MatrixXcd& rho_t = evolved.components().front().state.matrix();
  const FockBasis basis(n, rho0.modes());
  const double scale = rho0.matrix().cwiseAbs().maxCoeff();
  double deviation = 0.0;
  for (Eigen::Index r = 0; r < basis.dim(); ++r)
    for (Eigen::Index c = 0; c < basis.dim(); ++c) {
      double exponent = 0.0;
      for (int j = 0; j < rho0.modes(); ++j) {
        const double diff = basis.state(r)(j) - basis.state(c)(j);
        exponent += rates[j] * diff * diff;
      }
      const double expected =
          std::exp(-0.5 * t * exponent) * std::abs(rho0.matrix()(r, c));
      deviation =
          std::max(deviation, std::abs(std::abs(rho_t(r, c)) - expected));
    }
  return deviation / std::max(scale, 1e-300);
}

enum class ExampleKind { kLoss, kDephasing };

/// Time at which the evolved example state crosses into separability:
/// t* = (2 / rate) ln(p / (1-p)) with rate = lambda_0 for the loss example
/// and sum_j lambda_j for dephasing. nullopt when p <= 1/2 (separable from
/// the start) or the rate vanishes.
inline std::optional<double> threshold_time(ExampleKind kind, double p,
                                            const std::vector<double>& rates) {
  if (p < 0.0 || p > 1.0) throw InvalidProbability("p must lie in [0, 1]");
  double rate = 0.0;
  if (kind == ExampleKind::kLoss) {
    if (rates.size() != 1)
      throw InvalidState("loss threshold takes the single rate lambda_0");
    rate = rates.front();
  } else {
    for (double r : rates) rate += r;
  }
  if (p <= 0.5) return std::nullopt;
  if (rate <= 0.0) return std::nullopt;  // never separates
  return (2.0 / rate) * std::log(p / (1.0 - p));
}

struct ThresholdValidation {
  std::optional<double> t_star;
  double negativity_before = 0.0;  // at 0.9 t*
  double negativity_after = 0.0;   // at 1.01 t*
  bool consistent = true;
};

/// Cross-validates the closed-form threshold against the oracle negativity of
/// the analytically evolved state.
inline ThresholdValidation validate_threshold(ExampleKind kind, double p,
                                              const std::vector<double>& rates) {
  ThresholdValidation out;
  out.t_star = threshold_time(kind, p, rates);
  if (!out.t_star) return out;
  const Bipartition bip(2, 4);
  auto negativity_at = [&](double t) {
    if (kind == ExampleKind::kLoss) {
      const NumberMixture mix =
          analytic_loss_example(p, rates.front(), {0, 0, 0, 0}, t);
      return negativity_mixture(mix, bip, NegativityMethod::kOracle);
    }
    const std::array<double, 4> lambda{rates.at(0), rates.at(1), rates.at(2),
                                       rates.at(3)};
    return negativity_oracle(
               analytic_dephasing_example(p, lambda, {0, 0, 0, 0}, t), bip)
        .value;
  };
  out.negativity_before = negativity_at(0.9 * *out.t_star);
  out.negativity_after = negativity_at(1.01 * *out.t_star);
  out.consistent =
      out.negativity_before > 1e-6 && out.negativity_after < 1e-10;
  return out;
}

/// Two-mode member of the diagonal coherence class prepared for the large-N
/// machinery: coefficient table rho[k, l] on the (N+1)-dimensional sector,
/// evolving under dephasing rates lambda_j with damping
/// e^{-t/2 sum_j lambda_j (k_j - l_j)^2}. The two-mode case forces
/// alpha = c_1 = c_2 = 1 and S = lambda_1 + lambda_2.
struct AsymptoticSpec {
  int n_particles = 0;
  double alpha = 1.0;
  std::vector<double> c{1.0, 1.0};
  std::vector<double> rates{0.0, 0.0};
  MatrixXcd coefficients;  // (N+1) x (N+1), Hermitian, unit trace
  int n_terms = 2;

  double S() const {
    double s = 0.0;
    for (std::size_t j = 0; j < rates.size(); ++j) s += rates[j] * c[j];
    return s;
  }

  void validate() const {
    if (c.size() != 2 || rates.size() != 2)
      throw ConstraintViolation(
          "the asymptotic machinery covers the two-mode class");
    if (alpha != 1.0 || c[0] != 1.0 || c[1] != 1.0)
      throw ConstraintViolation("the two-mode class forces alpha = c_j = 1");
    for (double r : rates)
      if (r < 0) throw ConstraintViolation("negative dephasing rate");
    if (S() <= 0) throw ConstraintViolation("S must be positive");
    if (coefficients.rows() != n_particles + 1 ||
        coefficients.cols() != n_particles + 1)
      throw ConstraintViolation("coefficient table must be (N+1) x (N+1)");
    if (hermiticity_defect(coefficients) > 1e-10)
      throw ConstraintViolation("coefficient table is not Hermitian");
    if (std::abs(coefficients.trace().real() - 1.0) > 1e-9)
      throw ConstraintViolation("coefficient table trace is not 1");
  }

  static AsymptoticSpec flat_two_mode(int n_particles, double lambda1,
                                      double lambda2, int n_terms = 2) {
    AsymptoticSpec spec;
    spec.n_particles = n_particles;
    spec.rates = {lambda1, lambda2};
    spec.coefficients = MatrixXcd::Constant(n_particles + 1, n_particles + 1,
                                            Complex(1.0 / (n_particles + 1), 0));
    spec.n_terms = n_terms;
    return spec;
  }
};

/// Exact negativity of the evolved two-mode class state:
/// N = 1/2 (sum_{k,l} |rho_t[k,l]| - 1) with the per-coefficient damping and
/// energy phases applied first (the phases drop out of the modulus).
inline double largen_exact(const AsymptoticSpec& spec,
                           const std::vector<double>& energies, double t) {
  spec.validate();
  if (energies.size() != 2)
    throw ConstraintViolation("two mode energies expected");
  const int n = spec.n_particles;
  const double gamma = spec.rates[0] + spec.rates[1];
  const double phase_rate = energies[0] - energies[1];
  double sum = 0.0;
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l) {
      const double diff = k - l;
      const Complex damped =
          spec.coefficients(k, l) *
          std::exp(Complex(-0.5 * t * gamma * diff * diff,
                           -t * phase_rate * diff));
      sum += std::abs(damped);
    }
  return 0.5 * (sum - 1.0);
}

struct AsymptoticResult {
  double value = 0.0;
  bool in_validity_window = false;
  double t_s = 0.0;        // t S
  double t_s_n2a = 0.0;    // t S N^{2 alpha}
};

namespace detail {

/// Weights of the central finite-difference stencil for the q-th derivative
/// on offsets -w..w, solved from the moment conditions.
inline std::vector<double> fd_weights(int q, int w, double h) {
  const int n_pts = 2 * w + 1;
  Eigen::MatrixXd moments(n_pts, n_pts);
  for (int row = 0; row < n_pts; ++row)
    for (int col = 0; col < n_pts; ++col)
      moments(row, col) = std::pow(static_cast<double>(col - w), row);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_pts);
  double q_factorial = 1.0;
  for (int i = 2; i <= q; ++i) q_factorial *= i;
  rhs(q) = q_factorial;
  const Eigen::VectorXd x = moments.fullPivLu().solve(rhs);
  std::vector<double> weights(n_pts);
  for (int i = 0; i < n_pts; ++i) weights[i] = x(i) / std::pow(h, q);
  return weights;
}

/// Composite Simpson on a uniform grid; trapezoid for a trailing odd panel.
inline double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  std::size_t i = 0;
  while (i + 2 < n) {
    total += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    i += 2;
  }
  if (i + 1 < n) total += 0.5 * h * (f[i] + f[i + 1]);
  return total;
}

/// integral over x of |d^{2n}/dy^{2n} R|_{y=0}, R(x+y/2, x-y/2) = N rho[k,l]
/// sampled along anti-diagonals of the coefficient table (y step 2/N).
inline double derivative_integral(const AsymptoticSpec& spec, int order_2n) {
  const int n = spec.n_particles;
  const double h_y = 2.0 / n;
  const int half = order_2n / 2;
  std::vector<double> values;
  values.reserve(n + 1);
  for (int k0 = 0; k0 <= n; ++k0) {
    const int reach = std::min(k0, n - k0);
    const int w = std::min(half + 1, reach);  // prefer one extra pair
    if (w < half) {
      values.push_back(0.0);  // derivative not resolvable at the edge
      continue;
    }
    const auto weights = fd_weights(order_2n, w, h_y);
    Complex d(0, 0);
    for (int j = -w; j <= w; ++j)
      d += weights[j + w] *
           (static_cast<double>(n) * spec.coefficients(k0 + j, k0 - j));
    values.push_back(std::abs(d));
  }
  return simpson(values, 1.0 / n);
}

}  // namespace detail

/// Truncated asymptotic series for the negativity of the evolved two-mode
/// class state,
///   N ~ -1/2 + 2^{1/(2a)} Gamma(1 + 1/(2a)) / (tS)^{1/(2a)} + higher terms
/// with 1/N^{2n} suppression. Valid for t S N^{2 alpha} >> 1 and t S <= 1;
/// outside that window the value is still returned but flagged.
inline AsymptoticResult largen_asymptotic(const AsymptoticSpec& spec, double t,
                                          double validity_gate = 10.0) {
  spec.validate();
  AsymptoticResult out;
  const double s = spec.S();
  out.t_s = t * s;
  out.t_s_n2a = out.t_s * std::pow(spec.n_particles, 2.0 * spec.alpha);
  out.in_validity_window =
      out.t_s_n2a >= validity_gate && out.t_s <= 1.0 && out.t_s > 0.0;
  const double a2 = 2.0 * spec.alpha;
  out.value = -0.5 + std::pow(2.0, 1.0 / a2) * std::tgamma(1.0 + 1.0 / a2) /
                         std::pow(out.t_s, 1.0 / a2);
  double factorial = 1.0;  // (2n+1)!
  for (int term = 1; term <= spec.n_terms; ++term) {
    factorial *= (2.0 * term) * (2.0 * term + 1.0);
    const double exponent = (2.0 * term + 1.0) / a2;
    const double integral = detail::derivative_integral(spec, 2 * term);
    if (integral == 0.0) continue;
    out.value += std::pow(2.0, exponent) * std::tgamma(1.0 + exponent) /
                 (factorial * std::pow(spec.n_particles, 2.0 * term) *
                  std::pow(out.t_s, exponent)) *
                 integral;
  }
  return out;
}

/// Competing decay models fitted to the exact trajectory of one class state:
/// log N against log t (algebraic) and against t (exponential), compared by
/// rms residual.
struct DecayFit {
  int n_particles = 0;
  double t_min = 0.0, t_max = 0.0;
  double algebraic_exponent = 0.0;
  double algebraic_rms = 0.0;
  double exponential_rate = 0.0;
  double exponential_rms = 0.0;
  bool algebraic_wins = false;
};

namespace detail {

struct LineFit {
  double slope = 0.0;
  double rms = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace detail

/// Fits both decay models on the validity window 10 <= t S N^{2 alpha},
/// t S <= ts_cap. Small N (empty window) falls back to t S in [1, 5], where
/// the few discrete rates are fully developed.
inline DecayFit fit_decay_regime(const AsymptoticSpec& spec,
                                 const std::vector<double>& energies,
                                 int n_points = 25, double gate = 10.0,
                                 double ts_cap = 0.5) {
  spec.validate();
  const double s = spec.S();
  double lo = gate / (s * std::pow(spec.n_particles, 2.0 * spec.alpha));
  double hi = ts_cap / s;
  if (lo >= hi) {
    lo = 1.0 / s;
    hi = 5.0 / s;
  }
  std::vector<double> log_t, log_n, t_lin;
  for (int i = 0; i < n_points; ++i) {
    const double t =
        lo * std::pow(hi / lo, static_cast<double>(i) / (n_points - 1));
    const double value = largen_exact(spec, energies, t);
    if (value < 1e-14) continue;
    log_t.push_back(std::log(t));
    t_lin.push_back(t);
    log_n.push_back(std::log(value));
  }
  DecayFit fit;
  fit.n_particles = spec.n_particles;
  fit.t_min = lo;
  fit.t_max = hi;
  if (log_t.size() < 3) return fit;
  const auto algebraic = detail::fit_line(log_t, log_n);
  const auto exponential = detail::fit_line(t_lin, log_n);
  fit.algebraic_exponent = algebraic.slope;
  fit.algebraic_rms = algebraic.rms;
  fit.exponential_rate = exponential.slope;
  fit.exponential_rms = exponential.rms;
  fit.algebraic_wins = algebraic.rms < exponential.rms;
  return fit;
}

inline std::vector<DecayFit> decay_regime_scan(
    const std::vector<AsymptoticSpec>& family,
    const std::vector<double>& energies, int n_points = 25, double gate = 10.0,
    double ts_cap = 0.5) {
  std::vector<DecayFit> fits;
  fits.reserve(family.size());
  for (const auto& spec : family)
    fits.push_back(fit_decay_regime(spec, energies, n_points, gate, ts_cap));
  return fits;
}

/// Negativity along a trajectory; also the probe for dynamics that can
/// superimpose blocks (where zeros may occur at isolated times).
inline std::vector<double> negativity_trajectory(
    const Liouvillian& liouvillian, const NumberMixture& rho0,
    const Bipartition& bip, const std::vector<double>& times,
    NegativityMethod method = NegativityMethod::kFormula) {
  const Propagator propagator(liouvillian);
  std::vector<double> values;
  values.reserve(times.size());
  for (double t : times)
    values.push_back(negativity_mixture(propagator.evolve(rho0, t), bip, method));
  return values;
}

}  // namespace entdyn

#endif  // ENTDYN_ANALYSIS_HPP
