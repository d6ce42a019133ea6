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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entdyn/lindblad.hpp"
#include "entdyn/negativity.hpp"
#include "support.hpp"

using namespace entdyn;

namespace {

OperatorSpec loss_a1a3() {
  OperatorSpec op;
  op.terms.push_back(
      {Complex(1, 0), {{1, Ladder::kAnnihilate}, {3, Ladder::kAnnihilate}}});
  return op;
}

/// Largest sector-weighted element difference between two mixtures.
double mixture_distance(const NumberMixture& a, const NumberMixture& b) {
  double dist = 0.0;
  for (int n = 0; n <= std::max(a.max_particles(), b.max_particles()); ++n) {
    const auto* ca = a.component(n);
    const auto* cb = b.component(n);
    if (!ca && !cb) continue;
    if (!ca || !cb) {
      const auto& present = ca ? *ca : *cb;
      dist = std::max(
          dist, present.weight *
                    present.state.matrix().cwiseAbs().maxCoeff());
      continue;
    }
    dist = std::max(dist, (ca->weight * ca->state.matrix() -
                           cb->weight * cb->state.matrix())
                              .cwiseAbs()
                              .maxCoeff());
  }
  return dist;
}

}  // namespace

TEST_CASE("empty generator gives the zero superoperator") {
  const Liouvillian l = build_liouvillian(LindbladGenerator{}, 2, 2);
  CHECK(l.matrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dephasing coherence derivative matches the decoherence rate") {
  // d/dt rho_{k,kbar} = (-i sum eps_j (k_j - kbar_j)
  //                      - 1/2 sum lambda_j (k_j - kbar_j)^2) rho_{k,kbar}
  const std::vector<double> eps{0.3, 1.1};
  const std::vector<double> lambda{0.4, 0.9};
  const LindbladGenerator gen = LindbladGenerator::dephasing(
      lambda, OperatorSpec::diagonal_hamiltonian(eps));
  const Liouvillian l = build_sector_liouvillian(gen, 2, 2);
  const FockBasis basis(2, 2);
  // Coherence |2,0><0,2|.
  MatrixXcd rho = MatrixXcd::Zero(3, 3);
  FockState up(2), down(2);
  up << 2, 0;
  down << 0, 2;
  rho(basis.rank(up), basis.rank(down)) = 1.0;
  VectorXcd v = VectorXcd::Zero(l.total_dim());
  Eigen::Map<MatrixXcd>(v.data(), 3, 3) = rho;
  const VectorXcd dv = l.matrix() * v;
  const MatrixXcd drho = Eigen::Map<const MatrixXcd>(dv.data(), 3, 3);
  const Complex expected =
      Complex(0, -1) * (eps[0] * 2.0 + eps[1] * (-2.0)) -
      0.5 * (lambda[0] * 4.0 + lambda[1] * 4.0);
  CHECK(std::abs(drho(basis.rank(up), basis.rank(down)) - expected) < 1e-12);
}

TEST_CASE("loss generator derivative matches the analytic example at t = 0") {
  const double p = 0.7, lambda0 = 0.5;
  const std::array<double, 4> eps{0.2, 0.7, 1.3, 0.4};
  LindbladGenerator gen;
  gen.hamiltonian =
      OperatorSpec::diagonal_hamiltonian({eps[0], eps[1], eps[2], eps[3]});
  gen.jumps.push_back({lambda0, loss_a1a3()});
  const Liouvillian l = build_liouvillian(gen, 2, 4);
  const VectorXcd v =
      l.to_vector(NumberMixture::pure_sector(example_state(p)));
  const VectorXcd dv = l.matrix() * v;

  // Analytic derivative of the evolved state at t = 0.
  const FockBasis basis(2, 4);
  auto fock = [&](int a, int b, int c, int d) {
    FockState occ(4);
    occ << a, b, c, d;
    return basis.rank(occ);
  };
  VectorXcd psi1 = VectorXcd::Zero(basis.dim());
  psi1(fock(0, 1, 0, 1)) = 1.0 / std::sqrt(2.0);
  psi1(fock(1, 0, 1, 0)) = 1.0 / std::sqrt(2.0);
  VectorXcd dpsi1 = VectorXcd::Zero(basis.dim());
  dpsi1(fock(0, 1, 0, 1)) = Complex(0, -(eps[1] + eps[3])) / std::sqrt(2.0);
  dpsi1(fock(1, 0, 1, 0)) =
      Complex(-lambda0 / 2.0, -(eps[0] + eps[2])) / std::sqrt(2.0);
  const MatrixXcd dsector2 =
      p * (dpsi1 * psi1.adjoint() + psi1 * dpsi1.adjoint());

  const auto idx2 = *l.sector_index(2);
  const MatrixXcd numeric2 = Eigen::Map<const MatrixXcd>(
      dv.data() + l.sector_offset(idx2), basis.dim(), basis.dim());
  CHECK((numeric2 - dsector2).cwiseAbs().maxCoeff() < 1e-12);

  const auto idx0 = *l.sector_index(0);
  CHECK(std::abs(dv(l.sector_offset(idx0)) - Complex(p * lambda0 / 2.0, 0)) <
        1e-12);
}

TEST_CASE("evolve_exact at t = 0 is the identity") {
  const LindbladGenerator gen = LindbladGenerator::dephasing(
      {0.3, 0.3, 0.3, 0.3}, OperatorSpec::diagonal_hamiltonian({1, 2, 3, 4}));
  const Liouvillian l = build_liouvillian(gen, 2, 4);
  const NumberMixture rho0 = NumberMixture::pure_sector(example_state(0.8));
  const NumberMixture evolved = evolve_exact(l, rho0, 0.0);
  CHECK(mixture_distance(evolved, rho0) < 1e-12);
}

TEST_CASE("evolve_exact reproduces the dephasing closed form to 1e-9") {
  const double p = 0.8, t = 1.0;
  const std::array<double, 4> lambda{0.3, 0.3, 0.3, 0.3};
  const std::array<double, 4> eps{0.2, 0.9, 1.7, 0.4};
  const LindbladGenerator gen = LindbladGenerator::dephasing(
      {lambda[0], lambda[1], lambda[2], lambda[3]},
      OperatorSpec::diagonal_hamiltonian({eps[0], eps[1], eps[2], eps[3]}));
  const Liouvillian l = build_sector_liouvillian(gen, 2, 4);
  EvolveDiagnostics diag;
  const NumberMixture evolved =
      evolve_exact(l, NumberMixture::pure_sector(example_state(p)), t, &diag);
  const auto expected = analytic_dephasing_example(p, lambda, eps, t);
  REQUIRE(evolved.components().size() == 1);
  CHECK((evolved.components().front().state.matrix() - expected.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-9);
  CHECK(diag.characteristic_time > 0.0);
}

TEST_CASE("evolve_exact reproduces the loss closed form to 1e-9") {
  const double p = 0.7, lambda0 = 0.5, t = 2.0;
  const std::array<double, 4> eps{0.2, 0.7, 1.3, 0.4};
  LindbladGenerator gen;
  gen.hamiltonian =
      OperatorSpec::diagonal_hamiltonian({eps[0], eps[1], eps[2], eps[3]});
  gen.jumps.push_back({lambda0, loss_a1a3()});
  const Liouvillian l = build_liouvillian(gen, 2, 4);
  const NumberMixture evolved =
      evolve_exact(l, NumberMixture::pure_sector(example_state(p)), t);
  const NumberMixture expected = analytic_loss_example(p, lambda0, eps, t);
  CHECK(mixture_distance(evolved, expected) < 1e-9);
  // Vacuum weight p/2 (1 - e^{-t lambda0}).
  const auto* vac = evolved.component(0);
  REQUIRE(vac != nullptr);
  CHECK(vac->weight ==
        doctest::Approx(0.5 * p * (1.0 - std::exp(-t * lambda0)))
            .epsilon(1e-9));
}

TEST_CASE("closed forms at t = 0 reduce to the initial state") {
  const auto loss0 = analytic_loss_example(0.6, 0.5, {1, 2, 3, 4}, 0.0);
  CHECK(mixture_distance(loss0,
                         NumberMixture::pure_sector(example_state(0.6))) <
        1e-12);
  const auto* vac = loss0.component(0);
  REQUIRE(vac != nullptr);
  CHECK(vac->weight == 0.0);

  const auto deph0 =
      analytic_dephasing_example(0.6, {1, 1, 1, 1}, {1, 2, 3, 4}, 0.0);
  CHECK((deph0.matrix() - example_state(0.6).matrix()).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("equal energies leave only damping in the dephasing closed form") {
  const auto with_phase =
      analytic_dephasing_example(0.8, {0.2, 0.3, 0.1, 0.4}, {1, 1, 1, 1}, 1.5);
  const auto no_phase =
      analytic_dephasing_example(0.8, {0.2, 0.3, 0.1, 0.4}, {0, 0, 0, 0}, 1.5);
  CHECK((with_phase.matrix() - no_phase.matrix()).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("RK4 matches the exact propagator and converges at fourth order") {
  const double p = 0.8, t = 1.0;
  const LindbladGenerator gen = LindbladGenerator::dephasing(
      {0.3, 0.3, 0.3, 0.3},
      OperatorSpec::diagonal_hamiltonian({0.2, 0.9, 1.7, 0.4}));
  const Liouvillian l = build_sector_liouvillian(gen, 2, 4);
  const NumberMixture rho0 = NumberMixture::pure_sector(example_state(p));
  const NumberMixture exact = evolve_exact(l, rho0, t);

  CHECK(mixture_distance(evolve_rk4(l, rho0, 0.0), rho0) == 0.0);

  const double err_coarse =
      mixture_distance(evolve_rk4(l, rho0, t, t / 50), exact);
  const double err_fine =
      mixture_distance(evolve_rk4(l, rho0, t, t / 100), exact);
  CHECK(err_fine < 1e-6);
  const double ratio = err_coarse / err_fine;
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("RK4 with the default step reproduces the loss closed form to 1e-6") {
  const double p = 0.7, lambda0 = 0.5, t = 2.0;
  const std::array<double, 4> eps{0.2, 0.7, 1.3, 0.4};
  LindbladGenerator gen;
  gen.hamiltonian =
      OperatorSpec::diagonal_hamiltonian({eps[0], eps[1], eps[2], eps[3]});
  gen.jumps.push_back({lambda0, loss_a1a3()});
  const Liouvillian l = build_liouvillian(gen, 2, 4);
  const NumberMixture rk4 = evolve_rk4(
      l, NumberMixture::pure_sector(example_state(p)), t, 0.002);
  CHECK(mixture_distance(rk4, analytic_loss_example(p, lambda0, eps, t)) <
        1e-6);
}

TEST_CASE("Trotter is exact for commuting factors and O(1/n) otherwise") {
  const NumberMixture rho0 = NumberMixture::pure_sector(example_state(0.8));

  SUBCASE("commuting split: diagonal H and dephasing") {
    const LindbladGenerator ham{
        OperatorSpec::diagonal_hamiltonian({0.2, 0.9, 1.7, 0.4}), {}};
    const LindbladGenerator deph =
        LindbladGenerator::dephasing({0.3, 0.2, 0.5, 0.1});
    const Liouvillian l_a = build_sector_liouvillian(ham, 2, 4);
    const Liouvillian l_b = build_sector_liouvillian(deph, 2, 4);
    LindbladGenerator both = deph;
    both.hamiltonian = ham.hamiltonian;
    const Liouvillian l_full = build_sector_liouvillian(both, 2, 4);
    const NumberMixture exact = evolve_exact(l_full, rho0, 1.3);
    for (int n : {1, 3}) {
      CHECK(mixture_distance(evolve_trotter(l_a, l_b, rho0, 1.3, n), exact) <
            1e-11);
    }
  }

  SUBCASE("hopping + dephasing: error proportional to 1/n") {
    const LindbladGenerator ham{
        OperatorSpec::hopping_hamiltonian({0.7, 0.4, 0.6}), {}};
    const LindbladGenerator deph =
        LindbladGenerator::dephasing({0.3, 0.2, 0.5, 0.1});
    const Liouvillian l_a = build_sector_liouvillian(ham, 2, 4);
    const Liouvillian l_b = build_sector_liouvillian(deph, 2, 4);
    LindbladGenerator both = deph;
    both.hamiltonian = ham.hamiltonian;
    const Liouvillian l_full = build_sector_liouvillian(both, 2, 4);
    const double t = 1.0;
    const NumberMixture exact = evolve_exact(l_full, rho0, t);
    std::vector<double> log_n, log_err;
    for (int n = 4; n <= 64; n *= 2) {
      const double err =
          mixture_distance(evolve_trotter(l_a, l_b, rho0, t, n), exact);
      log_n.push_back(std::log(n));
      log_err.push_back(std::log(err));
    }
    // Least-squares slope of log(err) vs log(n).
    const auto size = static_cast<double>(log_n.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
      sx += log_n[i];
      sy += log_err[i];
      sxx += log_n[i] * log_n[i];
      sxy += log_n[i] * log_err[i];
    }
    const double slope = (size * sxy - sx * sy) / (size * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.1));
  }

  SUBCASE("n = 1 equals the sequential application of the flows") {
    const LindbladGenerator ham{
        OperatorSpec::hopping_hamiltonian({0.7, 0.4, 0.6}), {}};
    const LindbladGenerator deph =
        LindbladGenerator::dephasing({0.3, 0.2, 0.5, 0.1});
    const Liouvillian l_a = build_sector_liouvillian(ham, 2, 4);
    const Liouvillian l_b = build_sector_liouvillian(deph, 2, 4);
    const double t = 0.9;
    const NumberMixture sequential =
        evolve_exact(l_a, evolve_exact(l_b, rho0, t), t);
    CHECK(mixture_distance(evolve_trotter(l_a, l_b, rho0, t, 1), sequential) <
          1e-11);
  }
}

TEST_CASE("semigroup property of the exact propagator") {
  LindbladGenerator gen = LindbladGenerator::dephasing(
      {0.3, 0.2, 0.5, 0.1}, OperatorSpec::hopping_hamiltonian({0.7, 0.4, 0.6}));
  gen.jumps.push_back({0.25, loss_a1a3()});
  const Liouvillian l = build_liouvillian(gen, 2, 4);
  const NumberMixture rho0 = NumberMixture::pure_sector(example_state(0.9));
  const double s = 0.7, t = 1.1;
  const NumberMixture direct = evolve_exact(l, rho0, s + t);
  const NumberMixture stepped = evolve_exact(l, evolve_exact(l, rho0, s), t);
  CHECK(mixture_distance(direct, stepped) < 1e-9);
}

TEST_CASE("trace and Hermiticity are preserved along trajectories") {
  std::mt19937_64 rng(31);
  LindbladGenerator gen = LindbladGenerator::dephasing(
      {0.3, 0.2, 0.5, 0.1}, OperatorSpec::hopping_hamiltonian({0.7, 0.4, 0.6}));
  gen.jumps.push_back({0.25, loss_a1a3()});
  const Liouvillian l = build_liouvillian(gen, 2, 4);
  const Propagator prop(l);
  for (int rep = 0; rep < 5; ++rep) {
    const NumberMixture rho0 =
        NumberMixture::pure_sector(testing::random_state(2, 4, rng));
    for (double t : {0.3, 1.0, 4.0}) {
      const NumberMixture rho_t = prop.evolve(rho0, t);
      double total = 0.0;
      for (const auto& c : rho_t.components()) {
        total += c.weight;
        CHECK(hermiticity_defect(c.state.matrix()) < 1e-10);
        CHECK(min_eigenvalue(c.state.matrix()) > -1e-10);
      }
      CHECK(std::abs(total - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("stationary state of full loss is the vacuum, kernel 1-dim") {
  for (int n_max : {2, 3}) {
    const LindbladGenerator gen =
        LindbladGenerator::loss({0.4, 0.7, 0.3, 0.5});
    const Liouvillian l = build_liouvillian(gen, n_max, 4);
    const StationarySpace space = stationary_states(l);
    CHECK(space.dimension == 1);
    REQUIRE(space.states.size() == 1);
    const auto& state = space.states.front();
    REQUIRE(state.components().size() == 1);
    CHECK(state.components().front().state.particles() == 0);
    CHECK(state.components().front().weight == doctest::Approx(1.0));
  }
}

TEST_CASE("dephasing with hopping has the normalized identity as fixed point") {
  const LindbladGenerator gen = LindbladGenerator::dephasing(
      {0.3, 0.2, 0.5, 0.1}, OperatorSpec::hopping_hamiltonian({0.7, 0.4, 0.6}));
  const Liouvillian l = build_sector_liouvillian(gen, 2, 4);
  const StationarySpace space = stationary_states(l);
  CHECK(space.dimension == 1);
  REQUIRE(space.states.size() == 1);
  const auto& rho = space.states.front().components().front().state;
  const auto dim = rho.dim();
  CHECK((rho.matrix() -
         MatrixXcd::Identity(dim, dim) / static_cast<double>(dim))
            .cwiseAbs()
            .maxCoeff() < 1e-8);
  // A stationary state is a fixed point of the flow at any t.
  const NumberMixture fixed =
      evolve_exact(l, space.states.front(), 3.7);
  CHECK((fixed.components().front().state.matrix() - rho.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-9);
}

TEST_CASE("dephasing with diagonal H leaves every Fock projector stationary") {
  const LindbladGenerator gen = LindbladGenerator::dephasing(
      {0.3, 0.2, 0.5}, OperatorSpec::diagonal_hamiltonian({1.0, 2.0, 3.0}));
  const Liouvillian l = build_sector_liouvillian(gen, 2, 3);
  const StationarySpace space = stationary_states(l);
  const auto dim = static_cast<int>(sector_dimension(2, 3));
  CHECK(space.dimension == dim);
}

TEST_CASE("number-conserving flows never mix blocks") {
  std::mt19937_64 rng(37);
  const Bipartition bip(2, 4);
  // Dephasing plus intra-side hopping only: modes (1,2) and (3,4) never talk.
  OperatorSpec h;
  h.terms.push_back(
      {Complex(-0.8, 0), {{1, Ladder::kCreate}, {2, Ladder::kAnnihilate}}});
  h.terms.push_back(
      {Complex(-0.8, 0), {{2, Ladder::kCreate}, {1, Ladder::kAnnihilate}}});
  h.terms.push_back(
      {Complex(-0.5, 0), {{3, Ladder::kCreate}, {4, Ladder::kAnnihilate}}});
  h.terms.push_back(
      {Complex(-0.5, 0), {{4, Ladder::kCreate}, {3, Ladder::kAnnihilate}}});
  const LindbladGenerator gen =
      LindbladGenerator::dephasing({0.3, 0.2, 0.5, 0.1}, h);
  const Liouvillian l = build_sector_liouvillian(gen, 2, 4);
  const Propagator prop(l);
  const auto rho0 = example_state(0.8);  // block-diagonal
  REQUIRE(is_block_diagonal(rho0, bip, 1e-12));
  for (double t : {0.5, 2.0, 7.0}) {
    const auto rho_t =
        prop.evolve(NumberMixture::pure_sector(rho0), t);
    CHECK(is_block_diagonal(rho_t.components().front().state, bip, 1e-11));
  }
}

TEST_CASE("rejected generators") {
  // Gain jumps are outside the represented dynamics.
  LindbladGenerator gain;
  gain.jumps.push_back({0.5, OperatorSpec::creation(1)});
  CHECK_THROWS_AS(build_liouvillian(gain, 2, 2), InvalidState);

  // Losses cannot act on a sector-restricted domain.
  const LindbladGenerator loss = LindbladGenerator::loss({0.5, 0.5});
  CHECK_THROWS_AS(build_sector_liouvillian(loss, 2, 2), InvalidState);

  // Non-Hermitian Hamiltonian.
  LindbladGenerator bad;
  bad.hamiltonian.terms.push_back(
      {Complex(0.3, 0), {{1, Ladder::kCreate}, {2, Ladder::kAnnihilate}}});
  CHECK_THROWS_AS(build_liouvillian(bad, 2, 2), InvalidState);

  // Mixed particle change within one jump operator.
  LindbladGenerator mixed;
  OperatorSpec bad_op;
  bad_op.terms.push_back({Complex(1, 0), {{1, Ladder::kAnnihilate}}});
  bad_op.terms.push_back(
      {Complex(1, 0), {{1, Ladder::kCreate}, {1, Ladder::kAnnihilate}}});
  mixed.jumps.push_back({0.5, bad_op});
  CHECK_THROWS_AS(build_liouvillian(mixed, 2, 2), MixedParticleChange);
}
