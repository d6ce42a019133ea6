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

#include "entdyn/analysis.hpp"
#include "support.hpp"

using namespace entdyn;

namespace {

OperatorSpec loss_a1a3() {
  OperatorSpec op;
  op.terms.push_back(
      {Complex(1, 0), {{1, Ladder::kAnnihilate}, {3, Ladder::kAnnihilate}}});
  return op;
}

std::vector<double> linear_times(double t_max, int points) {
  std::vector<double> times(points);
  for (int i = 0; i < points; ++i) times[i] = t_max * i / (points - 1);
  return times;
}

SectorDensityMatrix nonblock_state() {
  // (|1,0,1,0> + |1,1,0,0>)/sqrt(2): superposes k = 1 and k = 2, and the
  // first component actually feels the a_1 a_3 loss.
  const FockBasis basis(2, 4);
  FockState u(4), v(4);
  u << 1, 0, 1, 0;
  v << 1, 1, 0, 0;
  VectorXcd psi = VectorXcd::Zero(basis.dim());
  psi(basis.rank(u)) = 1.0 / std::sqrt(2.0);
  psi(basis.rank(v)) = 1.0 / std::sqrt(2.0);
  return SectorDensityMatrix::pure(2, 4, psi);
}

}  // namespace

TEST_CASE("loss bound: eta is the top eigenvalue of lambda a†a a†a") {
  LindbladGenerator gen;
  gen.hamiltonian = OperatorSpec::diagonal_hamiltonian({0.2, 0.7, 1.3, 0.4});
  gen.jumps.push_back({0.5, loss_a1a3()});
  const auto trace = check_loss_bound(gen, nonblock_state(), Bipartition(2, 4),
                                      linear_times(10.0, 9));
  CHECK(trace.rate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(trace.holds(1e-9));
  CHECK(trace.lhs.front() > 0.1);
}

TEST_CASE("loss bound with no noise is an equality") {
  LindbladGenerator gen;
  gen.hamiltonian = OperatorSpec::diagonal_hamiltonian({0.2, 0.7, 1.3, 0.4});
  gen.jumps.push_back({0.0, loss_a1a3()});
  const auto trace = check_loss_bound(gen, nonblock_state(), Bipartition(2, 4),
                                      linear_times(5.0, 5));
  CHECK(trace.rate == 0.0);
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    CHECK(trace.lhs[i] == doctest::Approx(trace.rhs[i]).epsilon(1e-9));
}

TEST_CASE("loss bound rejects jumps that straddle without factorizing") {
  LindbladGenerator gen;
  OperatorSpec straddle =
      OperatorSpec::annihilation(1) + OperatorSpec::annihilation(3);
  gen.jumps.push_back({0.5, straddle});
  CHECK_THROWS_AS(check_loss_bound(gen, nonblock_state(), Bipartition(2, 4),
                                   linear_times(1.0, 2)),
                  PreconditionViolated);
}

TEST_CASE("loss bound holds on random states") {
  std::mt19937_64 rng(41);
  LindbladGenerator gen;
  gen.hamiltonian = OperatorSpec::diagonal_hamiltonian({0.2, 0.7, 1.3, 0.4});
  gen.jumps.push_back({0.5, loss_a1a3()});
  for (int rep = 0; rep < 5; ++rep) {
    const auto rho0 = testing::random_state(2, 4, rng);
    const auto trace = check_loss_bound(gen, rho0, Bipartition(2, 4),
                                        linear_times(10.0, 6));
    CHECK(trace.holds(1e-9));
  }
}

TEST_CASE("dephasing bound on the hopping example and random states") {
  std::mt19937_64 rng(43);
  const LindbladGenerator gen = LindbladGenerator::dephasing(
      {0.1, 0.2, 0.3, 0.4}, OperatorSpec::hopping_hamiltonian({0.6, 0.4, 0.5}));
  const double n = 2.0, lambda_sum = 1.0;
  SUBCASE("named example over t in [0, 20]") {
    const auto trace = check_dephasing_bound(
        gen, example_state(0.9), Bipartition(2, 4), linear_times(20.0, 11));
    CHECK(trace.rate == doctest::Approx(0.5 * n * n * lambda_sum));
    CHECK(trace.holds(1e-9));
  }
  SUBCASE("zero rates give an equality") {
    const LindbladGenerator unitary = LindbladGenerator::dephasing(
        {0, 0, 0, 0}, OperatorSpec::hopping_hamiltonian({0.6, 0.4, 0.5}));
    const auto trace = check_dephasing_bound(
        unitary, example_state(0.9), Bipartition(2, 4), linear_times(5.0, 5));
    for (std::size_t i = 0; i < trace.times.size(); ++i)
      CHECK(trace.lhs[i] == doctest::Approx(trace.rhs[i]).epsilon(1e-9));
  }
  SUBCASE("random states") {
    for (int rep = 0; rep < 5; ++rep) {
      const auto rho0 = testing::random_state(2, 4, rng);
      const auto trace = check_dephasing_bound(gen, rho0, Bipartition(2, 4),
                                               linear_times(20.0, 6));
      CHECK(trace.holds(1e-9));
    }
  }
  SUBCASE("strictly above the bound for diagonal H at t > 0") {
    const LindbladGenerator diag = LindbladGenerator::dephasing(
        {0.1, 0.2, 0.3, 0.4},
        OperatorSpec::diagonal_hamiltonian({0.2, 0.7, 1.3, 0.4}));
    const auto trace = check_dephasing_bound(
        diag, example_state(0.9), Bipartition(2, 4), {0.5, 1.0, 1.5});
    for (std::size_t i = 0; i < trace.times.size(); ++i)
      CHECK(trace.lhs[i] > trace.rhs[i] + 1e-4);
  }
  SUBCASE("non-number jumps are rejected") {
    LindbladGenerator bad;
    bad.jumps.push_back({0.5, OperatorSpec::annihilation(1)});
    CHECK_THROWS_AS(check_dephasing_bound(bad, example_state(0.9),
                                          Bipartition(2, 4), {0.0, 1.0}),
                    PreconditionViolated);
  }
}

TEST_CASE("decoherence equality for diagonal H, violated by hopping") {
  std::mt19937_64 rng(47);
  SUBCASE("t = 0 gives zero deviation") {
    const LindbladGenerator gen = LindbladGenerator::dephasing({0.4, 0.7});
    CHECK(check_decoherence_equality(gen, testing::random_state(2, 2, rng),
                                     0.0) < 1e-14);
  }
  SUBCASE("known coherence decay e^{-4t} for lambda = (1,1) on |2,0><0,2|") {
    const LindbladGenerator gen = LindbladGenerator::dephasing({1.0, 1.0});
    const FockBasis basis(2, 2);
    FockState up(2), dn(2);
    up << 2, 0;
    dn << 0, 2;
    MatrixXcd m = MatrixXcd::Zero(3, 3);
    m(basis.rank(up), basis.rank(up)) = 0.5;
    m(basis.rank(dn), basis.rank(dn)) = 0.5;
    m(basis.rank(up), basis.rank(dn)) = 0.5;
    m(basis.rank(dn), basis.rank(up)) = 0.5;
    const SectorDensityMatrix rho(2, 2, m);
    CHECK(check_decoherence_equality(gen, rho, 0.8) < 1e-10);
    const Liouvillian l =
        build_sector_liouvillian(gen, 2, 2);
    const auto rho_t =
        evolve_exact(l, NumberMixture::pure_sector(rho), 0.8);
    const double coherence = std::abs(
        rho_t.components().front().state.matrix()(basis.rank(up),
                                                   basis.rank(dn)));
    CHECK(coherence == doctest::Approx(0.5 * std::exp(-4.0 * 0.8)));
  }
  SUBCASE("diagonal entries never move") {
    const LindbladGenerator gen = LindbladGenerator::dephasing(
        {0.3, 0.8}, OperatorSpec::diagonal_hamiltonian({1.0, 0.2}));
    const auto rho0 = testing::random_state(2, 2, rng);
    const Liouvillian l = build_sector_liouvillian(gen, 2, 2);
    const auto rho_t = evolve_exact(l, NumberMixture::pure_sector(rho0), 2.5);
    const auto& m = rho_t.components().front().state.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      CHECK(std::abs(m(i, i) - rho0.matrix()(i, i)) < 1e-10);
  }
  SUBCASE("random states, diagonal H: deviation below 1e-9") {
    const LindbladGenerator gen = LindbladGenerator::dephasing(
        {0.3, 0.8, 0.2}, OperatorSpec::diagonal_hamiltonian({1.0, 0.2, 0.5}));
    for (int rep = 0; rep < 10; ++rep)
      CHECK(check_decoherence_equality(gen, testing::random_state(2, 3, rng),
                                       1.7) < 1e-9);
  }
  SUBCASE("hopping breaks the equality visibly") {
    const LindbladGenerator gen = LindbladGenerator::dephasing(
        {0.3, 0.8, 0.2}, OperatorSpec::hopping_hamiltonian({0.7, 0.5}));
    double max_dev = 0.0;
    for (int rep = 0; rep < 5; ++rep)
      max_dev = std::max(
          max_dev, check_decoherence_equality(
                       gen, testing::random_state(2, 3, rng), 1.7));
    CHECK(max_dev > 1e-3);
  }
}

TEST_CASE("threshold times") {
  CHECK(!threshold_time(ExampleKind::kLoss, 0.5, {0.5}).has_value());
  CHECK(!threshold_time(ExampleKind::kDephasing, 0.3, {1, 1, 1, 1}).has_value());
  CHECK_THROWS_AS(threshold_time(ExampleKind::kLoss, 1.2, {0.5}),
                  InvalidProbability);

  const auto loss = threshold_time(ExampleKind::kLoss, 0.7, {0.5});
  REQUIRE(loss.has_value());
  CHECK(*loss == doctest::Approx(4.0 * std::log(7.0 / 3.0)).epsilon(1e-12));
  CHECK(*loss == doctest::Approx(3.3890).epsilon(1e-4));

  const auto deph =
      threshold_time(ExampleKind::kDephasing, 0.8, {0.3, 0.3, 0.3, 0.3});
  REQUIRE(deph.has_value());
  CHECK(*deph == doctest::Approx(2.0 * std::log(4.0) / 1.2).epsilon(1e-12));
  CHECK(*deph == doctest::Approx(2.3105).epsilon(1e-4));
}

TEST_CASE("threshold cross-validation against the oracle negativity") {
  for (double p : {0.6, 0.8, 0.95}) {
    const auto loss = validate_threshold(ExampleKind::kLoss, p, {0.5});
    CHECK(loss.consistent);
    CHECK(loss.negativity_before > 1e-6);
    CHECK(loss.negativity_after < 1e-10);
    const auto deph =
        validate_threshold(ExampleKind::kDephasing, p, {0.4, 0.2, 0.3, 0.3});
    CHECK(deph.consistent);
  }
}

TEST_CASE("largen_exact basics") {
  SUBCASE("t = 0, flat, N = 1 is the Bell-like 1/2") {
    const auto spec = AsymptoticSpec::flat_two_mode(1, 0.5, 0.5);
    CHECK(largen_exact(spec, {0.0, 0.0}, 0.0) == doctest::Approx(0.5));
  }
  SUBCASE("long times leave only the diagonal") {
    const auto spec = AsymptoticSpec::flat_two_mode(6, 0.5, 0.5);
    CHECK(largen_exact(spec, {0.0, 0.0}, 500.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("phases do not change the negativity") {
    const auto spec = AsymptoticSpec::flat_two_mode(5, 0.4, 0.6);
    const double base = largen_exact(spec, {0.0, 0.0}, 0.3);
    CHECK(largen_exact(spec, {2.2, -0.7}, 0.3) == doctest::Approx(base));
  }
}

TEST_CASE("largen_exact agrees with the full dynamics path for small N") {
  // The two-mode class is every two-mode state; evolve the flat state with
  // the Liouvillian and compare negativities.
  for (int n : {2, 4}) {
    const double l1 = 0.3, l2 = 0.7, e1 = 0.4, e2 = 1.1;
    const auto rho0 = flat_two_mode_state(n);
    const LindbladGenerator gen = LindbladGenerator::dephasing(
        {l1, l2}, OperatorSpec::diagonal_hamiltonian({e1, e2}));
    const Liouvillian l = build_sector_liouvillian(gen, n, 2);
    AsymptoticSpec spec = AsymptoticSpec::flat_two_mode(n, l1, l2);
    for (double t : {0.0, 0.2, 1.0, 3.0}) {
      const auto rho_t = evolve_exact(l, NumberMixture::pure_sector(rho0), t);
      const double from_dynamics = negativity_formula(
          rho_t.components().front().state, Bipartition(1, 2)).value;
      CHECK(largen_exact(spec, {e1, e2}, t) ==
            doctest::Approx(from_dynamics).epsilon(1e-9));
    }
  }
}

TEST_CASE("largen_asymptotic leading term and flat-table truncation") {
  // alpha = 1: leading order -1/2 + sqrt(pi/2)/sqrt(tS).
  const auto spec = AsymptoticSpec::flat_two_mode(100, 0.5, 0.5);
  const double t = 0.2;  // tS = 0.2
  const auto result = largen_asymptotic(spec, t);
  const double expected = -0.5 + std::sqrt(M_PI / 2.0) / std::sqrt(0.2);
  CHECK(result.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(result.in_validity_window);
  CHECK(result.t_s == doctest::Approx(0.2));
  CHECK(result.t_s_n2a == doctest::Approx(0.2 * 100 * 100));

  const auto outside = largen_asymptotic(spec, 2.0);  // tS = 2 > 1
  CHECK_FALSE(outside.in_validity_window);
}

TEST_CASE("asymptotic matches exact within 5% in the valid window") {
  // Frozen reference: N = 200, lambda = (0.5, 0.5), t = 0.01 -> tSN^2 = 400.
  const auto spec = AsymptoticSpec::flat_two_mode(200, 0.5, 0.5);
  const double exact = largen_exact(spec, {0.0, 0.0}, 0.01);
  CHECK(exact == doctest::Approx(11.53604).epsilon(1e-5));
  const auto asym = largen_asymptotic(spec, 0.01);
  CHECK(asym.in_validity_window);
  CHECK(std::abs(asym.value - exact) / exact < 0.05);
}

TEST_CASE("asymptotic error at fixed tS shrinks as N grows") {
  const double ts = 0.3;
  double previous = 1.0;
  for (int n : {50, 100, 200, 500}) {
    const auto spec = AsymptoticSpec::flat_two_mode(n, 0.5, 0.5);
    const double exact = largen_exact(spec, {0.0, 0.0}, ts);
    const auto asym = largen_asymptotic(spec, ts);
    const double rel = std::abs(asym.value - exact) / exact;
    CHECK(rel < previous);
    previous = rel;
  }
}

TEST_CASE("decay regime scan separates exponential from algebraic") {
  std::vector<AsymptoticSpec> family;
  for (int n : {2, 500})
    family.push_back(AsymptoticSpec::flat_two_mode(n, 0.5, 0.5));
  const auto fits = decay_regime_scan(family, {0.0, 0.0});
  REQUIRE(fits.size() == 2);
  CHECK_FALSE(fits[0].algebraic_wins);  // N = 2: few discrete rates
  CHECK(fits[1].algebraic_wins);        // N = 500: blended rates
  CHECK(fits[1].algebraic_exponent == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("negativity under diagonal-H dephasing is non-increasing") {
  std::mt19937_64 rng(53);
  const LindbladGenerator gen = LindbladGenerator::dephasing(
      {0.3, 0.2, 0.4, 0.1},
      OperatorSpec::diagonal_hamiltonian({0.2, 0.7, 1.3, 0.4}));
  const Liouvillian l = build_sector_liouvillian(gen, 2, 4);
  const auto rho0 = testing::random_state(2, 4, rng);
  const auto values = negativity_trajectory(
      l, NumberMixture::pure_sector(rho0), Bipartition(2, 4),
      linear_times(8.0, 17));
  for (std::size_t i = 1; i < values.size(); ++i)
    CHECK(values[i] <= values[i - 1] + 1e-9);
}

TEST_CASE("block-preserving flows keep non-block-diagonal states entangled") {
  std::mt19937_64 rng(59);
  const Bipartition bip(2, 4);
  // Intra-side hopping: blocks are preserved, nothing tunnels across.
  OperatorSpec h;
  h.terms.push_back(
      {Complex(-0.7, 0), {{1, Ladder::kCreate}, {2, Ladder::kAnnihilate}}});
  h.terms.push_back(
      {Complex(-0.7, 0), {{2, Ladder::kCreate}, {1, Ladder::kAnnihilate}}});
  const std::vector<double> rates{0.12, 0.05, 0.15, 0.08};

  SUBCASE("diagonal H, long window t <= 10/max rate") {
    const LindbladGenerator gen = LindbladGenerator::dephasing(
        rates, OperatorSpec::diagonal_hamiltonian({0.2, 0.7, 1.3, 0.4}));
    const Liouvillian l = build_sector_liouvillian(gen, 2, 4);
    const double t_max = 10.0 / 0.15;
    for (int rep = 0; rep < 4; ++rep) {
      const auto rho0 = testing::random_state(2, 4, rng);
      REQUIRE_FALSE(is_block_diagonal(rho0, bip, 1e-8));
      const auto values =
          negativity_trajectory(l, NumberMixture::pure_sector(rho0), bip,
                                linear_times(t_max, 8));
      for (double v : values) CHECK(v > 1e-12);
    }
  }
  SUBCASE("intra-side hopping, window t <= 10/max rate") {
    const LindbladGenerator gen = LindbladGenerator::dephasing(rates, h);
    const Liouvillian l = build_sector_liouvillian(gen, 2, 4);
    const double t_max = 10.0 / 0.7;
    for (int rep = 0; rep < 4; ++rep) {
      const auto rho0 = testing::random_state(2, 4, rng);
      const auto values =
          negativity_trajectory(l, NumberMixture::pure_sector(rho0), bip,
                                linear_times(t_max, 8));
      for (double v : values) CHECK(v > 1e-12);
    }
  }
}

TEST_CASE("tunneling across the split generates entanglement; local flows do not") {
  std::mt19937_64 rng(61);
  const Bipartition bip(2, 4);

  SUBCASE("hopping across the bipartition entangles within t = 1/tau") {
    const double tau = 0.8;
    OperatorSpec h;
    h.terms.push_back(
        {Complex(-tau, 0), {{2, Ladder::kCreate}, {3, Ladder::kAnnihilate}}});
    h.terms.push_back(
        {Complex(-tau, 0), {{3, Ladder::kCreate}, {2, Ladder::kAnnihilate}}});
    const LindbladGenerator gen =
        LindbladGenerator::dephasing({0.1, 0.1, 0.1, 0.1}, h);
    const Liouvillian l = build_sector_liouvillian(gen, 2, 4);
    for (int rep = 0; rep < 3; ++rep) {
      const auto rho0 = testing::random_separable_pure(2, bip, rng);
      const auto rho_t = evolve_exact(
          l, NumberMixture::pure_sector(rho0), 1.0 / tau);
      CHECK(negativity_mixture(rho_t, bip) > 1e-6);
    }
  }

  SUBCASE("generators with no inter-group terms keep negativity at zero") {
    OperatorSpec h;  // intra-side hopping on both sides
    h.terms.push_back(
        {Complex(-0.7, 0), {{1, Ladder::kCreate}, {2, Ladder::kAnnihilate}}});
    h.terms.push_back(
        {Complex(-0.7, 0), {{2, Ladder::kCreate}, {1, Ladder::kAnnihilate}}});
    h.terms.push_back(
        {Complex(-0.4, 0), {{3, Ladder::kCreate}, {4, Ladder::kAnnihilate}}});
    h.terms.push_back(
        {Complex(-0.4, 0), {{4, Ladder::kCreate}, {3, Ladder::kAnnihilate}}});
    LindbladGenerator gen = LindbladGenerator::dephasing(
        {0.2, 0.1, 0.15, 0.25}, h);
    gen.jumps.push_back({0.3, OperatorSpec::annihilation(1)});  // one-side loss
    const Liouvillian l = build_liouvillian(gen, 2, 4);
    const double t_max = 10.0 / 0.7;
    for (int rep = 0; rep < 3; ++rep) {
      const auto rho0 = testing::random_separable_pure(2, bip, rng);
      for (double t : {0.25 * t_max, t_max}) {
        const auto rho_t =
            evolve_exact(l, NumberMixture::pure_sector(rho0), t);
        CHECK(negativity_mixture(rho_t, bip) <= 1e-12);
      }
    }
  }
}
