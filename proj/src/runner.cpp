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

#include "entdyn/runner.hpp"

#include <json.hpp>

#include <array>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace entdyn {

namespace {

/// Full-rank random state on a sector, used by the verify suites.
SectorDensityMatrix random_state(int n_particles, int n_modes,
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

bool all_number_jumps(const std::vector<JumpOperator>& jumps) {
  if (jumps.empty()) return false;
  for (const auto& j : jumps)
    if (!detail::is_number_operator(j.op)) return false;
  return true;
}

bool all_loss_jumps(const std::vector<JumpOperator>& jumps,
                    const Bipartition& bip) {
  if (jumps.empty()) return false;
  for (const auto& j : jumps) {
    if (j.op.net_particle_change() >= 0) return false;
    if (!detail::is_product_local(j.op, bip)) return false;
  }
  return true;
}

bool is_diagonal_on_sector(const OperatorSpec& h, int n_particles,
                           int n_modes) {
  if (h.empty()) return true;
  const MatrixXcd m = ladder_matrix(h, n_particles, n_modes);
  return (m - MatrixXcd(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <
         1e-12;
}

double loss_bound_rate(const std::vector<JumpOperator>& jumps, int n_particles,
                       int n_modes) {
  const auto dim =
      static_cast<Eigen::Index>(sector_dimension(n_particles, n_modes));
  MatrixXcd k = MatrixXcd::Zero(dim, dim);
  for (const auto& j : jumps) {
    const MatrixXcd a = ladder_matrix(j.op, n_particles, n_modes);
    k += j.rate * a.adjoint() * a;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(k, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double mixture_min_eigenvalue(const NumberMixture& mixture) {
  double min_ev = std::numeric_limits<double>::infinity();
  for (const auto& c : mixture.components())
    min_ev = std::min(min_ev, min_eigenvalue(c.state.matrix()));
  return min_ev;
}

double mixture_trace(const NumberMixture& mixture) {
  double total = 0.0;
  for (const auto& c : mixture.components()) total += c.weight;
  return total;
}

struct CheckReport {
  std::vector<std::array<std::string, 4>> rows;  // name, value, limit, status
  bool all_pass = true;

  void add(const std::string& name, double value, const std::string& limit,
           bool pass) {
    rows.push_back({name, format_number(value), limit,
                    pass ? std::string("pass") : std::string("fail")});
    all_pass = all_pass && pass;
  }
};

OperatorSpec loss_a1a3() {
  OperatorSpec op;
  op.terms.push_back(
      {Complex(1, 0), {{1, Ladder::kAnnihilate}, {3, Ladder::kAnnihilate}}});
  return op;
}

std::vector<double> linear_times(double t_max, int points) {
  std::vector<double> times(points);
  for (int i = 0; i < points; ++i)
    times[i] = t_max * i / std::max(1, points - 1);
  return times;
}

int run_evolve(const ExperimentConfig& config,
               const std::filesystem::path& out_path, std::ostream& log) {
  const Bipartition bip = config.bipartition();
  NumberMixture rho0 = config.initial_state.build(config.n_particles, bip);
  const int n_top = std::max(config.n_particles, rho0.max_particles());
  const LindbladGenerator gen = config.generator();
  const Liouvillian full = build_liouvillian(gen, n_top, config.n_modes);
  const Propagator propagator(full);

  const bool dephasing_bound = all_number_jumps(config.jumps);
  const bool loss_bound = !dephasing_bound && all_loss_jumps(config.jumps, bip);
  const bool with_bound = dephasing_bound || loss_bound;
  double bound_rate = 0.0;
  std::optional<Propagator> ham_propagator;
  if (with_bound) {
    if (dephasing_bound) {
      double lambda_sum = 0.0;
      for (const auto& j : config.jumps) lambda_sum += j.rate;
      bound_rate = 0.5 * static_cast<double>(n_top) * n_top * lambda_sum;
    } else {
      bound_rate = loss_bound_rate(config.jumps, n_top, config.n_modes);
    }
    ham_propagator.emplace(
        build_liouvillian(gen.hamiltonian_only(), n_top, config.n_modes));
  }

  std::vector<CsvColumn> columns{
      {"t", "evolution time, units of inverse rate"},
      {"negativity_formula", "negativity via the block formula"}};
  if (config.oracle_column)
    columns.push_back(
        {"negativity_oracle", "negativity via partial-transpose eigenvalues"});
  columns.push_back({"trace", "total trace of the evolved mixture"});
  columns.push_back(
      {"min_eigenvalue", "smallest eigenvalue over mixture components"});
  if (with_bound)
    columns.push_back({"bound_rhs",
                       "exponentially damped hamiltonian-flow negativity "
                       "(lower bound)"});
  CsvWriter csv(out_path, columns);

  struct Point {
    double t, formula, oracle, trace, min_ev, rhs;
  };
  const std::vector<double> times = config.grid.times();
  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(),
                            static_cast<unsigned>(times.size())));
  std::atomic<std::size_t> cursor{0};
  // Grid points are independent; evaluate them concurrently and gather in
  // grid order.
  std::vector<Point> points(times.size());
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= times.size()) return;
        try {
          const double t = times[i];
          const NumberMixture rho_t = propagator.evolve(rho0, t);
          Point point{};
          point.t = t;
          point.formula = negativity_mixture(rho_t, bip);
          point.oracle = config.oracle_column
                             ? negativity_mixture(rho_t, bip,
                                                  NegativityMethod::kOracle)
                             : 0.0;
          point.trace = mixture_trace(rho_t);
          point.min_ev = mixture_min_eigenvalue(rho_t);
          point.rhs = with_bound
                          ? std::exp(-t * bound_rate) *
                                negativity_mixture(
                                    ham_propagator->evolve(rho0, t), bip)
                          : 0.0;
          points[i] = point;
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);

  bool violated = false;
  for (const auto& point : points) {
    std::vector<std::string> cells{format_number(point.t),
                                   format_number(point.formula)};
    if (config.oracle_column) cells.push_back(format_number(point.oracle));
    cells.push_back(format_number(point.trace));
    cells.push_back(format_number(point.min_ev));
    if (with_bound) {
      cells.push_back(format_number(point.rhs));
      if (point.formula < point.rhs - 1e-9) violated = true;
    }
    csv.write_row(cells);
  }
  csv.finish();
  log << "evolve: " << times.size() << " points -> " << out_path.string()
      << "\n";
  if (violated) {
    log << "evolve: lower bound violated (margin below -1e-9)\n";
    return 2;
  }
  return 0;
}

int run_threshold(const ExperimentConfig& config,
                  const std::filesystem::path& out_path, std::ostream& log) {
  if (!config.threshold)
    throw ConfigInvalid("/threshold", "required for the threshold task");
  const ThresholdSpec& spec = *config.threshold;
  const auto validation = validate_threshold(spec.kind, spec.p, spec.rates);
  double rate = 0.0;
  for (double r : spec.rates) rate += r;
  CsvWriter csv(out_path,
                {{"example", "loss or dephasing"},
                 {"p", "weight of the entangled component"},
                 {"rate", "lambda_0 (loss) or sum of lambdas (dephasing)"},
                 {"t_star", "separability threshold time; empty if never "
                            "entangled"},
                 {"negativity_before", "oracle negativity at 0.9 t*"},
                 {"negativity_after", "oracle negativity at 1.01 t*"},
                 {"consistent", "1 if the numerical crossing matches"}});
  csv.write_row(
      {spec.kind == ExampleKind::kLoss ? "loss" : "dephasing",
       format_number(spec.p), format_number(rate),
       validation.t_star ? format_number(*validation.t_star) : "",
       format_number(validation.negativity_before),
       format_number(validation.negativity_after),
       validation.consistent ? "1" : "0"});
  csv.finish();
  if (validation.t_star)
    log << "threshold: t* = " << format_number(*validation.t_star) << "\n";
  else
    log << "threshold: state is separable for all t (p <= 1/2)\n";
  return validation.consistent ? 0 : 2;
}

int run_large_n(const ExperimentConfig& config,
                const std::filesystem::path& out_path, std::ostream& log) {
  if (!config.large_n)
    throw ConfigInvalid("/large_n", "required for the large-n task");
  const LargeNSpec& spec = *config.large_n;
  CsvWriter curve(out_path,
                  {{"N", "particle number"},
                   {"t", "evolution time"},
                   {"t_s", "t times S = sum of lambda_j c_j"},
                   {"t_s_n2a", "t S N^(2 alpha), validity parameter"},
                   {"negativity_exact", "exact sum over damped coefficients"},
                   {"negativity_asymptotic", "truncated asymptotic series"},
                   {"in_window", "1 inside the validity window"},
                   {"rel_deviation", "|asymptotic - exact| / exact"}});
  std::vector<DecayFit> fits;
  for (int n : spec.n_values) {
    AsymptoticSpec asym = AsymptoticSpec::flat_two_mode(
        n, spec.rates[0], spec.rates[1], spec.n_terms);
    for (double t : config.grid.times()) {
      const double exact = largen_exact(asym, {0.0, 0.0}, t);
      const auto series = largen_asymptotic(asym, t);
      curve.write_row(
          {std::to_string(n), format_number(t), format_number(series.t_s),
           format_number(series.t_s_n2a), format_number(exact),
           format_number(series.value),
           series.in_validity_window ? "1" : "0",
           exact > 1e-14 ? format_number(std::abs(series.value - exact) / exact)
                         : ""});
    }
    fits.push_back(fit_decay_regime(asym, {0.0, 0.0}));
  }
  curve.finish();

  std::filesystem::path fits_path = out_path;
  fits_path.replace_filename(out_path.stem().string() + "_fits" +
                             out_path.extension().string());
  CsvWriter fits_csv(
      fits_path,
      {{"N", "particle number"},
       {"t_min", "fit window start"},
       {"t_max", "fit window end"},
       {"algebraic_exponent", "slope of log negativity vs log t"},
       {"algebraic_rms", "rms residual of the algebraic fit"},
       {"exponential_rate", "slope of log negativity vs t"},
       {"exponential_rms", "rms residual of the exponential fit"},
       {"better_model", "model with the lower rms residual"}});
  for (const auto& fit : fits)
    fits_csv.write_row({std::to_string(fit.n_particles),
                        format_number(fit.t_min), format_number(fit.t_max),
                        format_number(fit.algebraic_exponent),
                        format_number(fit.algebraic_rms),
                        format_number(fit.exponential_rate),
                        format_number(fit.exponential_rms),
                        fit.algebraic_wins ? "algebraic" : "exponential"});
  fits_csv.finish();
  log << "large-n: " << spec.n_values.size() << " particle numbers -> "
      << out_path.string() << ", " << fits_path.string() << "\n";
  return 0;
}

int run_stationary(const ExperimentConfig& config,
                   const std::filesystem::path& out_path, std::ostream& log) {
  const LindbladGenerator gen = config.generator();
  const Liouvillian liouvillian =
      config.has_loss()
          ? build_liouvillian(gen, config.n_particles, config.n_modes)
          : build_sector_liouvillian(gen, config.n_particles, config.n_modes);
  const StationarySpace space = stationary_states(liouvillian);
  CsvWriter csv(out_path,
                {{"state_index", "index of the stationary state"},
                 {"kernel_dimension", "dimension of ker(L)"},
                 {"sector", "particle number of the component"},
                 {"weight", "mixture weight of the component"},
                 {"dist_identity",
                  "trace distance to the normalized identity on the sector"},
                 {"dist_vacuum", "trace distance to the vacuum projector "
                                 "(empty outside sector 0)"}});
  for (std::size_t i = 0; i < space.states.size(); ++i) {
    for (const auto& c : space.states[i].components()) {
      const auto dim = c.state.dim();
      const MatrixXcd identity =
          MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
      csv.write_row(
          {std::to_string(i), std::to_string(space.dimension),
           std::to_string(c.state.particles()), format_number(c.weight),
           format_number(trace_distance(c.state.matrix(), identity)),
           c.state.particles() == 0
               ? format_number(trace_distance(c.state.matrix(),
                                              MatrixXcd::Ones(1, 1)))
               : ""});
    }
  }
  csv.finish();
  log << "stationary: kernel dimension " << space.dimension << ", "
      << space.states.size() << " states -> " << out_path.string() << "\n";
  return 0;
}

void verify_paper_examples(CheckReport& report, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Bipartition bip(2, 4);
  const std::array<double, 4> eps{0.2, 0.7, 1.3, 0.4};

  // Loss example: closed form against the propagator.
  {
    LindbladGenerator gen;
    gen.hamiltonian =
        OperatorSpec::diagonal_hamiltonian({eps[0], eps[1], eps[2], eps[3]});
    gen.jumps.push_back({0.5, loss_a1a3()});
    const Liouvillian l = build_liouvillian(gen, 2, 4);
    const double p = 0.7, t = 2.0;
    const auto numeric =
        evolve_exact(l, NumberMixture::pure_sector(example_state(p)), t);
    const auto analytic = analytic_loss_example(p, 0.5, eps, t);
    double diff = 0.0;
    for (int n : {0, 2}) {
      const auto* a = numeric.component(n);
      const auto* b = analytic.component(n);
      diff = std::max(diff, (a->weight * a->state.matrix() -
                             b->weight * b->state.matrix())
                                .cwiseAbs()
                                .maxCoeff());
    }
    report.add("loss_example_evolution_max_diff", diff, "<= 1e-9",
               diff <= 1e-9);
    const auto trace = check_loss_bound(gen, example_state(0.9), bip,
                                        linear_times(10.0, 6));
    report.add("loss_bound_margin", trace.margin, ">= -1e-9",
               trace.holds(1e-9));
  }

  // Dephasing example: closed form, bound, decoherence equality.
  {
    const std::array<double, 4> lambda{0.3, 0.3, 0.3, 0.3};
    const LindbladGenerator gen = LindbladGenerator::dephasing(
        {lambda[0], lambda[1], lambda[2], lambda[3]},
        OperatorSpec::diagonal_hamiltonian({eps[0], eps[1], eps[2], eps[3]}));
    const Liouvillian l = build_sector_liouvillian(gen, 2, 4);
    const double p = 0.8, t = 1.0;
    const auto numeric =
        evolve_exact(l, NumberMixture::pure_sector(example_state(p)), t);
    const double diff =
        (numeric.components().front().state.matrix() -
         analytic_dephasing_example(p, lambda, eps, t).matrix())
            .cwiseAbs()
            .maxCoeff();
    report.add("dephasing_example_evolution_max_diff", diff, "<= 1e-9",
               diff <= 1e-9);

    const LindbladGenerator hopping = LindbladGenerator::dephasing(
        {0.1, 0.2, 0.3, 0.4},
        OperatorSpec::hopping_hamiltonian({0.6, 0.4, 0.5}));
    const auto trace = check_dephasing_bound(hopping, example_state(0.9), bip,
                                             linear_times(20.0, 6));
    report.add("dephasing_bound_margin", trace.margin, ">= -1e-9",
               trace.holds(1e-9));

    const double dev =
        check_decoherence_equality(gen, random_state(2, 4, rng), 1.5);
    report.add("decoherence_equality_deviation", dev, "<= 1e-9", dev <= 1e-9);
    const double dev_hopping =
        check_decoherence_equality(hopping, random_state(2, 4, rng), 1.5);
    report.add("decoherence_equality_discriminates", dev_hopping, "> 1e-3",
               dev_hopping > 1e-3);
  }

  // Thresholds for both examples.
  for (double p : {0.6, 0.8, 0.95}) {
    const auto loss = validate_threshold(ExampleKind::kLoss, p, {0.5});
    report.add("loss_threshold_consistent_p" + format_number(p),
               loss.t_star.value_or(0.0), "crossing matches",
               loss.consistent);
    const auto deph =
        validate_threshold(ExampleKind::kDephasing, p, {0.3, 0.3, 0.3, 0.3});
    report.add("dephasing_threshold_consistent_p" + format_number(p),
               deph.t_star.value_or(0.0), "crossing matches", deph.consistent);
  }

  // Formula vs oracle on random states.
  double max_gap = 0.0;
  for (int n = 1; n <= 2; ++n)
    for (int m_total = 2; m_total <= 4; ++m_total)
      for (int m = 1; m < m_total; ++m)
        for (int rep = 0; rep < 4; ++rep) {
          const Bipartition split(m, m_total);
          const auto rho = random_state(n, m_total, rng);
          max_gap = std::max(
              max_gap, std::abs(negativity_formula(rho, split).value -
                                negativity_oracle(rho, split).value));
        }
  report.add("formula_oracle_max_gap", max_gap, "<= 1e-10", max_gap <= 1e-10);

  // PPT flip at p = 1/2.
  const bool flip = is_ppt(example_state(0.5 - 1e-6), bip, 1e-9) &&
                    !is_ppt(example_state(0.5 + 1e-6), bip, 1e-9);
  report.add("ppt_flip_at_half", flip ? 1.0 : 0.0, "flips at p = 0.5",
             flip);
}

void verify_configured(const ExperimentConfig& config, CheckReport& report) {
  std::mt19937_64 rng(config.seed);
  const Bipartition bip = config.bipartition();
  const LindbladGenerator gen = config.generator();

  double max_gap = 0.0;
  for (int rep = 0; rep < 25; ++rep) {
    const auto rho = random_state(config.n_particles, config.n_modes, rng);
    max_gap = std::max(max_gap,
                       std::abs(negativity_formula(rho, bip).value -
                                negativity_oracle(rho, bip).value));
  }
  report.add("formula_oracle_max_gap", max_gap, "<= 1e-10", max_gap <= 1e-10);

  const NumberMixture rho0 =
      config.initial_state.build(config.n_particles, bip);
  const int n_top = std::max(config.n_particles, rho0.max_particles());
  const Liouvillian full = build_liouvillian(gen, n_top, config.n_modes);
  const Propagator propagator(full);
  double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
  for (double t : config.grid.times()) {
    const auto rho_t = propagator.evolve(rho0, t);
    worst_trace = std::max(worst_trace, std::abs(mixture_trace(rho_t) - 1.0));
    for (const auto& c : rho_t.components())
      worst_herm = std::max(worst_herm, hermiticity_defect(c.state.matrix()));
    worst_eig = std::min(worst_eig, mixture_min_eigenvalue(rho_t));
  }
  report.add("trajectory_trace_drift", worst_trace, "<= 1e-9",
             worst_trace <= 1e-9);
  report.add("trajectory_hermiticity_defect", worst_herm, "<= 1e-10",
             worst_herm <= 1e-10);
  report.add("trajectory_min_eigenvalue", worst_eig, ">= -1e-8",
             worst_eig >= -1e-8);

  const bool dephasing = all_number_jumps(config.jumps);
  const bool loss = !dephasing && all_loss_jumps(config.jumps, bip);
  if ((dephasing || loss) && rho0.components().size() == 1) {
    const auto& sector0 = rho0.components().front().state;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 5; ++rep) {
      const auto probe = rep == 0 ? sector0
                                  : random_state(sector0.particles(),
                                                 config.n_modes, rng);
      const auto trace =
          dephasing
              ? check_dephasing_bound(gen, probe, bip,
                                      config.grid.times())
              : check_loss_bound(gen, probe, bip, config.grid.times());
      worst_margin = std::min(worst_margin, trace.margin);
    }
    report.add(dephasing ? "dephasing_bound_margin" : "loss_bound_margin",
               worst_margin, ">= -1e-9", worst_margin >= -1e-9);
  }

  if (dephasing &&
      is_diagonal_on_sector(gen.hamiltonian, config.n_particles,
                            config.n_modes)) {
    const double dev = check_decoherence_equality(
        gen, random_state(config.n_particles, config.n_modes, rng),
        config.grid.times().back());
    report.add("decoherence_equality_deviation", dev, "<= 1e-9", dev <= 1e-9);
  }

  if (config.threshold) {
    const auto validation = validate_threshold(
        config.threshold->kind, config.threshold->p, config.threshold->rates);
    report.add("threshold_crossing_consistent",
               validation.t_star.value_or(0.0), "crossing matches",
               validation.consistent);
  }
}

int run_verify(const ExperimentConfig& config,
               const std::filesystem::path& out_path, std::ostream& log) {
  CheckReport report;
  if (config.suite == "paper-examples")
    verify_paper_examples(report, config.seed);
  else if (!config.suite.empty())
    throw ConfigInvalid("/suite", "unknown suite '" + config.suite + "'");
  else
    verify_configured(config, report);

  CsvWriter csv(out_path, {{"check", "name of the verified property"},
                           {"value", "measured margin or deviation"},
                           {"limit", "acceptance limit"},
                           {"status", "pass or fail"}});
  for (const auto& row : report.rows) {
    csv.write_row({row[0], row[1], row[2], row[3]});
    log << (row[3] == "pass" ? "[PASS] " : "[FAIL] ") << row[0] << " = "
        << row[1] << " (" << row[2] << ")\n";
  }
  csv.finish();
  log << (report.all_pass ? "verify: all checks passed\n"
                          : "verify: some checks FAILED\n");
  return report.all_pass ? 0 : 2;
}

}  // namespace

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<CsvColumn> columns)
    : path_(std::move(path)), columns_(std::move(columns)) {}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw TaskFailed("CSV row width does not match the declared columns");
  rows_.push_back(cells);
}

void CsvWriter::finish() {
  if (finished_) return;
  finished_ = true;
  std::ofstream out(path_);
  if (!out) throw TaskFailed("cannot write " + path_.string());
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << columns_[i].name << (i + 1 < columns_.size() ? "," : "\n");
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
  out.close();

  nlohmann::json schema;
  schema["file"] = path_.filename().string();
  schema["columns"] = nlohmann::json::array();
  for (const auto& column : columns_)
    schema["columns"].push_back(
        {{"name", column.name}, {"description", column.description}});
  std::filesystem::path schema_path = path_;
  schema_path.replace_extension(".schema.json");
  std::ofstream schema_out(schema_path);
  if (!schema_out) throw TaskFailed("cannot write " + schema_path.string());
  schema_out << schema.dump(2) << "\n";
}

CsvWriter::~CsvWriter() {
  try {
    finish();
  } catch (...) {
    // destructor must not throw; finish() explicitly to observe errors
  }
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

int run_task(const ExperimentConfig& config,
             const std::filesystem::path& output_dir, std::ostream& log) {
  std::filesystem::create_directories(output_dir);
  const std::filesystem::path out_path = output_dir / config.output_path;
  switch (config.task) {
    case Task::kEvolve:
      return run_evolve(config, out_path, log);
    case Task::kVerifyBounds:
      return run_verify(config, out_path, log);
    case Task::kThreshold:
      return run_threshold(config, out_path, log);
    case Task::kLargeN:
      return run_large_n(config, out_path, log);
    case Task::kStationary:
      return run_stationary(config, out_path, log);
  }
  throw TaskFailed("unknown task");
}

}  // namespace entdyn
