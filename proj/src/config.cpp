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

#include "entdyn/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace entdyn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
  throw ConfigInvalid(pointer, message);
}

const json& member(const json& j, const std::string& pointer,
                   const std::string& key) {
  if (!j.is_object() || !j.contains(key))
    fail(pointer + "/" + key, "missing required field");
  return j.at(key);
}

double to_double(const json& j, const std::string& pointer) {
  if (!j.is_number()) fail(pointer, "expected a number");
  return j.get<double>();
}

int to_int(const json& j, const std::string& pointer) {
  if (!j.is_number_integer()) fail(pointer, "expected an integer");
  return j.get<int>();
}

std::string to_string_field(const json& j, const std::string& pointer) {
  if (!j.is_string()) fail(pointer, "expected a string");
  return j.get<std::string>();
}

std::vector<double> to_rates(const json& j, const std::string& pointer,
                             std::size_t expected = 0) {
  if (!j.is_array()) fail(pointer, "expected an array of rates");
  std::vector<double> rates;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const double v = to_double(j.at(i), pointer + "/" + std::to_string(i));
    if (v < 0) fail(pointer + "/" + std::to_string(i), "rate must be >= 0");
    rates.push_back(v);
  }
  if (expected != 0 && rates.size() != expected)
    fail(pointer, "expected " + std::to_string(expected) + " entries");
  return rates;
}

Complex to_complex(const json& j, const std::string& pointer) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2)
    fail(pointer, "expected a number or [re, im]");
  return Complex(to_double(j.at(0), pointer + "/0"),
                 to_double(j.at(1), pointer + "/1"));
}

OperatorSpec to_operator(const json& j, const std::string& pointer,
                         int n_modes) {
  if (!j.is_object() || !j.contains("terms"))
    fail(pointer, "expected an object with a 'terms' array");
  const json& terms = j.at("terms");
  if (!terms.is_array() || terms.empty())
    fail(pointer + "/terms", "expected a non-empty array");
  OperatorSpec spec;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = pointer + "/terms/" + std::to_string(i);
    const json& jt = terms.at(i);
    OperatorTerm term;
    term.coeff = to_complex(member(jt, tp, "coeff"), tp + "/coeff");
    const json& word = member(jt, tp, "word");
    if (!word.is_array()) fail(tp + "/word", "expected an array");
    for (std::size_t w = 0; w < word.size(); ++w) {
      const std::string wp = tp + "/word/" + std::to_string(w);
      const json& jw = word.at(w);
      const int mode = to_int(member(jw, wp, "mode"), wp + "/mode");
      if (mode < 1 || mode > n_modes)
        fail(wp + "/mode", "mode outside [1, M]");
      const std::string op = to_string_field(member(jw, wp, "op"), wp + "/op");
      if (op != "create" && op != "annihilate")
        fail(wp + "/op", "expected 'create' or 'annihilate'");
      term.word.push_back(
          {mode, op == "create" ? Ladder::kCreate : Ladder::kAnnihilate});
    }
    spec.terms.push_back(std::move(term));
  }
  return spec;
}

OperatorSpec parse_hamiltonian(const json& j, const std::string& pointer,
                               int n_modes) {
  const std::string kind =
      to_string_field(member(j, pointer, "kind"), pointer + "/kind");
  if (kind == "none") return {};
  if (kind == "diagonal") {
    const json& e = member(j, pointer, "energies");
    if (!e.is_array() || static_cast<int>(e.size()) != n_modes)
      fail(pointer + "/energies", "expected one energy per mode");
    std::vector<double> energies;
    for (std::size_t i = 0; i < e.size(); ++i)
      energies.push_back(
          to_double(e.at(i), pointer + "/energies/" + std::to_string(i)));
    return OperatorSpec::diagonal_hamiltonian(energies);
  }
  if (kind == "hopping") {
    const json& a = member(j, pointer, "amplitudes");
    if (!a.is_array() || static_cast<int>(a.size()) != n_modes - 1)
      fail(pointer + "/amplitudes", "expected M-1 amplitudes");
    std::vector<double> amplitudes;
    for (std::size_t i = 0; i < a.size(); ++i)
      amplitudes.push_back(
          to_double(a.at(i), pointer + "/amplitudes/" + std::to_string(i)));
    return OperatorSpec::hopping_hamiltonian(amplitudes);
  }
  if (kind == "explicit")
    return to_operator(member(j, pointer, "operator"), pointer + "/operator",
                       n_modes);
  fail(pointer + "/kind", "unknown hamiltonian kind '" + kind + "'");
}

std::vector<JumpOperator> parse_noise(const json& j, const std::string& pointer,
                                      int n_modes) {
  if (!j.is_array()) fail(pointer, "expected an array of noise entries");
  std::vector<JumpOperator> jumps;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string np = pointer + "/" + std::to_string(i);
    const json& jn = j.at(i);
    const std::string kind =
        to_string_field(member(jn, np, "kind"), np + "/kind");
    if (kind == "dephasing" || kind == "loss") {
      const auto rates = to_rates(member(jn, np, "rates"), np + "/rates",
                                  static_cast<std::size_t>(n_modes));
      for (int mode = 1; mode <= n_modes; ++mode) {
        if (rates[mode - 1] == 0.0) continue;
        jumps.push_back({rates[mode - 1],
                         kind == "dephasing" ? OperatorSpec::number(mode)
                                             : OperatorSpec::annihilation(mode)});
      }
    } else if (kind == "custom") {
      const double rate = to_double(member(jn, np, "rate"), np + "/rate");
      if (rate < 0) fail(np + "/rate", "rate must be >= 0");
      jumps.push_back({rate, to_operator(member(jn, np, "operator"),
                                         np + "/operator", n_modes)});
    } else {
      fail(np + "/kind", "unknown noise kind '" + kind + "'");
    }
  }
  return jumps;
}

InitialStateSpec parse_initial_state(const json& j, const std::string& pointer,
                                     int n_modes, bool allow_mixture);

InitialStateSpec parse_initial_state(const json& j, const std::string& pointer,
                                     int n_modes, bool allow_mixture) {
  InitialStateSpec spec;
  const std::string kind =
      to_string_field(member(j, pointer, "kind"), pointer + "/kind");
  if (kind == "example") {
    spec.kind = InitialStateSpec::Kind::kExample;
    spec.p = to_double(member(j, pointer, "p"), pointer + "/p");
    if (spec.p < 0.0 || spec.p > 1.0) fail(pointer + "/p", "p outside [0, 1]");
    return spec;
  }
  if (kind == "separable_pure") {
    spec.kind = InitialStateSpec::Kind::kSeparablePure;
    spec.poly_a = to_operator(member(j, pointer, "poly_a"),
                              pointer + "/poly_a", n_modes);
    spec.poly_b = to_operator(member(j, pointer, "poly_b"),
                              pointer + "/poly_b", n_modes);
    return spec;
  }
  if (kind == "diagonal_class") {
    spec.kind = InitialStateSpec::Kind::kDiagonalClass;
    if (j.contains("flat") && j.at("flat").is_boolean() &&
        j.at("flat").get<bool>()) {
      spec.alpha = 1.0;
      spec.c = {1.0, 1.0};
      spec.table.entries.clear();  // filled at build time for the flat case
      return spec;
    }
    spec.alpha = to_double(member(j, pointer, "alpha"), pointer + "/alpha");
    const json& c = member(j, pointer, "c");
    if (!c.is_array() || static_cast<int>(c.size()) != n_modes)
      fail(pointer + "/c", "expected one coefficient per mode");
    for (std::size_t i = 0; i < c.size(); ++i)
      spec.c.push_back(to_double(c.at(i), pointer + "/c/" + std::to_string(i)));
    const json& entries = member(j, pointer, "entries");
    if (!entries.is_array()) fail(pointer + "/entries", "expected an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string ep = pointer + "/entries/" + std::to_string(i);
      const json& je = entries.at(i);
      spec.table.set(to_int(member(je, ep, "k"), ep + "/k"),
                     to_int(member(je, ep, "l"), ep + "/l"),
                     to_int(member(je, ep, "sigma"), ep + "/sigma"),
                     to_int(member(je, ep, "sigma_prime"), ep + "/sigma_prime"),
                     to_complex(member(je, ep, "value"), ep + "/value"));
    }
    return spec;
  }
  if (kind == "explicit") {
    spec.kind = InitialStateSpec::Kind::kExplicit;
    const json& m = member(j, pointer, "matrix");
    if (!m.is_array() || m.empty()) fail(pointer + "/matrix", "expected rows");
    const auto dim = static_cast<Eigen::Index>(m.size());
    spec.matrix.resize(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const json& row = m.at(r);
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
        fail(pointer + "/matrix/" + std::to_string(r), "ragged matrix");
      for (Eigen::Index c = 0; c < dim; ++c)
        spec.matrix(r, c) = to_complex(
            row.at(c), pointer + "/matrix/" + std::to_string(r) + "/" +
                           std::to_string(c));
    }
    return spec;
  }
  if (kind == "mixture") {
    if (!allow_mixture) fail(pointer + "/kind", "nested mixtures not allowed");
    spec.kind = InitialStateSpec::Kind::kMixture;
    const json& comps = member(j, pointer, "components");
    if (!comps.is_array() || comps.empty())
      fail(pointer + "/components", "expected a non-empty array");
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string cp = pointer + "/components/" + std::to_string(i);
      const json& jc = comps.at(i);
      InitialStateSpec::Component component;
      component.weight =
          to_double(member(jc, cp, "weight"), cp + "/weight");
      if (component.weight < 0) fail(cp + "/weight", "weight must be >= 0");
      component.sector = to_int(member(jc, cp, "N"), cp + "/N");
      if (component.sector < 0) fail(cp + "/N", "N must be >= 0");
      component.state = std::make_shared<InitialStateSpec>(parse_initial_state(
          member(jc, cp, "state"), cp + "/state", n_modes, false));
      spec.components.push_back(std::move(component));
    }
    return spec;
  }
  fail(pointer + "/kind", "unknown initial state kind '" + kind + "'");
}

Task parse_task(const std::string& name, const std::string& pointer) {
  if (name == "evolve") return Task::kEvolve;
  if (name == "verify-bounds") return Task::kVerifyBounds;
  if (name == "threshold") return Task::kThreshold;
  if (name == "large-n") return Task::kLargeN;
  if (name == "stationary") return Task::kStationary;
  fail(pointer, "unknown task '" + name + "'");
}

}  // namespace

std::vector<double> TimeGrid::times() const {
  std::vector<double> out;
  out.reserve(points);
  if (points == 1) {
    out.push_back(start);
    return out;
  }
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    out.push_back(log_spacing ? start * std::pow(stop / start, f)
                              : start + f * (stop - start));
  }
  return out;
}

SectorDensityMatrix InitialStateSpec::build_sector(
    int n_particles, const Bipartition& bip) const {
  switch (kind) {
    case Kind::kExample:
      return example_state(p);
    case Kind::kSeparablePure:
      return separable_pure(poly_a, poly_b, bip);
    case Kind::kDiagonalClass: {
      if (table.entries.empty() && bip.n_modes == 2) {
        return flat_two_mode_state(n_particles);
      }
      return diagonal_class_state(n_particles, bip, table, alpha, c);
    }
    case Kind::kExplicit:
      return SectorDensityMatrix(n_particles, bip.n_modes, matrix);
    case Kind::kMixture:
      throw InvalidState("mixture cannot build a single sector");
  }
  throw InvalidState("unreachable");
}

NumberMixture InitialStateSpec::build(int n_particles,
                                      const Bipartition& bip) const {
  if (kind != Kind::kMixture)
    return NumberMixture::pure_sector(build_sector(n_particles, bip));
  std::vector<NumberMixture::Component> parts;
  for (const auto& component : components) {
    parts.push_back({component.weight,
                     component.state->build_sector(component.sector, bip)});
  }
  return NumberMixture(std::move(parts), 1e-9);
}

std::string task_name(Task task) {
  switch (task) {
    case Task::kEvolve:
      return "evolve";
    case Task::kVerifyBounds:
      return "verify-bounds";
    case Task::kThreshold:
      return "threshold";
    case Task::kLargeN:
      return "large-n";
    case Task::kStationary:
      return "stationary";
  }
  return "?";
}

ExperimentConfig parse_config_text(const std::string& text,
                                   std::optional<Task> task_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("not valid JSON: ") + e.what());
  }
  ExperimentConfig config;

  const json& system = member(j, "", "system");
  config.n_modes = to_int(member(system, "/system", "M"), "/system/M");
  if (config.n_modes < 2) fail("/system/M", "need at least two modes");
  config.n_particles = to_int(member(system, "/system", "N"), "/system/N");
  if (config.n_particles < 0) fail("/system/N", "N must be >= 0");
  config.m = to_int(member(system, "/system", "m"), "/system/m");
  if (config.m < 1 || config.m >= config.n_modes)
    fail("/system/m", "need 1 <= m < M");

  if (j.contains("hamiltonian"))
    config.hamiltonian =
        parse_hamiltonian(j.at("hamiltonian"), "/hamiltonian", config.n_modes);
  if (j.contains("noise"))
    config.jumps = parse_noise(j.at("noise"), "/noise", config.n_modes);
  if (j.contains("initial_state"))
    config.initial_state = parse_initial_state(
        j.at("initial_state"), "/initial_state", config.n_modes, true);

  if (j.contains("task")) {
    const Task from_file =
        parse_task(to_string_field(j.at("task"), "/task"), "/task");
    if (task_override && from_file != *task_override)
      fail("/task", "config declares task '" + task_name(from_file) +
                        "' but the subcommand runs '" +
                        task_name(*task_override) + "'");
    config.task = from_file;
  }
  if (task_override) config.task = *task_override;

  if (j.contains("time_grid")) {
    const json& g = j.at("time_grid");
    config.grid.start = to_double(member(g, "/time_grid", "start"),
                                  "/time_grid/start");
    config.grid.stop =
        to_double(member(g, "/time_grid", "stop"), "/time_grid/stop");
    config.grid.points =
        to_int(member(g, "/time_grid", "points"), "/time_grid/points");
    if (config.grid.points < 1)
      fail("/time_grid/points", "need at least one point");
    if (g.contains("spacing")) {
      const std::string s = to_string_field(g.at("spacing"),
                                            "/time_grid/spacing");
      if (s != "linear" && s != "log")
        fail("/time_grid/spacing", "expected 'linear' or 'log'");
      config.grid.log_spacing = (s == "log");
      if (config.grid.log_spacing && config.grid.start <= 0.0)
        fail("/time_grid/start", "log spacing needs start > 0");
    }
    if (!(config.grid.stop > config.grid.start) && config.grid.points > 1)
      fail("/time_grid/stop", "time grid must be strictly increasing");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    config.output_path =
        to_string_field(member(o, "/output", "path"), "/output/path");
    if (o.contains("format")) {
      const std::string f = to_string_field(o.at("format"), "/output/format");
      if (f != "csv") fail("/output/format", "only 'csv' is supported");
    }
  }

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      fail("/seed", "expected an unsigned integer");
    config.seed = j.at("seed").get<std::uint64_t>();
  }

  if (j.contains("large_n")) {
    const json& ln = j.at("large_n");
    LargeNSpec spec;
    const json& ns = member(ln, "/large_n", "N_values");
    if (!ns.is_array() || ns.empty())
      fail("/large_n/N_values", "expected a non-empty array");
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const int n =
          to_int(ns.at(i), "/large_n/N_values/" + std::to_string(i));
      if (n < 1) fail("/large_n/N_values/" + std::to_string(i), "N must be >= 1");
      spec.n_values.push_back(n);
    }
    if (ln.contains("rates"))
      spec.rates = to_rates(ln.at("rates"), "/large_n/rates", 2);
    if (ln.contains("n_terms")) {
      spec.n_terms = to_int(ln.at("n_terms"), "/large_n/n_terms");
      if (spec.n_terms < 0) fail("/large_n/n_terms", "must be >= 0");
    }
    config.large_n = std::move(spec);
  }

  if (j.contains("threshold")) {
    const json& th = j.at("threshold");
    ThresholdSpec spec;
    const std::string kind =
        to_string_field(member(th, "/threshold", "example"),
                        "/threshold/example");
    if (kind == "loss")
      spec.kind = ExampleKind::kLoss;
    else if (kind == "dephasing")
      spec.kind = ExampleKind::kDephasing;
    else
      fail("/threshold/example", "expected 'loss' or 'dephasing'");
    spec.p = to_double(member(th, "/threshold", "p"), "/threshold/p");
    if (spec.p < 0.0 || spec.p > 1.0) fail("/threshold/p", "p outside [0, 1]");
    spec.rates = to_rates(member(th, "/threshold", "rates"),
                          "/threshold/rates",
                          spec.kind == ExampleKind::kLoss ? 1 : 4);
    config.threshold = std::move(spec);
  }

  if (j.contains("suite"))
    config.suite = to_string_field(j.at("suite"), "/suite");

  return config;
}

ExperimentConfig parse_config_file(const std::string& path,
                                   std::optional<Task> task_override) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("", "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), task_override);
}

}  // namespace entdyn
