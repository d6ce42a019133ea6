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

#ifndef ENTDYN_OPERATORS_HPP
#define ENTDYN_OPERATORS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "entdyn/fock.hpp"
#include "entdyn/linalg.hpp"

namespace entdyn {

enum class Ladder { kCreate, kAnnihilate };

/// One ladder operator acting on a mode. Modes are 1-based, as in all
/// external interfaces.
struct LadderOp {
  int mode;
  Ladder kind;
};

/// A scalar coefficient times an ordered product of ladder operators. The
/// word is applied right to left, i.e. word.back() acts first.
struct OperatorTerm {
  Complex coeff;
  std::vector<LadderOp> word;

  int net_particle_change() const {
    int d = 0;
    for (const auto& op : word) d += (op.kind == Ladder::kCreate) ? 1 : -1;
    return d;
  }
};

/// Polynomial in creation/annihilation operators, kept as data so it can be
/// rendered on any particle-number sector.
struct OperatorSpec {
  std::vector<OperatorTerm> terms;

  bool empty() const { return terms.empty(); }

  /// Net particle change, identical for every term by construction of a
  /// sector-to-sector matrix. Throws MixedParticleChange otherwise.
  int net_particle_change() const {
    if (terms.empty()) return 0;
    const int d = terms.front().net_particle_change();
    for (const auto& t : terms) {
      if (t.net_particle_change() != d)
        throw MixedParticleChange(
            "operator terms change the particle number by different amounts");
    }
    return d;
  }

  void validate_modes(int n_modes) const {
    for (const auto& t : terms)
      for (const auto& op : t.word)
        if (op.mode < 1 || op.mode > n_modes)
          throw ModeOutOfRange("mode index " + std::to_string(op.mode) +
                               " outside [1, " + std::to_string(n_modes) +
                               "]");
  }

  OperatorSpec adjoint() const {
    OperatorSpec out;
    out.terms.reserve(terms.size());
    for (const auto& t : terms) {
      OperatorTerm conj_term;
      conj_term.coeff = std::conj(t.coeff);
      conj_term.word.reserve(t.word.size());
      for (auto it = t.word.rbegin(); it != t.word.rend(); ++it) {
        conj_term.word.push_back(
            {it->mode, it->kind == Ladder::kCreate ? Ladder::kAnnihilate
                                                   : Ladder::kCreate});
      }
      out.terms.push_back(std::move(conj_term));
    }
    return out;
  }

  OperatorSpec operator*(const OperatorSpec& rhs) const {
    OperatorSpec out;
    for (const auto& a : terms)
      for (const auto& b : rhs.terms) {
        OperatorTerm t;
        t.coeff = a.coeff * b.coeff;
        t.word = a.word;
        t.word.insert(t.word.end(), b.word.begin(), b.word.end());
        out.terms.push_back(std::move(t));
      }
    return out;
  }

  OperatorSpec operator+(const OperatorSpec& rhs) const {
    OperatorSpec out = *this;
    out.terms.insert(out.terms.end(), rhs.terms.begin(), rhs.terms.end());
    return out;
  }

  static OperatorSpec annihilation(int mode) {
    return {{{Complex(1, 0), {{mode, Ladder::kAnnihilate}}}}};
  }

  static OperatorSpec creation(int mode) {
    return {{{Complex(1, 0), {{mode, Ladder::kCreate}}}}};
  }

  static OperatorSpec number(int mode) {
    return {{{Complex(1, 0),
              {{mode, Ladder::kCreate}, {mode, Ladder::kAnnihilate}}}}};
  }

  /// H = sum_j energies[j] n_j.
  static OperatorSpec diagonal_hamiltonian(const std::vector<double>& energies) {
    OperatorSpec h;
    for (int j = 0; j < static_cast<int>(energies.size()); ++j) {
      if (energies[j] == 0.0) continue;
      h.terms.push_back({Complex(energies[j], 0),
                         {{j + 1, Ladder::kCreate}, {j + 1, Ladder::kAnnihilate}}});
    }
    return h;
  }

  /// H = -sum_j amplitudes[j] (a_j† a_{j+1} + a_j a_{j+1}†), nearest-neighbour
  /// hopping on a chain; amplitudes has M-1 entries.
  static OperatorSpec hopping_hamiltonian(const std::vector<double>& amplitudes) {
    OperatorSpec h;
    for (int j = 0; j < static_cast<int>(amplitudes.size()); ++j) {
      if (amplitudes[j] == 0.0) continue;
      const Complex c(-amplitudes[j], 0);
      h.terms.push_back(
          {c, {{j + 1, Ladder::kCreate}, {j + 2, Ladder::kAnnihilate}}});
      h.terms.push_back(
          {c, {{j + 2, Ladder::kCreate}, {j + 1, Ladder::kAnnihilate}}});
    }
    return h;
  }
};

namespace detail {

/// Applies a word to a basis state; returns the amplitude and final
/// occupations, or amplitude 0 if an annihilator hits an empty mode.
inline Complex apply_word(const std::vector<LadderOp>& word, FockState& occ) {
  double amplitude = 1.0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const int j = it->mode - 1;
    if (it->kind == Ladder::kAnnihilate) {
      if (occ(j) == 0) return Complex(0, 0);
      amplitude *= std::sqrt(static_cast<double>(occ(j)));
      occ(j) -= 1;
    } else {
      amplitude *= std::sqrt(static_cast<double>(occ(j) + 1));
      occ(j) += 1;
    }
  }
  return Complex(amplitude, 0);
}

}  // namespace detail

/// Matrix of `spec` from the sector with `n_from` particles to the sector
/// with n_from + net change, both in canonical order. Matrix elements follow
/// a|..k..> = sqrt(k)|..k-1..> and a†|..k..> = sqrt(k+1)|..k+1..>.
inline MatrixXcd ladder_matrix(const OperatorSpec& spec, int n_from,
                               int n_modes) {
  spec.validate_modes(n_modes);
  const int d = spec.net_particle_change();
  const int n_to = n_from + d;
  const FockBasis from(n_from, n_modes);
  if (n_to < 0) return MatrixXcd::Zero(0, from.dim());
  const FockBasis to(n_to, n_modes);
  MatrixXcd mat = MatrixXcd::Zero(to.dim(), from.dim());
  for (Eigen::Index col = 0; col < from.dim(); ++col) {
    for (const auto& term : spec.terms) {
      FockState occ = from.state(col);
      const Complex amp = detail::apply_word(term.word, occ);
      if (amp == Complex(0, 0)) continue;
      mat(to.rank(occ), col) += term.coeff * amp;
    }
  }
  return mat;
}

/// Applies `spec` to a vector living in the canonical basis of sector
/// `n_from`; the result lives in sector n_from + net change.
inline VectorXcd apply_operator(const OperatorSpec& spec, const VectorXcd& vec,
                                int n_from, int n_modes) {
  return ladder_matrix(spec, n_from, n_modes) * vec;
}

}  // namespace entdyn

#endif  // ENTDYN_OPERATORS_HPP
