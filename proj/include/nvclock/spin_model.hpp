// Copyright 2026 The nvclock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Ground-state spin Hamiltonian of the NV center with its intrinsic 14N
// nuclear spin, restricted to an axial magnetic field.
//
// Units: frequencies in Hz, fields in gauss, temperatures in kelvin.
// Product basis |m_s, m_I> with m_s in {+1, 0, -1} as the outer index and
// m_I in {+1, 0, -1} as the inner index, i.e. index = 3 * (1 - m_s) + (1 - m_I).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "nvclock/errors.hpp"

namespace nvclock {

struct SpinConstants {
  double D0 = 2870.3e6;         // Hz at T0
  double Q0 = -4945.9e3;        // Hz at T0
  double gamma_e = 2.8024e6;    // Hz/G
  double gamma_n = 307.7;       // Hz/G
  double A_par = -2.16e6;       // Hz
  double A_perp = -2.70e6;      // Hz
  double T0 = 297.0;            // K
  double lambda_D = -25.3e-6;   // 1/K
  double lambda_Q = -7.17e-6;   // 1/K
  // Second-order fractional coefficients (1/K^2). Only the combination
  // lambda_D2 / lambda_D - lambda_Q2 / lambda_Q = -800 ppm/K is pinned.
  double lambda_D2 = -800e-6 * -25.3e-6;
  double lambda_Q2 = 0.0;

  void validate() const {
    if (!(D0 > 0.0)) throw ConfigError("D0 must be positive");
    if (!(Q0 < 0.0)) throw ConfigError("Q0 must be negative");
    if (lambda_D == lambda_Q) {
      throw ConfigError(
          "lambda_D equals lambda_Q: the temperature-insensitive combination "
          "is undefined (alpha would approach infinity)");
    }
    if (!(T0 > 0.0)) throw ConfigError("T0 must be positive");
  }
};

struct FrequencyQuartet {
  double f_plus = 0.0;   // |0,+1> <-> |+1,+1>
  double f_minus = 0.0;  // |0,+1> <-> |-1,+1>
  double f1 = 0.0;       // |0,+1> <-> |0,0>
  double f2 = 0.0;       // |0,0>  <-> |0,-1>

  [[nodiscard]] double d_half_sum() const { return 0.5 * (f_plus + f_minus); }
  [[nodiscard]] double q_half_sum() const { return 0.5 * (f1 + f2); }
};

struct ApproxFrequencies {
  FrequencyQuartet quartet;
  double q_half_sum = 0.0;
  double d_half_sum = 0.0;
};

inline constexpr double kMaxAxialField = 2000.0;  // G
inline constexpr double kMinTemperature = 70.0;   // K
inline constexpr double kMaxTemperature = 400.0;  // K

using SpinHamiltonian = Eigen::Matrix<std::complex<double>, 9, 9>;

namespace detail {

inline void check_temperature(double T) {
  if (!std::isfinite(T) || T < kMinTemperature || T > kMaxTemperature) {
    throw DomainError("temperature " + std::to_string(T) +
                      " K outside the quadratic model window [70, 400] K");
  }
}

inline void check_field(double Bz) {
  if (!std::isfinite(Bz) || std::abs(Bz) >= kMaxAxialField) {
    throw DomainError("axial field " + std::to_string(Bz) +
                      " G outside |Bz| < 2000 G");
  }
}

constexpr int basis_index(int ms, int mi) { return 3 * (1 - ms) + (1 - mi); }

}  // namespace detail

/// D(T) and Q(T) from the quadratic fractional temperature model.
inline std::pair<double, double> temperature_model(const SpinConstants& c, double T) {
  detail::check_temperature(T);
  const double dT = T - c.T0;
  const double d = c.D0 * (1.0 + c.lambda_D * dT + 0.5 * c.lambda_D2 * dT * dT);
  const double q = c.Q0 * (1.0 + c.lambda_Q * dT + 0.5 * c.lambda_Q2 * dT * dT);
  return {d, q};
}

inline SpinHamiltonian build_hamiltonian(const SpinConstants& c, double Bz, double T) {
  detail::check_field(Bz);
  const auto [d, q] = temperature_model(c, T);

  SpinHamiltonian h = SpinHamiltonian::Zero();
  for (int ms = -1; ms <= 1; ++ms) {
    for (int mi = -1; mi <= 1; ++mi) {
      const double e = d * ms * ms + q * mi * mi + c.gamma_e * Bz * ms -
                       c.gamma_n * Bz * mi + c.A_par * ms * mi;
      const int k = detail::basis_index(ms, mi);
      h(k, k) = e;
    }
  }
  // (A_perp / 2)(S+ I- + S- I+): couples |ms, mi> to |ms + 1, mi - 1> with
  // matrix element (A_perp / 2) * sqrt(2) * sqrt(2) for spin-1 ladders.
  for (int ms = -1; ms <= 0; ++ms) {
    for (int mi = 0; mi <= 1; ++mi) {
      const int a = detail::basis_index(ms, mi);
      const int b = detail::basis_index(ms + 1, mi - 1);
      h(a, b) = c.A_perp;
      h(b, a) = c.A_perp;
    }
  }
  return h;
}

/// Eigenvalues of the spin Hamiltonian labelled by the product state they
/// are adiabatically connected to. `energy[basis_index(ms, mi)]`.
inline std::array<double, 9> labelled_energies(const SpinConstants& c, double Bz, double T,
                                               double min_overlap = 0.9) {
  const SpinHamiltonian h = build_hamiltonian(c, Bz, T);
  std::array<double, 9> energy{};

  // The axial Hamiltonian conserves m = ms + mi, so each block is
  // diagonalised separately; degeneracies between blocks never mix labels.
  for (int m = -2; m <= 2; ++m) {
    std::array<int, 3> idx{};
    int n = 0;
    for (int ms = 1; ms >= -1; --ms) {
      const int mi = m - ms;
      if (mi < -1 || mi > 1) continue;
      idx[n++] = detail::basis_index(ms, mi);
    }
    Eigen::MatrixXd block(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) block(i, j) = h(idx[i], idx[j]).real();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
    const Eigen::MatrixXd& vecs = solver.eigenvectors();

    // Optimal assignment over the (at most 3!) label permutations.
    std::array<int, 3> perm{0, 1, 2};
    std::array<int, 3> best_perm = perm;
    double best_score = -1.0;
    do {
      double score = 0.0;
      for (int i = 0; i < n; ++i) score += vecs(i, perm[i]) * vecs(i, perm[i]);
      if (score > best_score + 1e-12) {
        best_score = score;
        best_perm = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.begin() + n));

    for (int i = 0; i < n; ++i) {
      const int k = best_perm[i];
      const double own = vecs(i, k) * vecs(i, k);
      if (own < min_overlap) {
        // Mixing inside one |m_s| manifold (m_s = +1 with m_s = -1 near zero
        // field) only moves energies at the hyperfine level; mixing with a
        // different |m_s| is the anticrossing case and cannot be labelled.
        const int ms_i = 1 - idx[i] / 3;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          const int ms_j = 1 - idx[j] / 3;
          if (std::abs(ms_i) != std::abs(ms_j) && vecs(j, k) * vecs(j, k) > 1.0 - min_overlap) {
            throw NearAnticrossingError(
                "eigenstate labels ambiguous at Bz = " + std::to_string(Bz) +
                " G (near the ground-state level anticrossing)");
          }
        }
      }
      energy[idx[i]] = solver.eigenvalues()(k);
    }
  }
  return energy;
}

/// Exact transition frequencies from diagonalisation. All four are returned
/// as positive magnitudes:
///   f+ = E|+1,+1> - E|0,+1>,  f- = |E|-1,+1> - E|0,+1>|,
///   f1 = |E|0,0> - E|0,+1>|,  f2 = |E|0,-1> - E|0,0>|.
inline FrequencyQuartet transition_frequencies(const SpinConstants& c, double Bz, double T) {
  using detail::basis_index;
  const auto e = labelled_energies(c, Bz, T);
  FrequencyQuartet out;
  out.f_plus = std::abs(e[basis_index(1, 1)] - e[basis_index(0, 1)]);
  out.f_minus = std::abs(e[basis_index(-1, 1)] - e[basis_index(0, 1)]);
  out.f1 = std::abs(e[basis_index(0, 0)] - e[basis_index(0, 1)]);
  out.f2 = std::abs(e[basis_index(0, -1)] - e[basis_index(0, 0)]);
  return out;
}

/// Second-order perturbative transition frequencies in A_perp / (D +- gamma_e B).
/// Rejects fields within 10 |A_perp| of a level anticrossing.
inline ApproxFrequencies approx_frequencies(const SpinConstants& c, double Bz, double T) {
  detail::check_field(Bz);
  const auto [d, q] = temperature_model(c, T);
  const double zeeman = c.gamma_e * Bz;
  const double below = d - zeeman;
  const double above = d + zeeman;
  if (std::abs(below) < 10.0 * std::abs(c.A_perp) ||
      std::abs(above) < 10.0 * std::abs(c.A_perp)) {
    throw NearAnticrossingError("perturbative frequencies invalid within 10 A_perp of the GSLAC");
  }
  if (below < 0.0 || above < 0.0) {
    throw DomainError("perturbative frequencies assume the field lies below the GSLAC");
  }
  const double a2 = c.A_perp * c.A_perp;
  const double qa = std::abs(q);
  const double nuc = c.gamma_n * Bz;

  ApproxFrequencies out;
  out.quartet.f1 = qa + nuc - a2 / below;
  out.quartet.f2 = qa - nuc - a2 / above;
  out.quartet.f_plus = d + zeeman + c.A_par + a2 / above;
  out.quartet.f_minus = d - zeeman - c.A_par + a2 / below + a2 / above;
  out.q_half_sum = qa - a2 * d / (below * above);
  out.d_half_sum = d + a2 * (1.5 * d - 0.5 * zeeman) / (below * above);
  return out;
}

}  // namespace nvclock
