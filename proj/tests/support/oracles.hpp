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

// Reference implementations used only by the tests. Each one takes a
// different route from the library code it checks.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "nvclock/psn.hpp"
#include "nvclock/pulse_engine.hpp"
#include "nvclock/rng.hpp"
#include "nvclock/spin_model.hpp"

namespace oracle {

using cd = std::complex<double>;
using M3 = Eigen::Matrix3cd;
using M9 = Eigen::Matrix<cd, 9, 9>;

/// Spin-1 operators in the (+1, 0, -1) basis.
struct Spin1 {
  M3 z, plus, minus, id;
  Spin1() {
    z = M3::Zero();
    z(0, 0) = 1.0;
    z(2, 2) = -1.0;
    plus = M3::Zero();
    plus(0, 1) = std::sqrt(2.0);
    plus(1, 2) = std::sqrt(2.0);
    minus = plus.adjoint();
    id = M3::Identity();
  }
};

inline M9 kron(const M3& a, const M3& b) {
  M9 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) out(3 * i + k, 3 * j + l) = a(i, j) * b(k, l);
  return out;
}

/// D Sz^2 + Q Iz^2 + gamma_e B Sz - gamma_n B Iz + A_par Sz Iz
///   + (A_perp / 2)(S+ I- + S- I+), assembled from Kronecker products.
inline M9 hamiltonian(const nvclock::SpinConstants& c, double Bz, double T) {
  const auto [D, Q] = nvclock::temperature_model(c, T);
  const Spin1 s;
  M9 h = D * kron(s.z * s.z, s.id) + Q * kron(s.id, s.z * s.z) + c.gamma_e * Bz * kron(s.z, s.id) -
         c.gamma_n * Bz * kron(s.id, s.z) + c.A_par * kron(s.z, s.z) +
         0.5 * c.A_perp * (kron(s.plus, s.minus) + kron(s.minus, s.plus));
  return h;
}

/// Three-level propagator by fixed-step RK4 integration of
/// i d|psi>/dt = H |psi>, column by column.
inline M3 rk4_propagator(const M3& h, double duration, int steps = 4000) {
  const double dt = duration / steps;
  const cd mi(0.0, -1.0);
  M3 u = M3::Identity();
  for (int n = 0; n < steps; ++n) {
    const M3 k1 = mi * h * u;
    const M3 k2 = mi * h * (u + 0.5 * dt * k1);
    const M3 k3 = mi * h * (u + 0.5 * dt * k2);
    const M3 k4 = mi * h * (u + dt * k3);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

/// Resonant two-tone pulse Hamiltonian with equal Rabi frequencies and
/// duration 1: area Lambda = sqrt(2) * Omega.
inline M3 resonant_pulse_hamiltonian(double area) {
  const double omega = area / std::sqrt(2.0);
  M3 h = M3::Zero();
  h(0, 1) = h(1, 0) = 0.5 * omega;
  h(1, 2) = h(2, 1) = 0.5 * omega;
  return h;
}

/// Allan deviation straight from its definition with non-overlapping and
/// overlapping block means (no cumulative sums).
inline double allan_direct(const std::vector<double>& y, std::size_t m) {
  const std::size_t n = y.size();
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j + 2 * m <= n; ++j) {
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      a += y[j + k];
      b += y[j + m + k];
    }
    const double d = (b - a) / static_cast<double>(m);
    acc += d * d;
    ++count;
  }
  return std::sqrt(acc / (2.0 * static_cast<double>(count)));
}

/// Monte-Carlo model of one shot-noise-limited frequency estimate.
///
/// Each readout counts red photons in a front window (mean N_red (1 + k),
/// with k the fringe term) and a back window of length t_B; each window
/// also subtracts a scaled green reference drawn from Poisson(N_green)
/// and restores its mean, as a balanced detector does. The readout
/// S = (N_A / t_A) / (N_B / t_B) - 1 is taken at the steepest point of the
/// fringe and converted to a fractional frequency through the local slope.
/// t / t_cycle readouts are averaged.
struct PoissonReadoutResult {
  double std_fractional = 0.0;
  double standard_error = 0.0;
};

inline PoissonReadoutResult poisson_readout(const nvclock::PsnParams& p, std::size_t trials, std::uint64_t seed) {
  const double n_red = p.n_red();
  const double env = std::exp(-std::pow(p.tau / p.T2, p.stretch));
  const double slope = 0.5 * p.contrast * env;  // dS / d(phase) at the quadrature point
  const auto shots = static_cast<std::size_t>(std::llround(p.t / p.t_cycle));
  const double green_scale_A = n_red / p.N_green;
  const double back_mean = n_red * p.t_B / p.t_A;
  const double green_B = p.N_green * p.t_B / p.t_A;
  const double green_scale_B = back_mean / green_B;

  std::vector<double> est(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    nvclock::CounterRng rng(seed, i);
    auto eng = rng.engine();
    double sum = 0.0;
    for (std::size_t s = 0; s < shots; ++s) {
      std::poisson_distribution<long long> red_A(n_red);  // phase pi/2: fringe term zero
      std::poisson_distribution<long long> grn_A(p.N_green);
      std::poisson_distribution<long long> red_B(back_mean);
      std::poisson_distribution<long long> grn_B(green_B);
      const double nA = static_cast<double>(red_A(eng)) - green_scale_A * static_cast<double>(grn_A(eng)) + n_red;
      const double nB =
          static_cast<double>(red_B(eng)) - green_scale_B * static_cast<double>(grn_B(eng)) + back_mean;
      const double S = (nA / p.t_A) / (nB / p.t_B) - 1.0;
      sum += S;
    }
    const double S_mean = sum / static_cast<double>(shots);
    est[i] = S_mean / slope / (2.0 * M_PI * p.f * p.tau);
  }
  double mean = 0.0;
  for (double v : est) mean += v;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double v : est) var += (v - mean) * (v - mean);
  var /= static_cast<double>(trials - 1);
  const double sd = std::sqrt(var);
  return {sd, sd / std::sqrt(2.0 * static_cast<double>(trials - 1))};
}

/// Brute-force fringe frequency: least-squares amplitude over a fine
/// frequency grid with the decay envelope held at its true shape.
inline double grid_search_frequency(const std::vector<double>& tau, const std::vector<double>& y, double T2,
                                    double p, double f_lo, double f_hi, std::size_t grid) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double best_f = f_lo;
  double best = -1.0;
  for (std::size_t g = 0; g <= grid; ++g) {
    const double f = f_lo + (f_hi - f_lo) * static_cast<double>(g) / static_cast<double>(grid);
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < tau.size(); ++i) {
      const double e = std::exp(-std::pow(tau[i] / T2, p));
      const Eigen::Vector2d a(e * std::cos(2.0 * M_PI * f * tau[i]), e * std::sin(2.0 * M_PI * f * tau[i]));
      A += a * a.transpose();
      b += a * (y[i] - mean);
    }
    const double explained = b.dot(A.ldlt().solve(b));
    if (explained > best) {
      best = explained;
      best_f = f;
    }
  }
  return best_f;
}

}  // namespace oracle
