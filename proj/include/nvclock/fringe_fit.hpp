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

// Least-squares fit of a decaying fringe
//   S(tau) = S0 + S1 exp(-(tau/T2)^p) cos(2 pi f tau + phi)
// with Levenberg-Marquardt damping. The frequency starts from the peak of a
// zero-padded amplitude spectrum, and (T2, p) from a coarse grid on which
// the remaining parameters enter linearly.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nvclock/errors.hpp"
#include "nvclock/rng.hpp"
#include "nvclock/spectrum.hpp"

namespace nvclock {

struct FringeParams {
  double S0 = 0.0;
  double S1 = 0.0;
  double T2 = 1.0;   // s
  double p = 1.0;
  double f = 0.0;    // Hz
  double phi = 0.0;  // rad
};

inline double fringe_model(const FringeParams& m, double tau) {
  return m.S0 + m.S1 * std::exp(-std::pow(tau / m.T2, m.p)) * std::cos(kTwoPi * m.f * tau + m.phi);
}

inline constexpr double kMinStretch = 0.5;
inline constexpr double kMaxStretch = 3.0;

struct FringeFit {
  FringeParams params;
  FringeParams std_errors;
  FringeParams initial;
  double residual_norm = 0.0;  // sqrt of the residual sum of squares
  double rms_residual = 0.0;
  int iterations = 0;
};

struct FitOptions {
  std::optional<double> frequency_prior;  // Hz
  int max_iterations = 500;
  double tolerance = 1e-12;  // relative change of the cost
  double min_periods = 8.0;
};

namespace detail {

inline std::string dump(const FringeParams& m) {
  std::ostringstream os;
  os.precision(10);
  os << "S0=" << m.S0 << " S1=" << m.S1 << " T2=" << m.T2 << " p=" << m.p << " f=" << m.f << " phi=" << m.phi;
  return os.str();
}

inline double wrap_phase(double phi) { return std::remainder(phi, kTwoPi); }

// Internal coordinates: x = tau / scale, log T2, frequency in cycles per scale.
struct Scaled {
  std::vector<double> x;
  std::vector<double> y;
  double scale = 1.0;
};

inline double sum_sq(const Eigen::VectorXd& r) { return r.squaredNorm(); }

// theta = (S0, S1, lnT2, p, f, phi) in scaled units.
inline void residual_and_jacobian(const Scaled& d, const std::array<double, 6>& th, Eigen::VectorXd& r,
                                  Eigen::MatrixXd* jac) {
  const std::size_t n = d.x.size();
  r.resize(static_cast<Eigen::Index>(n));
  if (jac) jac->resize(static_cast<Eigen::Index>(n), 6);
  const double T2 = std::exp(th[2]);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = d.x[i] / T2;
    const double up = u > 0.0 ? std::pow(u, th[3]) : 0.0;
    const double env = std::exp(-up);
    const double arg = kTwoPi * th[4] * d.x[i] + th[5];
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    const auto k = static_cast<Eigen::Index>(i);
    r(k) = th[0] + th[1] * env * c - d.y[i];
    if (jac) {
      auto& J = *jac;
      J(k, 0) = 1.0;
      J(k, 1) = env * c;
      J(k, 2) = th[1] * env * c * up * th[3];  // d/d lnT2
      J(k, 3) = u > 0.0 ? -th[1] * env * c * up * std::log(u) : 0.0;
      J(k, 4) = -th[1] * env * s * kTwoPi * d.x[i];
      J(k, 5) = -th[1] * env * s;
    }
  }
}

// Linear least squares for (S0, a, b) at fixed (T2, p, f); returns the cost.
inline double linear_stage(const Scaled& d, double T2, double p, double f, std::array<double, 3>& coef) {
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d aty = Eigen::Vector3d::Zero();
  double yy = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const double x = d.x[i];
    const double env = std::exp(-std::pow(x / T2, p));
    const Eigen::Vector3d a(1.0, env * std::cos(kTwoPi * f * x), env * std::sin(kTwoPi * f * x));
    ata.noalias() += a * a.transpose();
    aty += a * d.y[i];
    yy += d.y[i] * d.y[i];
  }
  const Eigen::Vector3d c = ata.ldlt().solve(aty);
  coef = {c(0), c(1), c(2)};
  // |A c - y|^2 = y.y - 2 c.A'y + c.A'A c
  return std::max(yy - 2.0 * c.dot(aty) + c.dot(ata * c), 0.0);
}

}  // namespace detail

/// Frequency (Hz) of the strongest spectral line, refined by parabolic
/// interpolation on the zero-padded spectrum.
inline double spectral_peak_frequency(const FringeScan& scan) {
  const Spectrum spec = amplitude_spectrum(scan, {Window::hann, 8});
  std::size_t best = 1;
  for (std::size_t k = 2; k + 1 < spec.amplitude.size(); ++k) {
    if (spec.amplitude[k] > spec.amplitude[best]) best = k;
  }
  if (best == 0 || best + 1 >= spec.amplitude.size()) return spec.frequency[best];
  const double a = spec.amplitude[best - 1];
  const double b = spec.amplitude[best];
  const double c = spec.amplitude[best + 1];
  const double denom = a - 2.0 * b + c;
  const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
  return spec.frequency[best] + std::clamp(shift, -0.5, 0.5) * spec.bin_width();
}

inline FringeFit fit_fringe(const FringeScan& scan, const FitOptions& opt = {}) {
  scan.validate();
  const std::size_t n = scan.taus.size();
  if (n < 12) throw DomainError("fringe fit needs at least 12 samples");
  const double span = scan.taus.back() - scan.taus.front();
  if (!(span > 0.0)) throw DomainError("fringe fit needs a non-zero tau span");

  detail::Scaled d;
  d.scale = span;
  d.x.resize(n);
  d.y = scan.signals;
  for (std::size_t i = 0; i < n; ++i) d.x[i] = scan.taus[i] / span;

  // Frequency.
  double f0 = 0.0;
  if (opt.frequency_prior) {
    f0 = *opt.frequency_prior * span;
  } else {
    f0 = spectral_peak_frequency(scan) * span;
    if (f0 < opt.min_periods) {
      throw DomainError("fringe fit: fewer than " + std::to_string(opt.min_periods) +
                        " periods sampled and no frequency prior given");
    }
  }

  // Envelope grid with the linear parameters solved exactly, on at most
  // 4096 samples.
  detail::Scaled coarse;
  const std::size_t stride = (n + 4095) / 4096;
  for (std::size_t i = 0; i < n; i += stride) {
    coarse.x.push_back(d.x[i]);
    coarse.y.push_back(d.y[i]);
  }
  FringeParams init;
  double best_cost = std::numeric_limits<double>::infinity();
  std::array<double, 3> coef{};
  for (int it = 0; it <= 40; ++it) {
    const double T2 = std::pow(10.0, -2.0 + 0.1 * it);  // 0.01 .. 100 spans
    for (double p = 0.5; p <= 3.0 + 1e-9; p += 0.25) {
      const double cost = detail::linear_stage(coarse, T2, p, f0, coef);
      if (cost < best_cost) {
        best_cost = cost;
        init.S0 = coef[0];
        init.S1 = std::hypot(coef[1], coef[2]);
        init.phi = std::atan2(-coef[2], coef[1]);
        init.T2 = T2;
        init.p = std::max(p, kMinStretch + 1e-3);
      }
    }
  }
  init.f = f0;

  std::array<double, 6> th{init.S0, init.S1, std::log(init.T2), init.p, init.f, init.phi};
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  detail::residual_and_jacobian(d, th, r, &J);
  double cost = detail::sum_sq(r);
  double lambda = 1e-3;
  int iter = 0;
  bool converged = false;
  const double floor = 1e-30 * std::max(1.0, d.y.empty() ? 1.0 : std::abs(d.y[0]));

  for (; iter < opt.max_iterations; ++iter) {
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::MatrixXd A = JtJ;
      for (int k = 0; k < 6; ++k) A(k, k) += lambda * std::max(JtJ(k, k), 1e-300);
      const Eigen::VectorXd step = A.ldlt().solve(-g);
      std::array<double, 6> trial = th;
      for (int k = 0; k < 6; ++k) trial[static_cast<std::size_t>(k)] += step(k);
      trial[3] = std::clamp(trial[3], kMinStretch + 1e-6, kMaxStretch);
      Eigen::VectorXd r_new;
      detail::residual_and_jacobian(d, trial, r_new, nullptr);
      const double c_new = detail::sum_sq(r_new);
      if (std::isfinite(c_new) && c_new <= cost) {
        const double rel = (cost - c_new) / std::max(cost, floor);
        th = trial;
        r = r_new;
        cost = c_new;
        lambda = std::max(lambda * 0.3, 1e-15);
        accepted = true;
        detail::residual_and_jacobian(d, th, r, &J);
        if (rel < opt.tolerance || cost <= floor) converged = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e16) break;
    }
    if (!accepted) {
      // No downhill step exists at any damping: a stationary point.
      converged = true;
    }
    if (converged) break;
  }

  init.T2 *= span;
  init.f /= span;
  if (!converged || !std::isfinite(cost)) {
    throw ConvergenceError("fringe fit did not converge after " + std::to_string(iter) +
                           " iterations; initialization: " + detail::dump(init));
  }

  FringeFit fit;
  fit.initial = init;
  fit.iterations = iter;
  FringeParams& m = fit.params;
  m.S0 = th[0];
  m.S1 = th[1];
  m.T2 = std::exp(th[2]) * span;
  m.p = th[3];
  m.f = th[4] / span;
  m.phi = th[5];
  if (m.S1 < 0.0) {
    m.S1 = -m.S1;
    m.phi += kPi;
  }
  if (m.f < 0.0) {
    m.f = -m.f;
    m.phi = -m.phi;
  }
  m.phi = detail::wrap_phase(m.phi);
  fit.residual_norm = std::sqrt(cost);
  fit.rms_residual = std::sqrt(cost / static_cast<double>(n));

  // Standard errors from the Gauss-Newton covariance.
  if (n > 6) {
    const double sigma2 = cost / static_cast<double>(n - 6);
    const Eigen::MatrixXd cov = (J.transpose() * J).ldlt().solve(Eigen::MatrixXd::Identity(6, 6)) * sigma2;
    auto se = [&](int k) { return std::sqrt(std::max(cov(k, k), 0.0)); };
    fit.std_errors.S0 = se(0);
    fit.std_errors.S1 = se(1);
    fit.std_errors.T2 = se(2) * m.T2;
    fit.std_errors.p = se(3);
    fit.std_errors.f = se(4) / span;
    fit.std_errors.phi = se(5);
  }
  if (!(m.T2 > 0.0) || !std::isfinite(m.T2)) {
    throw ConvergenceError("fringe fit produced a non-physical T2; initialization: " + detail::dump(init));
  }
  return fit;
}

/// Samples the fringe model on a uniform grid with optional white noise of
/// standard deviation `noise` drawn from the counter-based generator.
inline FringeScan synthetic_fringes(const FringeParams& m, double tau_start, double tau_step, std::size_t n,
                                    double noise = 0.0, std::uint64_t seed = 0) {
  if (n < 2 || !(tau_step > 0.0)) throw DomainError("synthetic fringes need n >= 2 and a positive step");
  if (!(m.T2 > 0.0)) throw DomainError("synthetic fringes need T2 > 0");
  const CounterRng rng(seed, 0xF1);
  FringeScan scan;
  scan.scheme_id = "synthetic";
  scan.taus.resize(n);
  scan.signals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = tau_start + static_cast<double>(i) * tau_step;
    scan.taus[i] = tau;
    scan.signals[i] = fringe_model(m, tau) + (noise > 0.0 ? noise * rng.normal(i) : 0.0);
  }
  return scan;
}

}  // namespace nvclock
