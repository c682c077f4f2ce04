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

// Synthetic noise processes and the overlapping Allan deviation.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "nvclock/errors.hpp"
#include "nvclock/rng.hpp"

namespace nvclock {

enum class NoiseKind { white, random_walk, linear_drift, sinusoidal };

inline std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::white: return "white";
    case NoiseKind::random_walk: return "random_walk";
    case NoiseKind::linear_drift: return "linear_drift";
    case NoiseKind::sinusoidal: return "sinusoidal";
  }
  return "?";
}

inline NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "white") return NoiseKind::white;
  if (s == "random_walk") return NoiseKind::random_walk;
  if (s == "linear_drift") return NoiseKind::linear_drift;
  if (s == "sinusoidal") return NoiseKind::sinusoidal;
  throw ConfigError("unknown noise kind '" + s + "'");
}

/// `magnitude` is the per-sample standard deviation for white and
/// random_walk, the rate per second for linear_drift, and the amplitude
/// for sinusoidal.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::white;
  double magnitude = 0.0;
  std::uint64_t seed = 0;
  double dt = 1.0;
  double period = 86400.0;  // s, sinusoidal only
  double phase = 0.0;       // rad, sinusoidal only

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("noise dt must be positive");
    if (!(magnitude >= 0.0)) throw ConfigError("noise magnitude must be non-negative");
    if (kind == NoiseKind::sinusoidal && !(period > 0.0)) throw ConfigError("noise period must be positive");
  }
};

inline std::vector<double> generate_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t stream = 0) {
  spec.validate();
  std::vector<double> out(n, 0.0);
  if (spec.magnitude == 0.0) return out;
  const CounterRng rng(spec.seed, stream);
  switch (spec.kind) {
    case NoiseKind::white:
      for (std::size_t i = 0; i < n; ++i) out[i] = spec.magnitude * rng.normal(i);
      break;
    case NoiseKind::random_walk: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += spec.magnitude * rng.normal(i);
        out[i] = acc;
      }
      break;
    }
    case NoiseKind::linear_drift:
      for (std::size_t i = 0; i < n; ++i) out[i] = spec.magnitude * spec.dt * static_cast<double>(i);
      break;
    case NoiseKind::sinusoidal:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = spec.dt * static_cast<double>(i);
        out[i] = spec.magnitude * std::sin(2.0 * std::numbers::pi * t / spec.period + spec.phase);
      }
      break;
  }
  return out;
}

struct AllanCurve {
  std::vector<double> taus;
  std::vector<double> sigmas;
  std::vector<std::size_t> n_samples;  // overlapping second differences per tau
  std::vector<std::string> warnings;
};

/// Overlapping Allan deviation of fractional-frequency samples y_i taken
/// every dt seconds:
///   sigma^2(m dt) = sum_j (x_{j+2m} - 2 x_{j+m} + x_j)^2 / (2 m^2 (N - 2m + 1)),
/// with x_k = sum_{i<k} y_i. Each tau is rounded to a whole number of
/// samples; taus needing more than N / 3 samples are omitted with a warning.
inline AllanCurve allan_deviation(const std::vector<double>& y, double dt, const std::vector<double>& taus) {
  if (!(dt > 0.0)) throw DomainError("allan_deviation: dt must be positive");
  const std::size_t n = y.size();
  AllanCurve curve;
  if (n == 0) {
    curve.warnings.push_back("empty series");
    return curve;
  }

  long double mean = 0.0L;
  for (double v : y) mean += v;
  mean /= static_cast<long double>(n);
  std::vector<long double> x(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) x[i + 1] = x[i] + (static_cast<long double>(y[i]) - mean);

  std::size_t last_m = 0;
  for (double tau : taus) {
    const auto m = static_cast<std::size_t>(std::llround(tau / dt));
    if (m < 1) {
      curve.warnings.push_back("tau " + std::to_string(tau) + " s shorter than the sample interval; omitted");
      continue;
    }
    if (3 * m > n) {
      curve.warnings.push_back("tau " + std::to_string(tau) + " s too long for the series; omitted");
      continue;
    }
    if (m <= last_m) continue;
    last_m = m;
    const std::size_t terms = n - 2 * m + 1;
    long double acc = 0.0L;
    for (std::size_t j = 0; j < terms; ++j) {
      const long double d = x[j + 2 * m] - 2.0L * x[j + m] + x[j];
      acc += d * d;
    }
    const long double mm = static_cast<long double>(m);
    const long double var = acc / (2.0L * mm * mm * static_cast<long double>(terms));
    curve.taus.push_back(static_cast<double>(m) * dt);
    curve.sigmas.push_back(static_cast<double>(std::sqrt(var)));
    curve.n_samples.push_back(terms);
  }
  return curve;
}

/// Roughly log-spaced taus (whole multiples of dt) up to n dt / 3.
inline std::vector<double> log_spaced_taus(double dt, std::size_t n, int per_decade = 10) {
  std::vector<double> out;
  const double max_m = static_cast<double>(n) / 3.0;
  std::size_t last = 0;
  for (int k = 0;; ++k) {
    const double m = std::pow(10.0, static_cast<double>(k) / per_decade);
    if (m > max_m) break;
    const auto mi = static_cast<std::size_t>(std::llround(m));
    if (mi != last) out.push_back(static_cast<double>(mi) * dt);
    last = mi;
  }
  return out;
}

/// sigma at the curve point closest (in log tau) to `tau`.
inline double allan_at(const AllanCurve& curve, double tau) {
  if (curve.taus.empty()) throw DomainError("empty Allan curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.taus.size(); ++i) {
    if (std::abs(std::log(curve.taus[i] / tau)) < std::abs(std::log(curve.taus[best] / tau))) best = i;
  }
  return curve.sigmas[best];
}

}  // namespace nvclock
