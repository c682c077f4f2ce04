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

// Composite-clock algebra: detuning extraction from quadrature readouts,
// the temperature-insensitive combination of D and Q, temperature
// estimation, thermometer compensation and the local-oscillator correction.
//
// Fractional detunings follow the sign convention in which a local
// oscillator error x shifts both detunings by +x (dD/D = x + lambda_D dT).

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nvclock/errors.hpp"
#include "nvclock/spin_model.hpp"

namespace nvclock {

enum class Target { D, Q };

inline std::string to_string(Target t) { return t == Target::D ? "D" : "Q"; }

struct DetuningPair {
  double delta_D = 0.0;  // Hz
  double delta_Q = 0.0;  // Hz
  double timestamp = 0.0;
};

struct QuadratureReadout {
  double Sx = 0.0;
  double Sy = 0.0;
  double tau = 0.0;  // s
  Target target = Target::D;
};

/// Front/back window voltages of one optical readout. `offset` restores the
/// green photocurrent removed by balanced detection.
struct WindowedReadout {
  double V_A = 0.0;
  double V_B = 0.0;
  double t_A = 1.0;
  double t_B = 1.0;
  double offset = 0.0;
};

/// S = (V_A - V_B) / (V_B + offset). The offset cancels in the numerator.
inline double normalized_readout(const WindowedReadout& w) {
  if (!(w.t_A > 0.0 && w.t_B > 0.0)) throw DomainError("readout windows must have positive duration");
  const double denom = w.V_B + w.offset;
  if (denom == 0.0) throw DomainError("normalized readout: zero reference voltage");
  return (w.V_A - w.V_B) / denom;
}

/// Amplitude 4 S0 C exp(-(tau/T2)^p) of a cycled quadrature readout.
inline double quadrature_amplitude(double S0, double contrast, double tau, double T2, double stretch = 1.0) {
  return 4.0 * S0 * contrast * std::exp(-std::pow(tau / T2, stretch));
}

/// Ideal quadrature pair for a detuning `delta` (Hz). Only the ratio is
/// used for extraction, so the amplitude needs no calibration.
inline QuadratureReadout forward_quadratures(double delta, double tau, double amplitude, Target target = Target::D) {
  const double phase = 2.0 * std::numbers::pi * delta * tau;
  return {amplitude * std::cos(phase), amplitude * std::sin(phase), tau, target};
}

struct DetuningEstimate {
  double value = 0.0;         // Hz
  bool near_branch_cut = false;  // |phase| > pi/2, outside +-1/(4 tau)
};

inline DetuningEstimate extract_detuning(const QuadratureReadout& q) {
  if (q.Sx == 0.0 && q.Sy == 0.0) throw DomainError("detuning undefined for a (0, 0) quadrature pair");
  if (!(q.tau > 0.0)) throw DomainError("free-evolution time must be positive");
  const double phase = std::atan2(q.Sy, q.Sx);
  return {phase / (2.0 * std::numbers::pi * q.tau), std::abs(phase) > 0.5 * std::numbers::pi};
}

/// delta f = atan2(Sy, Sx) / (2 pi tau), principal branch (-pi, pi].
inline double detuning_from_quadratures(const QuadratureReadout& q) { return extract_detuning(q).value; }

struct UnwrappedDetunings {
  std::vector<double> values;  // Hz
  std::vector<bool> flagged;   // step larger than pi/2 between samples
};

/// Continuity-based unwrapping across a time series of readouts sharing
/// the same tau: each phase is moved by a multiple of 2 pi to land closest
/// to its predecessor.
inline UnwrappedDetunings unwrap_detunings(const std::vector<QuadratureReadout>& series) {
  UnwrappedDetunings out;
  out.values.reserve(series.size());
  out.flagged.reserve(series.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& q = series[i];
    if (q.Sx == 0.0 && q.Sy == 0.0) throw DomainError("detuning undefined for a (0, 0) quadrature pair");
    double phase = std::atan2(q.Sy, q.Sx);
    bool flag = false;
    if (i > 0) {
      phase += 2.0 * std::numbers::pi * std::round((prev - phase) / (2.0 * std::numbers::pi));
      flag = std::abs(phase - prev) > 0.5 * std::numbers::pi;
    }
    prev = phase;
    out.values.push_back(phase / (2.0 * std::numbers::pi * q.tau));
    out.flagged.push_back(flag);
  }
  return out;
}

/// alpha = lambda_D / (lambda_D - lambda_Q).
inline double alpha_from_lambdas(double lambda_D, double lambda_Q) {
  if (lambda_D == lambda_Q) {
    throw DomainError(
        "lambda_D == lambda_Q: D and Q share one fractional temperature dependence, so alpha "
        "would approach infinity and temperature cannot be decoupled from the oscillator");
  }
  return lambda_D / (lambda_D - lambda_Q);
}

inline double alpha_from_lambdas(const SpinConstants& c) { return alpha_from_lambdas(c.lambda_D, c.lambda_Q); }

/// 1 / (1/lambda_Q - 1/lambda_D) = lambda_D lambda_Q / (lambda_D - lambda_Q), in 1/K.
inline double composite_normalization(const SpinConstants& c) {
  return 1.0 / (1.0 / c.lambda_Q - 1.0 / c.lambda_D);
}

/// alpha dQ/Q + (1 - alpha) dD/D for an arbitrary weight. alpha = 0 is a
/// D-only clock and alpha = 1 a Q-only clock.
inline double weighted_combination(double frac_dQ, double frac_dD, double alpha) {
  return frac_dQ * alpha + frac_dD * (1.0 - alpha);
}

/// First-order temperature-insensitive fractional LO correction.
inline double composite_correction(double frac_dQ, double frac_dD, const SpinConstants& c) {
  return weighted_combination(frac_dQ, frac_dD, alpha_from_lambdas(c));
}

/// Same quantity written as a difference of temperature-unit readings.
inline double composite_correction_temperature_form(double frac_dQ, double frac_dD, const SpinConstants& c) {
  return composite_normalization(c) * (frac_dQ / c.lambda_Q - frac_dD / c.lambda_D);
}

/// Coefficient k of the second-order term k (dD/D - dQ/Q)^2:
///   k = (lambda_D2 lambda_Q - lambda_D lambda_Q2) / (2 (lambda_D - lambda_Q)^3).
inline double second_order_coefficient(const SpinConstants& c) {
  const double diff = c.lambda_D - c.lambda_Q;
  return 0.5 * (c.lambda_D2 * c.lambda_Q - c.lambda_D * c.lambda_Q2) / (diff * diff * diff);
}

/// Correction that cancels both first- and second-order temperature terms.
inline double composite_correction_2nd(double frac_dQ, double frac_dD, const SpinConstants& c) {
  const double d = frac_dD - frac_dQ;
  return composite_correction(frac_dQ, frac_dD, c) + second_order_coefficient(c) * d * d;
}

/// First-order temperature change (K), insensitive to common LO shifts.
inline double temperature_estimate(double frac_dD, double frac_dQ, const SpinConstants& c) {
  if (c.lambda_D == c.lambda_Q) alpha_from_lambdas(c);  // throws
  return (frac_dD - frac_dQ) / (c.lambda_D - c.lambda_Q);
}

/// dD_comp = dD - lambda_D D dT_ext, with D the nominal splitting.
inline double compensate_with_thermometer(double delta_D, double delta_T_ext, const SpinConstants& c) {
  return delta_D - c.lambda_D * c.D0 * delta_T_ext;
}

/// Corrective shift (Hz) for a local oscillator of frequency psi from one
/// quadrature pair per target:
///   dpsi = psi (alpha phi_Q / (2 pi Q tau_Q) + (1 - alpha) phi_D / (2 pi D tau_D)).
inline double feedback_shift(const QuadratureReadout& d, const QuadratureReadout& q, const SpinConstants& c,
                             double psi) {
  const double alpha = alpha_from_lambdas(c);
  const double delta_D = detuning_from_quadratures(d);
  const double delta_Q = detuning_from_quadratures(q);
  return psi * (alpha * delta_Q / c.Q0 + (1.0 - alpha) * delta_D / c.D0);
}

/// Optimum free-evolution time for tau exp(-(tau/T2)^p): T2 p^(-1/p).
inline double optimal_tau(double T2, double stretch = 1.0) { return T2 * std::pow(1.0 / stretch, 1.0 / stretch); }

// ---------------------------------------------------------------------------
// Instability budget

inline constexpr std::array<Target, 2> kTargets{Target::D, Target::Q};

/// One budget row as supplied. Sensitivities are fractional shifts per native
/// unit of the parameter (for example 25e-9 per mK).
struct BudgetInput {
  std::string parameter;
  std::string unit;
  std::optional<double> instability;
  std::optional<double> sensitivity_D;
  std::optional<double> sensitivity_Q;
  std::optional<double> sensitivity_psi;
  bool psi_upper_bound = false;  // sensitivity_psi is an upper bound only
};

struct BudgetEntry {
  std::string parameter;
  std::string unit;
  double instability = 0.0;
  double sensitivity_D = 0.0;
  double sensitivity_Q = 0.0;
  double sensitivity_psi = 0.0;
  double contribution_D = 0.0;
  double contribution_Q = 0.0;
  double contribution_psi = 0.0;
  bool psi_upper_bound = false;
};

struct BudgetTable {
  std::vector<BudgetEntry> entries;
  // Root-sum-square totals, treating the rows as independent.
  double total_D = 0.0;
  double total_Q = 0.0;
  double total_psi = 0.0;
};

inline BudgetTable budget_table(const std::vector<BudgetInput>& inputs) {
  BudgetTable table;
  auto need = [](const std::optional<double>& v, const std::string& row, const char* what) {
    if (!v) throw ConfigError("budget row '" + row + "' is missing " + what);
    if (!std::isfinite(*v)) throw ConfigError("budget row '" + row + "' has non-finite " + what);
    return *v;
  };
  for (const auto& in : inputs) {
    if (in.parameter.empty()) throw ConfigError("budget row without a parameter name");
    BudgetEntry e;
    e.parameter = in.parameter;
    e.unit = in.unit;
    e.instability = need(in.instability, in.parameter, "instability");
    e.sensitivity_D = need(in.sensitivity_D, in.parameter, "sensitivity for D");
    e.sensitivity_Q = need(in.sensitivity_Q, in.parameter, "sensitivity for Q");
    e.sensitivity_psi = need(in.sensitivity_psi, in.parameter, "sensitivity for psi");
    e.psi_upper_bound = in.psi_upper_bound;
    e.contribution_D = std::abs(e.sensitivity_D * e.instability);
    e.contribution_Q = std::abs(e.sensitivity_Q * e.instability);
    e.contribution_psi = std::abs(e.sensitivity_psi * e.instability);
    table.total_D = std::hypot(table.total_D, e.contribution_D);
    table.total_Q = std::hypot(table.total_Q, e.contribution_Q);
    table.total_psi = std::hypot(table.total_psi, e.contribution_psi);
    table.entries.push_back(std::move(e));
  }
  if (table.entries.empty()) throw ConfigError("budget has no rows");
  return table;
}

/// Measured instabilities (200 s) and sensitivities of the reference setup.
inline std::vector<BudgetInput> default_budget_inputs() {
  return {
      {"temperature", "mK", 10.0, 25e-9, 7.2e-9, 0.5e-9, true},
      {"longitudinal_field", "mG", 0.05, 1.6e-9, 0.6e-9, 1.2e-9, false},
      {"transverse_field", "mG", 0.5, 0.38e-9, 0.64e-9, 0.72e-9, false},
      {"rf_power", "dB", 0.001, 0.4e-6, 1.4e-6, 2.0e-6, false},
      {"laser_power", "mW", 0.02, 110e-9, 22e-9, 22e-9, false},
  };
}

/// Temperature sensitivities (fractional per mK) predicted by the constants.
/// The psi entry is the first-order residual, zero by construction.
inline BudgetInput model_temperature_sensitivities(const SpinConstants& c, double instability_mK = 10.0) {
  const double alpha = alpha_from_lambdas(c);
  const double psi = alpha * c.lambda_Q + (1.0 - alpha) * c.lambda_D;
  return {"temperature", "mK", instability_mK, std::abs(c.lambda_D) * 1e-3, std::abs(c.lambda_Q) * 1e-3,
          std::abs(psi) * 1e-3, false};
}

/// Budget row for a reduced-lambda (for example cryogenic) operating point.
inline BudgetInput scaled_temperature_row(const BudgetInput& row, double lambda_D_scale) {
  BudgetInput out = row;
  if (out.sensitivity_D) *out.sensitivity_D *= std::abs(lambda_D_scale);
  return out;
}

}  // namespace nvclock
