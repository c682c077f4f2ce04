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

// Interleaved D/Q clock simulation, sensitivity sweeps and the comparison
// of temperature-mitigation strategies.
//
// Each cycle measures D then Q at the same instant (no intra-cycle
// temperature change). The true detunings are
//   dD = D(T) - D0 + D0 x,   dQ = Q(T) - Q0 + Q0 x,
// with x the fractional offset of the local oscillator. Quadratures are
// forward-modelled with Gaussian readout noise sized to the shot-noise
// formula and converted back to detunings by the arctangent.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nvclock/clock_composer.hpp"
#include "nvclock/errors.hpp"
#include "nvclock/measurement.hpp"
#include "nvclock/noise.hpp"
#include "nvclock/parallel.hpp"
#include "nvclock/psn.hpp"
#include "nvclock/rng.hpp"
#include "nvclock/spin_model.hpp"

namespace nvclock {

enum class FeedbackMode { open_loop, composite, D_only, Q_only, thermometer_compensated };

inline std::string to_string(FeedbackMode m) {
  switch (m) {
    case FeedbackMode::open_loop: return "open_loop";
    case FeedbackMode::composite: return "composite";
    case FeedbackMode::D_only: return "D_only";
    case FeedbackMode::Q_only: return "Q_only";
    case FeedbackMode::thermometer_compensated: return "thermometer_compensated";
  }
  return "unknown";
}

inline FeedbackMode feedback_mode_from_string(const std::string& s) {
  for (auto m : {FeedbackMode::open_loop, FeedbackMode::composite, FeedbackMode::D_only, FeedbackMode::Q_only,
                 FeedbackMode::thermometer_compensated}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown feedback mode '" + s + "'");
}

/// Shot-noise parameters of one target; `psn.tau` doubles as the
/// free-evolution time of its measurement.
struct TargetSettings {
  PsnParams psn;
  double S0 = 1.0;  // mean normalized readout
};

/// Defaults: tau at the sensitivity optimum T2 p^(-1/p) of each target.
inline TargetSettings default_target(Target t) {
  TargetSettings s;
  if (t == Target::D) {
    s.psn.f = 2870.3e6;
    s.psn.T2 = 1.68e-6;
  } else {
    s.psn.f = 4945.9e3;
    s.psn.T2 = 0.881e-3;
  }
  s.psn.tau = optimal_tau(s.psn.T2, s.psn.stretch);
  return s;
}

struct ScenarioConfig {
  SpinConstants constants;
  TargetSettings D = default_target(Target::D);
  TargetSettings Q = default_target(Target::Q);
  double t_cycle = 1.0;        // s
  std::size_t n_cycles = 200000;
  double T_base = 297.0;       // K, operating point of the temperature noise
  FeedbackMode mode = FeedbackMode::composite;
  bool second_order = false;
  bool psn_enabled = true;
  double loop_gain = 0.0;      // 0: record corrections without steering the oscillator
  NoiseKind temperature_kind = NoiseKind::random_walk;
  double temperature_magnitude = 1e-3;  // K
  NoiseKind lo_kind = NoiseKind::white;
  double lo_magnitude = 0.0;            // fractional
  NoiseKind thermometer_offset_kind = NoiseKind::linear_drift;
  double thermometer_offset_magnitude = 0.0;  // K (per s for linear drift)
  double thermometer_noise = 0.0;             // K, white
  double noise_period = 86400.0;              // s, sinusoidal kinds
  std::uint64_t seed = 1;

  void validate() const {
    constants.validate();
    D.psn.validate();
    Q.psn.validate();
    if (!(t_cycle > 0.0)) throw ConfigError("t_cycle must be positive");
    if (n_cycles < 100) throw ConfigError("duration must cover at least 100 cycles");
    detail::check_temperature(T_base);
    if (!(temperature_magnitude >= 0.0 && lo_magnitude >= 0.0 && thermometer_offset_magnitude >= 0.0 &&
          thermometer_noise >= 0.0)) {
      throw ConfigError("noise magnitudes must be non-negative");
    }
    if (!(loop_gain >= 0.0 && loop_gain <= 1.0)) throw ConfigError("loop_gain must lie in [0, 1]");
  }

  [[nodiscard]] NoiseSpec noise(NoiseKind kind, double magnitude) const {
    return {kind, magnitude, seed, t_cycle, noise_period, 0.0};
  }
};

struct ClockTimeSeries {
  std::vector<double> timestamps;
  std::vector<double> frac_D;
  std::vector<double> frac_Q;
  std::vector<double> frac_psi;
  std::vector<double> true_temperature;
  std::vector<double> true_LO_offset;
  std::vector<bool> flagged;  // a detuning fell outside +-1/(4 tau)

  [[nodiscard]] std::size_t size() const { return timestamps.size(); }
  [[nodiscard]] std::size_t flagged_count() const {
    std::size_t k = 0;
    for (bool f : flagged) k += f ? 1 : 0;
    return k;
  }
  /// Error of the corrected oscillator estimate, frac_psi - true offset.
  [[nodiscard]] std::vector<double> clock_error() const {
    std::vector<double> e(size());
    for (std::size_t i = 0; i < size(); ++i) e[i] = frac_psi[i] - true_LO_offset[i];
    return e;
  }
};

// Stream identifiers keep every noise source independent of the others and
// of the order in which they are drawn.
inline constexpr std::uint64_t kStreamTemperature = 1;
inline constexpr std::uint64_t kStreamLo = 2;
inline constexpr std::uint64_t kStreamThermometerOffset = 3;
inline constexpr std::uint64_t kStreamThermometerNoise = 4;
inline constexpr std::uint64_t kStreamPsnD = 5;
inline constexpr std::uint64_t kStreamPsnQ = 6;

/// Shot-noise-limited fractional uncertainty of one scenario cycle.
inline double psn_per_cycle(const TargetSettings& t, double t_cycle) {
  PsnParams p = t.psn;
  p.t = t_cycle;
  return psn_fractional(p);
}

inline double quadrature_amplitude(const TargetSettings& t) {
  return quadrature_amplitude(t.S0, t.psn.contrast, t.psn.tau, t.psn.T2, t.psn.stretch);
}

/// Weight of Q in the correction for each mode.
inline double mode_alpha(FeedbackMode mode, const SpinConstants& c) {
  switch (mode) {
    case FeedbackMode::composite: return alpha_from_lambdas(c);
    case FeedbackMode::Q_only: return 1.0;
    default: return 0.0;
  }
}

inline ClockTimeSeries run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const SpinConstants& c = cfg.constants;
  const std::size_t n = cfg.n_cycles;

  const auto temperature =
      generate_noise(cfg.noise(cfg.temperature_kind, cfg.temperature_magnitude), n, kStreamTemperature);
  const auto lo_free = generate_noise(cfg.noise(cfg.lo_kind, cfg.lo_magnitude), n, kStreamLo);
  const auto thermo_offset = generate_noise(
      cfg.noise(cfg.thermometer_offset_kind, cfg.thermometer_offset_magnitude), n, kStreamThermometerOffset);
  const auto thermo_noise =
      generate_noise(cfg.noise(NoiseKind::white, cfg.thermometer_noise), n, kStreamThermometerNoise);

  const CounterRng rng_D(cfg.seed, kStreamPsnD);
  const CounterRng rng_Q(cfg.seed, kStreamPsnQ);
  const double amp_D = quadrature_amplitude(cfg.D);
  const double amp_Q = quadrature_amplitude(cfg.Q);
  const double tau_D = cfg.D.psn.tau;
  const double tau_Q = cfg.Q.psn.tau;
  const double sigma_D = cfg.psn_enabled ? amp_D * kTwoPi * tau_D * c.D0 * psn_per_cycle(cfg.D, cfg.t_cycle) : 0.0;
  const double sigma_Q =
      cfg.psn_enabled ? amp_Q * kTwoPi * tau_Q * std::abs(c.Q0) * psn_per_cycle(cfg.Q, cfg.t_cycle) : 0.0;

  ClockTimeSeries out;
  out.timestamps.resize(n);
  out.frac_D.resize(n);
  out.frac_Q.resize(n);
  out.frac_psi.resize(n);
  out.true_temperature.resize(n);
  out.true_LO_offset.resize(n);
  out.flagged.resize(n);

  double steer = 0.0;  // accumulated correction applied to the oscillator
  for (std::size_t i = 0; i < n; ++i) {
    const double T = cfg.T_base + temperature[i];
    const double x = lo_free[i] - steer;
    const auto [D, Q] = temperature_model(c, T);
    const double dD = D - c.D0 + c.D0 * x;
    const double dQ = Q - c.Q0 + c.Q0 * x;

    const double phase_D = kTwoPi * dD * tau_D;
    const double phase_Q = kTwoPi * dQ * tau_Q;
    const QuadratureReadout qD{amp_D * std::cos(phase_D) + sigma_D * rng_D.normal(2 * i),
                               amp_D * std::sin(phase_D) + sigma_D * rng_D.normal(2 * i + 1), tau_D, Target::D};
    const QuadratureReadout qQ{amp_Q * std::cos(phase_Q) + sigma_Q * rng_Q.normal(2 * i),
                               amp_Q * std::sin(phase_Q) + sigma_Q * rng_Q.normal(2 * i + 1), tau_Q, Target::Q};
    const DetuningEstimate eD = extract_detuning(qD);
    const DetuningEstimate eQ = extract_detuning(qQ);
    const bool outside = std::abs(phase_D) > 0.5 * kPi || std::abs(phase_Q) > 0.5 * kPi;

    const double fD = eD.value / c.D0;
    const double fQ = eQ.value / c.Q0;
    double psi = 0.0;
    switch (cfg.mode) {
      case FeedbackMode::open_loop:
        break;
      case FeedbackMode::composite:
        psi = cfg.second_order ? composite_correction_2nd(fQ, fD, c) : composite_correction(fQ, fD, c);
        break;
      case FeedbackMode::D_only:
      case FeedbackMode::Q_only:
        psi = weighted_combination(fQ, fD, mode_alpha(cfg.mode, c));
        break;
      case FeedbackMode::thermometer_compensated: {
        const double T_ext = T + thermo_offset[i] + thermo_noise[i];
        psi = compensate_with_thermometer(eD.value, T_ext - c.T0, c) / c.D0;
        break;
      }
    }

    out.timestamps[i] = cfg.t_cycle * static_cast<double>(i);
    out.frac_D[i] = fD;
    out.frac_Q[i] = fQ;
    out.frac_psi[i] = psi;
    out.true_temperature[i] = T;
    out.true_LO_offset[i] = x;
    out.flagged[i] = outside || eD.near_branch_cut || eQ.near_branch_cut;
    steer += cfg.loop_gain * psi;
  }
  return out;
}

struct TemperatureUnits {
  std::vector<double> from_D;      // frac_D / lambda_D, K
  std::vector<double> from_Q;      // frac_Q / lambda_Q, K
  std::vector<double> difference;  // from_Q - from_D = (1/lambda_Q - 1/lambda_D) frac_psi
};

inline TemperatureUnits temperature_in_units(const ClockTimeSeries& s, const SpinConstants& c) {
  TemperatureUnits t;
  t.from_D.resize(s.size());
  t.from_Q.resize(s.size());
  t.difference.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    t.from_D[i] = s.frac_D[i] / c.lambda_D;
    t.from_Q[i] = s.frac_Q[i] / c.lambda_Q;
    t.difference[i] = t.from_Q[i] - t.from_D[i];
  }
  return t;
}

// ---------------------------------------------------------------------------
// Sensitivity sweeps through the exact spin model and the pulse engine

enum class SweepParameter { temperature, Bz, tau_D, tau_Q, prep_fidelity, area_scale };

inline std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::temperature: return "temperature";
    case SweepParameter::Bz: return "Bz";
    case SweepParameter::tau_D: return "tau_D";
    case SweepParameter::tau_Q: return "tau_Q";
    case SweepParameter::prep_fidelity: return "prep_fidelity";
    case SweepParameter::area_scale: return "area_scale";
  }
  return "unknown";
}

inline SweepParameter sweep_parameter_from_string(const std::string& s) {
  for (auto p : {SweepParameter::temperature, SweepParameter::Bz, SweepParameter::tau_D, SweepParameter::tau_Q,
                 SweepParameter::prep_fidelity, SweepParameter::area_scale}) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError("unknown sweep parameter '" + s + "'");
}

/// Operating point of a sweep. The oscillator tones stay locked to the
/// half-sums at this point while one parameter moves.
struct SweepBase {
  SpinConstants constants;
  double Bz = 475.0;         // G
  double T = 297.0;          // K
  double tau_D = 1.68e-6;    // s
  double tau_Q = 0.881e-3;   // s
  MeasurementSettings measurement;
};

struct SweepRow {
  double value = 0.0;
  double frac_D = 0.0;
  double frac_Q = 0.0;
  double frac_psi = 0.0;
  bool flagged = false;
};

struct SlopeReport {
  double slope = 0.0;      // central finite difference at the grid centre
  double linear = 0.0;     // least-squares quadratic fit: c1
  double quadratic = 0.0;  // c2
  bool quadratic_dominant = false;  // linear term below threshold over the grid
  bool no_signal = false;
  bool non_monotonic = false;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::temperature;
  std::vector<SweepRow> rows;
  SlopeReport D;
  SlopeReport Q;
  SlopeReport psi;
};

namespace detail {

inline SlopeReport slopes(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeReport r;
  const std::size_t n = x.size();
  const std::size_t mid = n / 2;
  r.slope = (y[mid + 1] - y[mid - 1]) / (x[mid + 1] - x[mid - 1]);
  // Quadratic fit about the centre.
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  double span = 0.0;
  double ymax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = x[i] - x[mid];
    A(static_cast<Eigen::Index>(i), 0) = 1.0;
    A(static_cast<Eigen::Index>(i), 1) = u;
    A(static_cast<Eigen::Index>(i), 2) = u * u;
    b(static_cast<Eigen::Index>(i)) = y[i];
    span = std::max(span, std::abs(u));
    ymax = std::max(ymax, std::abs(y[i]));
  }
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
  r.linear = c(1);
  r.quadratic = c(2);
  r.no_signal = ymax < 1e-15;
  r.quadratic_dominant = !r.no_signal && std::abs(c(1)) * span < std::abs(c(2)) * span * span;
  int sign = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = y[i] - y[i - 1];
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s != 0 && sign != 0 && s != sign) r.non_monotonic = true;
    if (s != 0) sign = s;
  }
  return r;
}

}  // namespace detail

inline SweepResult sensitivity_sweep(const SweepBase& base, SweepParameter parameter,
                                     const std::vector<double>& grid, unsigned threads = 1) {
  if (grid.size() < 3 || grid.size() % 2 == 0) throw ConfigError("sweep grid needs an odd number (>= 3) of points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly increasing");
  }
  base.constants.validate();
  base.measurement.validate();
  const SpinConstants& c = base.constants;
  const FrequencyQuartet ref = transition_frequencies(c, base.Bz, base.T);
  const double ref_d = ref.d_half_sum();
  const double ref_q = ref.q_half_sum();
  const double ref_d_diff = 0.5 * (ref.f_plus - ref.f_minus);
  const double ref_q_diff = 0.5 * (ref.f1 - ref.f2);
  const double alpha = alpha_from_lambdas(c);

  SweepResult result;
  result.parameter = parameter;
  result.rows.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    double Bz = base.Bz;
    double T = base.T;
    double tau_D = base.tau_D;
    double tau_Q = base.tau_Q;
    MeasurementSettings m = base.measurement;
    const double v = grid[i];
    switch (parameter) {
      case SweepParameter::temperature: T = v; break;
      case SweepParameter::Bz: Bz = v; break;
      case SweepParameter::tau_D: tau_D = v; break;
      case SweepParameter::tau_Q: tau_Q = v; break;
      case SweepParameter::prep_fidelity: m.readout.prep_fidelity = v; break;
      case SweepParameter::area_scale: m.area_scale = v; break;
    }
    if (!(tau_D > 0.0 && tau_Q > 0.0)) throw ConfigError("free-evolution times must be positive");
    const FrequencyQuartet q = transition_frequencies(c, Bz, T);
    const double dD = q.d_half_sum() - ref_d;
    const double dQ = q.q_half_sum() - ref_q;
    const QuadratureReadout rD = simulate_quadratures(
        m, tau_D, split_detuning(dD, 0.5 * (q.f_plus - q.f_minus) - ref_d_diff), Target::D);
    const QuadratureReadout rQ =
        simulate_quadratures(m, tau_Q, split_detuning(dQ, 0.5 * (q.f1 - q.f2) - ref_q_diff), Target::Q);
    const DetuningEstimate eD = extract_detuning(rD);
    const DetuningEstimate eQ = extract_detuning(rQ);
    SweepRow& row = result.rows[i];
    row.value = v;
    row.frac_D = eD.value / ref_d;
    row.frac_Q = eQ.value / ref_q;
    row.frac_psi = weighted_combination(row.frac_Q, row.frac_D, alpha);
    row.flagged = eD.near_branch_cut || eQ.near_branch_cut ||
                  std::abs(dD) * tau_D > 0.25 || std::abs(dQ) * tau_Q > 0.25;
  });

  std::vector<double> x, yD, yQ, yP;
  for (const auto& r : result.rows) {
    x.push_back(r.value);
    yD.push_back(r.frac_D);
    yQ.push_back(r.frac_Q);
    yP.push_back(r.frac_psi);
  }
  result.D = detail::slopes(x, yD);
  result.Q = detail::slopes(x, yQ);
  result.psi = detail::slopes(x, yP);
  return result;
}

// ---------------------------------------------------------------------------
// Strategy comparison

struct StrategyRun {
  std::string name;
  ScenarioConfig config;
  ClockTimeSeries series;
  AllanCurve allan;  // of frac_psi
};

struct StrategyOptions {
  double cryogenic_lambda_scale = 1.0 / 15.0;
  double stabilized_noise_scale = 0.01;
  int per_decade = 10;
};

/// Runs the uncompensated (D only), thermometer-compensated, cryogenic,
/// temperature-stabilized and composite variants on a shared seed. The
/// variants run concurrently; each is sequential internally.
inline std::vector<StrategyRun> strategy_comparison(const ScenarioConfig& cfg, const StrategyOptions& opt = {},
                                                    unsigned threads = 1) {
  cfg.validate();
  std::vector<StrategyRun> runs(5);
  runs[0].name = "uncompensated";
  runs[0].config = cfg;
  runs[0].config.mode = FeedbackMode::D_only;
  runs[1].name = "thermometer_compensated";
  runs[1].config = cfg;
  runs[1].config.mode = FeedbackMode::thermometer_compensated;
  runs[2].name = "cryogenic";
  runs[2].config = cfg;
  runs[2].config.mode = FeedbackMode::D_only;
  runs[2].config.constants.lambda_D *= opt.cryogenic_lambda_scale;
  runs[3].name = "stabilized";
  runs[3].config = cfg;
  runs[3].config.mode = FeedbackMode::D_only;
  runs[3].config.temperature_magnitude *= opt.stabilized_noise_scale;
  runs[4].name = "composite";
  runs[4].config = cfg;
  runs[4].config.mode = FeedbackMode::composite;

  parallel_for(runs.size(), threads, [&](std::size_t i) {
    runs[i].series = run_scenario(runs[i].config);
    runs[i].allan = allan_deviation(runs[i].series.frac_psi, cfg.t_cycle,
                                    log_spaced_taus(cfg.t_cycle, cfg.n_cycles, opt.per_decade));
  });
  return runs;
}

}  // namespace nvclock
