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

// Rotating-frame dynamics of the two-tone pi/2 - 2pi - pi/2 sequence on a
// three-level system.
//
// Basis ordering: (|+1>, |0>, |-1>). The pump tone couples |+1> <-> |0>
// and the Stokes tone couples |0> <-> |-1>. For the Q measurement the same
// algebra applies to (|0,+1>, |0,0>, |0,-1>) with f1 as pump and f2 as
// Stokes. Pulses are resonant and instantaneous relative to the free
// evolution; detunings and pulse phases only enter the free-evolution
// operators between pulses.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "nvclock/errors.hpp"

namespace nvclock {

using Complex = std::complex<double>;
using Propagator3 = Eigen::Matrix3cd;
using State3 = Eigen::Vector3cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr int kPlusLevel = 0;
inline constexpr int kZeroLevel = 1;
inline constexpr int kMinusLevel = 2;

/// Closed-form propagator of an overlapping rectangular two-tone pulse of
/// equal Rabi frequencies with double-quantum area `area` (sqrt(2) Omega0 T).
inline Propagator3 propagator_pulse(double area) {
  const double c = std::cos(0.5 * area);
  const Complex s(0.0, -std::sin(0.5 * area) / std::numbers::sqrt2);
  Propagator3 u;
  u << 0.5 * (c + 1.0), s, 0.5 * (c - 1.0),
       s, c, s,
       0.5 * (c - 1.0), s, 0.5 * (c + 1.0);
  return u;
}

/// diag(1, exp(-i phase_p), exp(-i (phase_p - phase_s))).
inline Propagator3 free_evolution(double phase_p, double phase_s) {
  Propagator3 u = Propagator3::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = std::polar(1.0, -phase_p);
  u(2, 2) = std::polar(1.0, -(phase_p - phase_s));
  return u;
}

/// General rectangular two-tone pulse by matrix exponential. Rabi
/// frequencies and detunings are angular (rad/s); duration in seconds.
/// Reduces to `propagator_pulse(sqrt(2) * rabi * duration)` for equal
/// resonant tones.
inline Propagator3 propagator_pulse_general(double rabi_p, double rabi_s, double single_detuning,
                                            double two_photon_detuning, double duration) {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 1) = h(1, 0) = 0.5 * rabi_p;
  h(1, 2) = h(2, 1) = 0.5 * rabi_s;
  h(1, 1) = single_detuning;
  h(2, 2) = two_photon_detuning;
  const Eigen::Matrix3cd generator = Complex(0.0, -duration) * h;
  return generator.exp();
}

/// Max-norm of U U^dagger - I.
inline double unitarity_defect(const Propagator3& u) {
  return (u * u.adjoint() - Propagator3::Identity()).cwiseAbs().maxCoeff();
}

/// Pulse areas of the three pulses (radians).
struct PulseAreas {
  double first = kPi / 2.0;
  double echo = 2.0 * kPi;
  double last = kPi / 2.0;

  [[nodiscard]] PulseAreas scaled(double s) const { return {s * first, s * echo, s * last}; }
  /// Scale only the pi/2 pulses, keeping the echo exact.
  [[nodiscard]] PulseAreas scaled_keep_echo(double s) const { return {s * first, echo, s * last}; }
};

/// Phases of pulses 2 and 3; pulse 1 is the phase reference.
struct SequencePhases {
  double p2 = 0.0;
  double s2 = 0.0;
  double p3 = 0.0;
  double s3 = 0.0;
};

/// Free-evolution phases accumulated in each half of the sequence.
struct FreeEvolutionPhases {
  double p12 = 0.0;
  double s12 = 0.0;
  double p23 = 0.0;
  double s23 = 0.0;
};

/// Pump/Stokes detunings in Hz. With the frame translated together with
/// the pulse phases, these are the transition frequencies themselves.
struct ToneDetunings {
  double pump = 0.0;
  double stokes = 0.0;
};

inline FreeEvolutionPhases evolution_phases(double tau, ToneDetunings det, const SequencePhases& ph) {
  const double half_p = kPi * det.pump * tau;    // omega_1 tau / 2
  const double half_s = kPi * det.stokes * tau;  // omega_2 tau / 2
  return {half_p - ph.p2, half_s - ph.s2, half_p + ph.p2 - ph.p3, half_s + ph.s2 - ph.s3};
}

/// Final state U(last) U2 U(echo) U1 U(first) |initial>.
inline State3 ttzfs_final_state(const PulseAreas& areas, const FreeEvolutionPhases& fe,
                                int initial_level = kZeroLevel) {
  State3 psi = State3::Zero();
  psi(initial_level) = 1.0;
  psi = propagator_pulse(areas.first) * psi;
  psi = free_evolution(fe.p12, fe.s12) * psi;
  psi = propagator_pulse(areas.echo) * psi;
  psi = free_evolution(fe.p23, fe.s23) * psi;
  psi = propagator_pulse(areas.last) * psi;
  return psi;
}

/// Maps |0> population to signal: offset + contrast * P0. The prepared
/// state is a mixture of |0> (weight prep_fidelity) and |+1>.
struct ReadoutModel {
  double contrast = 1.0;
  double offset = 0.0;
  double prep_fidelity = 1.0;

  void validate() const {
    if (!(prep_fidelity >= 0.0 && prep_fidelity <= 1.0)) {
      throw ConfigError("prep_fidelity must lie in [0, 1]");
    }
  }
};

inline double ttzfs_signal(const PulseAreas& areas, const FreeEvolutionPhases& fe,
                           const ReadoutModel& readout = {}) {
  double p0 = std::norm(ttzfs_final_state(areas, fe, kZeroLevel)(kZeroLevel));
  if (readout.prep_fidelity < 1.0) {
    const double residual = std::norm(ttzfs_final_state(areas, fe, kPlusLevel)(kZeroLevel));
    p0 = readout.prep_fidelity * p0 + (1.0 - readout.prep_fidelity) * residual;
  }
  return readout.offset + readout.contrast * p0;
}

inline double ttzfs_signal(const PulseAreas& areas, double tau, ToneDetunings det,
                           const SequencePhases& phases, const ReadoutModel& readout = {}) {
  return ttzfs_signal(areas, evolution_phases(tau, det, phases), readout);
}

struct PhaseCycleRow {
  SequencePhases phases;
  double weight = 0.0;
};

struct PhaseCycleScheme {
  std::string id;
  std::vector<PhaseCycleRow> rows;

  void validate() const {
    if (rows.empty()) throw ConfigError("phase-cycle scheme '" + id + "' has no rows");
  }

  /// Same scheme with the readout fringe shifted by 90 degrees: +45 degrees
  /// on both tones of the echo pulse and +90 degrees on both tones of the
  /// final pulse.
  [[nodiscard]] PhaseCycleScheme quadrature() const {
    PhaseCycleScheme out = *this;
    out.id += "-y";
    for (auto& r : out.rows) {
      r.phases.p2 += kPi / 4.0;
      r.phases.s2 += kPi / 4.0;
      r.phases.p3 += kPi / 2.0;
      r.phases.s3 += kPi / 2.0;
    }
    return out;
  }
};

/// The eight-configuration phase cycle with signed weights +-1/8.
inline PhaseCycleScheme ttzfs8_scheme() {
  constexpr double h = kPi / 2.0;
  constexpr double w = 1.0 / 8.0;
  return {"ttzfs8",
          {
              {{0.0, 0.0, 0.0, 0.0}, w},
              {{0.0, kPi, 0.0, 0.0}, -w},
              {{kPi, 0.0, 0.0, 0.0}, -w},
              {{kPi, kPi, 0.0, 0.0}, w},
              {{h, h, kPi, kPi}, -w},
              {{h, -h, kPi, kPi}, w},
              {{-h, h, kPi, kPi}, w},
              {{-h, -h, kPi, kPi}, -w},
          }};
}

/// A single uncycled sequence with all phases zero and unit weight.
inline PhaseCycleScheme single_phase_scheme() { return {"single", {{{}, 1.0}}}; }

inline double ttzfs8_signal(const PulseAreas& areas, double tau, ToneDetunings det,
                            const PhaseCycleScheme& scheme, const ReadoutModel& readout = {}) {
  double sum = 0.0;
  for (const auto& row : scheme.rows) {
    sum += row.weight * ttzfs_signal(areas, tau, det, row.phases, readout);
  }
  return sum;
}

}  // namespace nvclock
