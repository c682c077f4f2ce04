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

// Photon-shot-noise limit of a windowed, balanced optical readout.

#include <cmath>
#include <numbers>

#include "nvclock/errors.hpp"
#include "nvclock/clock_composer.hpp"
#include "nvclock/spin_model.hpp"

namespace nvclock {

inline constexpr double kElectronCharge = 1.602176634e-19;  // C

struct PsnParams {
  double f = 2870.3e6;       // Hz, frequency whose detuning is measured
  double tau = 1.68e-6;      // s, total free-evolution time
  double contrast = 0.04;    // peak-to-peak, before decoherence
  double T2 = 1.68e-6;       // s
  double stretch = 1.0;      // p
  double gain = 1.0e5;       // V/A transimpedance
  double V0 = 1.0;           // V, fluorescence-only photodetector reading
  double t_A = 1.0e-6;       // s, front window
  double t_B = 1.0e-6;       // s, back window
  double N_green = 6.0e8;    // green photons in the reference channel
  double t_cycle = 1.0e-3;   // s, time for one D and Q measurement
  double t = 1.0;            // s, total averaging time

  /// Red photoelectrons in the front window: V0 t_A / (G q_e).
  [[nodiscard]] double n_red() const { return V0 * t_A / (gain * kElectronCharge); }

  void validate() const {
    if (!(f > 0 && tau > 0 && T2 > 0 && stretch > 0 && gain > 0 && V0 > 0 && t_A > 0 && t_B > 0 &&
          N_green > 0 && t_cycle > 0 && t > 0)) {
      throw DomainError("photon-shot-noise parameters must all be positive");
    }
    if (!(contrast > 0.0 && contrast <= 2.0)) throw DomainError("contrast must lie in (0, 2]");
  }
};

struct PsnFactors {
  double phase = 0.0;     // 1 / (2 pi f tau)
  double contrast = 0.0;  // 1 / ((C/2) exp(-(tau/T2)^p))
  double photons = 0.0;   // 1 / sqrt(N_red)
  double window = 0.0;    // sqrt(1 + t_A / t_B)
  double balanced = 0.0;  // sqrt(1 + N_red / N_green)
  double averaging = 0.0; // sqrt(t_cycle / t)

  [[nodiscard]] double product() const { return phase * contrast * photons * window * balanced * averaging; }
};

inline PsnFactors psn_factors(const PsnParams& p) {
  p.validate();
  PsnFactors f;
  f.phase = 1.0 / (2.0 * std::numbers::pi * p.f * p.tau);
  f.contrast = 1.0 / (0.5 * p.contrast * std::exp(-std::pow(p.tau / p.T2, p.stretch)));
  f.photons = std::sqrt(p.gain * kElectronCharge / (p.V0 * p.t_A));
  f.window = std::sqrt(1.0 + p.t_A / p.t_B);
  f.balanced = std::sqrt(1.0 + p.n_red() / p.N_green);
  f.averaging = std::sqrt(p.t_cycle / p.t);
  return f;
}

/// Fractional shot-noise-limited frequency uncertainty delta f / f.
inline double psn_fractional(const PsnParams& p) { return psn_factors(p).product(); }

/// Shot noise of the composite frequency from those of D and Q.
inline double psn_composite(double psn_D, double psn_Q, double alpha) {
  return std::hypot(psn_Q * alpha, psn_D * (1.0 - alpha));
}

inline double psn_composite(double psn_D, double psn_Q, const SpinConstants& c) {
  return psn_composite(psn_D, psn_Q, alpha_from_lambdas(c));
}

}  // namespace nvclock
