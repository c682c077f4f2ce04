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

// Quadrature readout of one target simulated through the pulse engine:
// the phase-cycled sequence and its 90-degree-shifted variant, averaged
// over the Rabi-scale distribution.

#include <cmath>

#include "nvclock/clock_composer.hpp"
#include "nvclock/ensemble.hpp"
#include "nvclock/pulse_engine.hpp"

namespace nvclock {

struct MeasurementSettings {
  PulseAreas areas;
  double area_scale = 1.0;
  PhaseCycleScheme scheme = ttzfs8_scheme();
  RabiDistribution distribution{1.0, 0.0, 64};
  ReadoutModel readout;

  void validate() const {
    if (!(area_scale > 0.0)) throw ConfigError("area_scale must be positive");
    scheme.validate();
    distribution.validate();
    readout.validate();
  }
};

/// Both tones detuned so that the half-sum is off by `delta` (Hz) and the
/// half-difference by `half_difference` (Hz).
inline ToneDetunings split_detuning(double delta, double half_difference = 0.0) {
  return {delta + half_difference, delta - half_difference};
}

/// Cycled fringe pair (Sx, Sy) for a half-sum detuning. The cycled signal
/// of an ideal sequence is -A cos(2 pi delta tau), so both quadratures are
/// negated to give atan2(Sy, Sx) = +2 pi delta tau.
inline QuadratureReadout simulate_quadratures(const MeasurementSettings& m, double tau, ToneDetunings det,
                                              Target target, unsigned threads = 1) {
  m.validate();
  const PhaseCycleScheme x_scheme = m.scheme;
  const PhaseCycleScheme y_scheme = m.scheme.quadrature();
  struct Pair {
    double x = 0.0;
    double y = 0.0;
    Pair operator*(double w) const { return {x * w, y * w}; }
    Pair operator+(const Pair& o) const { return {x + o.x, y + o.y}; }
  };
  const Pair p = ensemble_average(
      [&](double scale) {
        const PulseAreas a = m.areas.scaled(scale * m.area_scale);
        return Pair{ttzfs8_signal(a, tau, det, x_scheme, m.readout), ttzfs8_signal(a, tau, det, y_scheme, m.readout)};
      },
      m.distribution, threads);
  return {-p.x, -p.y, tau, target};
}

}  // namespace nvclock
