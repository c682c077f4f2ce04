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

// Decomposition of a TTZFS-type signal into the phase combinations
//   S = sum_j A_j cos(alpha_j)
// where every alpha_j is an integer combination of the six coordinates
//   (omega_1 tau / 2, omega_2 tau / 2, phi_p2, phi_s2, phi_p3, phi_s3).
//
// The signal is a trigonometric polynomial of low degree in these
// coordinates, so sampling an 8-point uniform grid per axis gives its
// Fourier coefficients exactly (no aliasing for |k_i| <= 3). Each detected
// character is matched against the 24 tabulated combinations.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "nvclock/pulse_engine.hpp"

namespace nvclock {

inline constexpr int kPhaseDims = 6;
using PhaseCharacter = std::array<int, kPhaseDims>;

/// Coordinates at which a family is sampled.
struct PhaseCoordinates {
  double half_pump = 0.0;    // omega_1 tau / 2
  double half_stokes = 0.0;  // omega_2 tau / 2
  SequencePhases phases;
};

/// Tabulated combinations alpha_1 .. alpha_24 (rows 1-3 appear with ideal
/// pulse areas, rows 4-24 only with area errors).
inline const std::array<PhaseCharacter, 24>& tabulated_phase_terms() {
  static const std::array<PhaseCharacter, 24> table{{
      {1, 1, -1, 1, 0, -1},    // 1
      {1, 1, 1, -1, -1, 0},    // 2
      {0, 0, -2, 2, 1, -1},    // 3
      {1, 0, -1, 0, 0, 0},     // 4
      {1, 0, 1, 0, -1, 0},     // 5
      {0, 1, 0, -1, 0, 0},     // 6
      {0, 1, 0, 1, 0, -1},     // 7
      {2, 0, 0, 0, -1, 0},     // 8
      {0, 0, -2, 0, 1, 0},     // 9
      {1, -1, -1, 1, 0, 0},    // 10
      {1, -1, -1, -1, 0, 1},   // 11
      {1, -1, 1, 1, -1, 0},    // 12
      {1, -1, 1, -1, -1, 1},   // 13
      {0, 2, 0, 0, 0, -1},     // 14
      {0, 0, 0, -2, 0, 1},     // 15
      {0, 1, 2, -1, -1, 0},    // 16
      {-1, 2, 1, 0, 0, -1},    // 17
      {-1, 2, -1, 0, 1, -1},   // 18
      {2, -1, 0, 1, -1, 0},    // 19
      {2, -1, 0, -1, -1, 1},   // 20
      {0, 1, -2, 1, 1, -1},    // 21
      {1, 0, -1, 2, 0, -1},    // 22
      {1, 0, 1, -2, -1, 1},    // 23
      {2, -2, 0, 0, -1, 1},    // 24
  }};
  return table;
}

/// 1-based row of `k` (or -k) in the table, 0 if absent.
inline int classify_phase_character(const PhaseCharacter& k) {
  const auto& table = tabulated_phase_terms();
  for (int row = 0; row < 24; ++row) {
    bool same = true;
    bool opposite = true;
    for (int d = 0; d < kPhaseDims; ++d) {
      same = same && table[row][d] == k[d];
      opposite = opposite && table[row][d] == -k[d];
    }
    if (same || opposite) return row + 1;
  }
  return 0;
}

struct PhaseTerm {
  int row = 0;  // 1..24, 0 if not tabulated
  PhaseCharacter character{};
  double amplitude = 0.0;  // A_j of A_j cos(alpha_j + phase)
  double phase = 0.0;
  double relative_db = 0.0;  // relative to the strongest oscillating term
};

struct PhaseTermReport {
  std::vector<PhaseTerm> terms;  // above threshold, strongest first
  double constant = 0.0;
  double max_amplitude = 0.0;
  double residual = 0.0;  // max off-grid reconstruction error
  bool inconclusive = false;

  [[nodiscard]] bool has_row(int row) const {
    for (const auto& t : terms) {
      if (t.row == row) return true;
    }
    return false;
  }
  [[nodiscard]] std::vector<int> rows() const {
    std::vector<int> out;
    for (const auto& t : terms) out.push_back(t.row);
    return out;
  }
};

struct PhaseTermOptions {
  double threshold_db = -120.0;
  double residual_tolerance = 1e-9;
  int residual_probes = 64;
};

using PhaseFamily = std::function<double(const PhaseCoordinates&)>;

namespace detail {

inline constexpr int kGrid = 8;
inline constexpr int kGridPoints = kGrid * kGrid * kGrid * kGrid * kGrid * kGrid;

inline PhaseCoordinates coordinates_from(const std::array<double, kPhaseDims>& x) {
  return {x[0], x[1], {x[2], x[3], x[4], x[5]}};
}

inline int wrap_frequency(int index) { return index <= kGrid / 2 ? index : index - kGrid; }

}  // namespace detail

inline PhaseTermReport detect_phase_terms(const PhaseFamily& family, const PhaseTermOptions& opt = {}) {
  using detail::kGrid;
  using detail::kGridPoints;
  std::vector<std::complex<double>> data(kGridPoints);
  std::array<int, kPhaseDims> stride{};
  stride[kPhaseDims - 1] = 1;
  for (int d = kPhaseDims - 2; d >= 0; --d) stride[d] = stride[d + 1] * kGrid;

  for (int n = 0; n < kGridPoints; ++n) {
    std::array<double, kPhaseDims> x{};
    for (int d = 0; d < kPhaseDims; ++d) x[d] = kTwoPi * ((n / stride[d]) % kGrid) / kGrid;
    data[n] = family(detail::coordinates_from(x));
  }

  std::array<std::complex<double>, kGrid> twiddle{};
  for (int j = 0; j < kGrid; ++j) twiddle[j] = std::polar(1.0, -kTwoPi * j / kGrid);

  // Separable 8-point DFT along each axis.
  std::array<std::complex<double>, kGrid> line{};
  for (int d = 0; d < kPhaseDims; ++d) {
    for (int n = 0; n < kGridPoints; ++n) {
      if ((n / stride[d]) % kGrid != 0) continue;
      for (int j = 0; j < kGrid; ++j) line[j] = data[n + j * stride[d]];
      for (int k = 0; k < kGrid; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < kGrid; ++j) acc += line[j] * twiddle[(j * k) % kGrid];
        data[n + k * stride[d]] = acc / static_cast<double>(kGrid);
      }
    }
  }

  PhaseTermReport report;
  report.constant = data[0].real();
  struct Raw {
    PhaseCharacter k;
    std::complex<double> c;
  };
  std::vector<Raw> raw;
  double nyquist_energy = 0.0;
  for (int n = 1; n < kGridPoints; ++n) {
    PhaseCharacter k{};
    bool at_nyquist = false;
    for (int d = 0; d < kPhaseDims; ++d) {
      k[d] = detail::wrap_frequency((n / stride[d]) % kGrid);
      at_nyquist = at_nyquist || k[d] == kGrid / 2;
    }
    if (at_nyquist) {
      nyquist_energy = std::max(nyquist_energy, std::abs(data[n]));
      continue;
    }
    // Keep one representative of each (k, -k) pair.
    int first_nonzero = 0;
    while (k[first_nonzero] == 0) ++first_nonzero;
    if (k[first_nonzero] < 0) continue;
    raw.push_back({k, data[n]});
  }

  for (const auto& r : raw) report.max_amplitude = std::max(report.max_amplitude, 2.0 * std::abs(r.c));
  const double floor = report.max_amplitude * std::pow(10.0, opt.threshold_db / 20.0);
  for (const auto& r : raw) {
    const double amp = 2.0 * std::abs(r.c);
    if (amp <= floor || amp == 0.0) continue;
    PhaseTerm t;
    t.character = r.k;
    t.row = classify_phase_character(r.k);
    t.amplitude = amp;
    t.phase = std::arg(r.c);
    t.relative_db = 20.0 * std::log10(amp / report.max_amplitude);
    report.terms.push_back(t);
  }
  std::sort(report.terms.begin(), report.terms.end(),
            [](const PhaseTerm& a, const PhaseTerm& b) { return a.amplitude > b.amplitude; });

  // Off-grid check that the truncated series reproduces the family.
  for (int probe = 0; probe < opt.residual_probes; ++probe) {
    std::array<double, kPhaseDims> x{};
    for (int d = 0; d < kPhaseDims; ++d) {
      // Deterministic irrational offsets keep probes away from grid nodes.
      x[d] = std::fmod((probe + 1) * (0.7548776662 + 0.5698402910 * d) * kTwoPi, kTwoPi);
    }
    double model = report.constant;
    for (const auto& r : raw) {
      double arg = 0.0;
      for (int d = 0; d < kPhaseDims; ++d) arg += r.k[d] * x[d];
      model += 2.0 * (r.c * std::polar(1.0, arg)).real();
    }
    report.residual = std::max(report.residual, std::abs(model - family(detail::coordinates_from(x))));
  }
  const double scale = std::max(report.max_amplitude, std::abs(report.constant));
  report.inconclusive = report.residual > opt.residual_tolerance * std::max(scale, 1.0) ||
                        nyquist_energy > floor;
  return report;
}

/// A single sequence with the given areas, phases taken from the coordinates.
inline PhaseFamily single_sequence_family(PulseAreas areas, ReadoutModel readout = {}) {
  return [areas, readout](const PhaseCoordinates& x) {
    const auto& p = x.phases;
    const FreeEvolutionPhases fe{x.half_pump - p.p2, x.half_stokes - p.s2,
                                 x.half_pump + p.p2 - p.p3, x.half_stokes + p.s2 - p.s3};
    return ttzfs_signal(areas, fe, readout);
  };
}

/// Weighted sum over a phase-cycle scheme; the coordinates' phases act as
/// common offsets added to every row.
inline PhaseFamily cycled_family(PulseAreas areas, PhaseCycleScheme scheme, ReadoutModel readout = {}) {
  return [areas, scheme = std::move(scheme), readout](const PhaseCoordinates& x) {
    double sum = 0.0;
    for (const auto& row : scheme.rows) {
      const SequencePhases p{row.phases.p2 + x.phases.p2, row.phases.s2 + x.phases.s2,
                             row.phases.p3 + x.phases.p3, row.phases.s3 + x.phases.s3};
      const FreeEvolutionPhases fe{x.half_pump - p.p2, x.half_stokes - p.s2,
                                   x.half_pump + p.p2 - p.p3, x.half_stokes + p.s2 - p.s3};
      sum += row.weight * ttzfs_signal(areas, fe, readout);
    }
    return sum;
  };
}

}  // namespace nvclock
