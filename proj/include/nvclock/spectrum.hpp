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

// tau scans of the TTZFS sequence and their amplitude spectra.

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <string>
#include <vector>

#include "nvclock/ensemble.hpp"
#include "nvclock/parallel.hpp"
#include "nvclock/phase_terms.hpp"
#include "nvclock/pulse_engine.hpp"

namespace nvclock {

struct FringeScan {
  std::vector<double> taus;     // s
  std::vector<double> signals;  // dimensionless
  std::string scheme_id;
  PulseAreas areas;
  ToneDetunings tones;
  double rabi_fwhm = 0.0;

  void validate() const {
    if (taus.size() != signals.size()) throw DomainError("fringe scan: taus and signals differ in length");
    for (std::size_t i = 1; i < taus.size(); ++i) {
      if (!(taus[i] > taus[i - 1])) throw DomainError("fringe scan: taus must be strictly increasing");
    }
  }
};

struct ScanSettings {
  double tau_start = 0.0;
  double tau_step = 20e-9;
  std::size_t n_points = 16384;
  // Frame translated with the pulse phases: the phases advance at the
  // transition frequencies themselves (defaults: f1, f2 at 475 G).
  ToneDetunings tones{5.0892e6, 4.7964e6};
  PulseAreas areas;
  PhaseCycleScheme scheme = ttzfs8_scheme();
  RabiDistribution distribution{1.0, 0.164, 64};
  bool perfect_echo = false;  // area errors on the pi/2 pulses only
  ReadoutModel readout;

  void validate() const {
    if (!(tau_step > 0.0)) throw ConfigError("scan tau_step must be positive");
    if (n_points < 2) throw ConfigError("scan needs at least two points");
    scheme.validate();
    distribution.validate();
    readout.validate();
  }
};

/// Ensemble-averaged, phase-cycled signal on a uniform tau grid. tau points
/// run concurrently; the ensemble sum at each point is in node order.
inline FringeScan simulate_scan(const ScanSettings& s, unsigned threads = 1) {
  s.validate();
  const QuadratureRule rule = s.distribution.rule();
  std::vector<PulseAreas> node_areas;
  node_areas.reserve(rule.nodes.size());
  for (double scale : rule.nodes) {
    node_areas.push_back(s.perfect_echo ? s.areas.scaled_keep_echo(scale) : s.areas.scaled(scale));
  }

  FringeScan scan;
  scan.scheme_id = s.scheme.id;
  scan.areas = s.areas;
  scan.tones = s.tones;
  scan.rabi_fwhm = s.distribution.fwhm;
  scan.taus.resize(s.n_points);
  scan.signals.resize(s.n_points);
  parallel_for(s.n_points, threads, [&](std::size_t i) {
    const double tau = s.tau_start + static_cast<double>(i) * s.tau_step;
    double acc = 0.0;
    for (std::size_t k = 0; k < node_areas.size(); ++k) {
      acc += rule.weights[k] * ttzfs8_signal(node_areas[k], tau, s.tones, s.scheme, s.readout);
    }
    scan.taus[i] = tau;
    scan.signals[i] = acc;
  });
  return scan;
}

enum class Window { hann, rectangular };

struct SpectrumOptions {
  Window window = Window::hann;
  int zero_pad_factor = 1;
};

struct Spectrum {
  std::vector<double> frequency;  // Hz
  std::vector<double> amplitude;  // amplitude of an equivalent sinusoid

  [[nodiscard]] double bin_width() const {
    return frequency.size() > 1 ? frequency[1] - frequency[0] : 0.0;
  }
};

/// One-sided amplitude spectrum of the mean-removed signal. A sinusoid of
/// amplitude A centred on a bin reads A.
inline Spectrum amplitude_spectrum(const FringeScan& scan, const SpectrumOptions& opt = {}) {
  scan.validate();
  const std::size_t n = scan.taus.size();
  if (n < 2) throw DomainError("spectrum needs at least two samples");
  if (opt.zero_pad_factor < 1) throw ConfigError("zero_pad_factor must be >= 1");
  const double step = (scan.taus.back() - scan.taus.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((scan.taus[i] - scan.taus[i - 1]) - step) > 1e-6 * step) {
      throw DomainError("spectrum requires a uniform tau grid");
    }
  }

  double mean = 0.0;
  for (double v : scan.signals) mean += v;
  mean /= static_cast<double>(n);

  const std::size_t padded = n * static_cast<std::size_t>(opt.zero_pad_factor);
  std::vector<double> buffer(padded, 0.0);
  double gain = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = opt.window == Window::hann
                         ? 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1))
                         : 1.0;
    buffer[i] = (scan.signals[i] - mean) * w;
    gain += w;
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> out;
  fft.fwd(out, buffer);

  Spectrum spec;
  const std::size_t half = padded / 2 + 1;
  spec.frequency.resize(half);
  spec.amplitude.resize(half);
  for (std::size_t k = 0; k < half; ++k) {
    spec.frequency[k] = static_cast<double>(k) / (static_cast<double>(padded) * step);
    const double scale = (k == 0 || (2 * k == padded)) ? 1.0 : 2.0;
    spec.amplitude[k] = scale * std::abs(out[k]) / gain;
  }
  return spec;
}

/// Largest amplitude within +-halfwidth_hz of `frequency`.
inline double peak_amplitude_near(const Spectrum& spec, double frequency, double halfwidth_hz) {
  double best = 0.0;
  for (std::size_t k = 0; k < spec.frequency.size(); ++k) {
    if (std::abs(spec.frequency[k] - frequency) <= halfwidth_hz) best = std::max(best, spec.amplitude[k]);
  }
  return best;
}

/// Frequency of maximum amplitude, excluding DC.
inline double dominant_frequency(const Spectrum& spec) {
  std::size_t best = 1;
  for (std::size_t k = 1; k < spec.amplitude.size(); ++k) {
    if (spec.amplitude[k] > spec.amplitude[best]) best = k;
  }
  return spec.frequency[best];
}

/// Folds a frequency into [0, sample_rate / 2].
inline double alias_frequency(double f, double sample_rate) {
  const double folded = std::abs(f - std::round(f / sample_rate) * sample_rate);
  return folded;
}

struct SpectralLine {
  double frequency = 0.0;
  double amplitude = 0.0;
  double relative_db = 0.0;
  std::string label;
};

/// Oscillation frequencies of every tabulated term that only appears with
/// pulse-area errors, excluding DC and the desired half-sum.
inline std::vector<SpectralLine> unwanted_lines(ToneDetunings tones) {
  const double desired = 0.5 * (tones.pump + tones.stokes);
  std::vector<SpectralLine> out;
  const auto& table = tabulated_phase_terms();
  for (int row = 3; row < 24; ++row) {
    const int a = table[row][0];
    const int b = table[row][1];
    const double f = std::abs(0.5 * a * tones.pump + 0.5 * b * tones.stokes);
    if (f < 1e-9 * desired || std::abs(f - desired) < 1e-9 * desired) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const SpectralLine& l) {
      return std::abs(l.frequency - f) < 1e-9 * desired;
    });
    if (seen) continue;
    auto term = [](int c, const char* w) {
      if (c == 0) return std::string();
      std::string s = c > 0 ? "+" : "-";
      const int m = std::abs(c);
      if (m == 2) return s + w;
      return s + w + "/2";
    };
    std::string label = term(a, "f1") + term(b, "f2");
    if (!label.empty() && label[0] == '+') label.erase(0, 1);
    out.push_back({f, 0.0, 0.0, label});
  }
  std::sort(out.begin(), out.end(), [](const SpectralLine& x, const SpectralLine& y) {
    return x.frequency < y.frequency;
  });
  return out;
}

struct SuppressionReport {
  double desired_frequency = 0.0;
  double desired_amplitude = 0.0;
  std::vector<SpectralLine> unwanted;
  double worst_db = -std::numeric_limits<double>::infinity();  // strongest unwanted line
};

/// Reads the desired (f1 + f2)/2 peak and every unwanted line from a
/// spectrum, folding frequencies above Nyquist.
inline SuppressionReport analyse_components(const Spectrum& spec, ToneDetunings tones, int halfwidth_bins = 2) {
  SuppressionReport rep;
  const double df = spec.bin_width();
  const double rate = 2.0 * spec.frequency.back();
  const double hw = halfwidth_bins * df;
  rep.desired_frequency = alias_frequency(0.5 * (tones.pump + tones.stokes), rate);
  rep.desired_amplitude = peak_amplitude_near(spec, rep.desired_frequency, hw);
  rep.unwanted = unwanted_lines(tones);
  for (auto& line : rep.unwanted) {
    line.frequency = alias_frequency(line.frequency, rate);
    line.amplitude = peak_amplitude_near(spec, line.frequency, hw);
    line.relative_db = 20.0 * std::log10(std::max(line.amplitude, 1e-300) / rep.desired_amplitude);
    rep.worst_db = std::max(rep.worst_db, line.relative_db);
  }
  return rep;
}

}  // namespace nvclock
