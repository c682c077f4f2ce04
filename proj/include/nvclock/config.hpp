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

// Scenario file: one JSON document with a "schema_version" field and
// unit-suffixed keys. A file only needs the keys it overrides; every key it
// does contain must exist in the defaults, so misspellings are rejected.

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nvclock/clock_composer.hpp"
#include "nvclock/errors.hpp"
#include "nvclock/fringe_fit.hpp"
#include "nvclock/scenario.hpp"
#include "nvclock/spectrum.hpp"

namespace nvclock {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct SpectrumConfig {
  ScanSettings scan;
  double area_scale = 1.0;
  Window window = Window::hann;
  int zero_pad_factor = 1;
};

struct SweepConfig {
  SweepBase base;
  SweepParameter parameter = SweepParameter::temperature;
  std::vector<double> values;  // empty: centre +- half_span over `points`
  double half_span = 0.1;
  int points = 5;

  /// Grid centred on the operating value of the swept parameter.
  [[nodiscard]] std::vector<double> grid() const {
    if (!values.empty()) return values;
    if (points < 3 || points % 2 == 0) throw ConfigError("sweep points must be odd and >= 3");
    if (!(half_span > 0.0)) throw ConfigError("sweep half_span must be positive");
    double centre = 0.0;
    switch (parameter) {
      case SweepParameter::temperature: centre = base.T; break;
      case SweepParameter::Bz: centre = base.Bz; break;
      case SweepParameter::tau_D: centre = base.tau_D; break;
      case SweepParameter::tau_Q: centre = base.tau_Q; break;
      case SweepParameter::prep_fidelity: centre = base.measurement.readout.prep_fidelity; break;
      case SweepParameter::area_scale: centre = base.measurement.area_scale; break;
    }
    std::vector<double> g(static_cast<std::size_t>(points));
    const int half = points / 2;
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = centre + half_span * (i - half) / half;
    return g;
  }
};

struct FringeConfig {
  FringeParams model{1.0, 0.1, 1.68e-6, 1.0, 3.0e6, 0.7};
  double tau_start = 0.0;
  double tau_step = 2.5e-9;
  std::size_t n_points = 2000;
  double noise = 0.0;
};

struct AppConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 1;
  SpinConstants constants;
  double Bz = 475.0;  // G
  double T = 297.0;   // K
  SpectrumConfig spectrum;
  ScenarioConfig clock;
  int allan_per_decade = 10;
  SweepConfig sweep;
  std::vector<BudgetInput> budget = default_budget_inputs();
  FringeConfig fringes;
};

namespace detail {

inline std::string window_name(Window w) { return w == Window::hann ? "hann" : "rectangular"; }

inline Window window_from(const std::string& s) {
  if (s == "hann") return Window::hann;
  if (s == "rectangular") return Window::rectangular;
  throw ConfigError("unknown window '" + s + "'");
}

inline Json psn_json(const PsnParams& p) {
  return {{"f_hz", p.f},           {"tau_s", p.tau},          {"contrast", p.contrast},
          {"T2_s", p.T2},          {"stretch", p.stretch},    {"gain_v_per_a", p.gain},
          {"V0_v", p.V0},          {"t_A_s", p.t_A},          {"t_B_s", p.t_B},
          {"N_green", p.N_green},  {"t_cycle_s", p.t_cycle}};
}

inline PsnParams psn_from(const Json& j) {
  PsnParams p;
  p.f = j.at("f_hz").get<double>();
  p.tau = j.at("tau_s").get<double>();
  p.contrast = j.at("contrast").get<double>();
  p.T2 = j.at("T2_s").get<double>();
  p.stretch = j.at("stretch").get<double>();
  p.gain = j.at("gain_v_per_a").get<double>();
  p.V0 = j.at("V0_v").get<double>();
  p.t_A = j.at("t_A_s").get<double>();
  p.t_B = j.at("t_B_s").get<double>();
  p.N_green = j.at("N_green").get<double>();
  p.t_cycle = j.at("t_cycle_s").get<double>();
  return p;
}

inline Json budget_row_json(const BudgetInput& b) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return {{"parameter", b.parameter},
          {"unit", b.unit},
          {"instability", opt(b.instability)},
          {"sensitivity_D_per_unit", opt(b.sensitivity_D)},
          {"sensitivity_Q_per_unit", opt(b.sensitivity_Q)},
          {"sensitivity_psi_per_unit", opt(b.sensitivity_psi)},
          {"psi_upper_bound", b.psi_upper_bound}};
}

inline BudgetInput budget_row_from(const Json& j) {
  static const std::vector<std::string> keys{"parameter",
                                             "unit",
                                             "instability",
                                             "sensitivity_D_per_unit",
                                             "sensitivity_Q_per_unit",
                                             "sensitivity_psi_per_unit",
                                             "psi_upper_bound"};
  if (!j.is_object()) throw ConfigError("budget rows must be objects");
  for (const auto& [k, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown key 'budget.rows." + k + "'");
  }
  auto opt = [&](const char* k) -> std::optional<double> {
    if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
    return j.at(k).get<double>();
  };
  BudgetInput b;
  b.parameter = j.value("parameter", std::string{});
  b.unit = j.value("unit", std::string{});
  b.instability = opt("instability");
  b.sensitivity_D = opt("sensitivity_D_per_unit");
  b.sensitivity_Q = opt("sensitivity_Q_per_unit");
  b.sensitivity_psi = opt("sensitivity_psi_per_unit");
  b.psi_upper_bound = j.value("psi_upper_bound", false);
  return b;
}

// Every key of `user` must exist in `defaults`; arrays are taken whole.
inline void check_keys(const Json& user, const Json& defaults, const std::string& path) {
  if (!user.is_object()) {
    throw ConfigError("'" + (path.empty() ? std::string("<root>") : path) + "' must be an object");
  }
  for (const auto& [k, v] : user.items()) {
    const std::string here = path.empty() ? k : path + "." + k;
    if (!defaults.contains(k)) throw ConfigError("unknown key '" + here + "'");
    const Json& d = defaults.at(k);
    if (d.is_object()) check_keys(v, d, here);
  }
}

}  // namespace detail

inline Json to_json(const AppConfig& c) {
  const SpinConstants& k = c.constants;
  const ScanSettings& s = c.spectrum.scan;
  const ScenarioConfig& r = c.clock;
  const SweepConfig& w = c.sweep;
  Json budget_rows = Json::array();
  for (const auto& b : c.budget) budget_rows.push_back(detail::budget_row_json(b));
  return {
      {"schema_version", c.schema_version},
      {"seed", c.seed},
      {"constants",
       {{"D0_hz", k.D0},
        {"Q0_hz", k.Q0},
        {"gamma_e_hz_per_g", k.gamma_e},
        {"gamma_n_hz_per_g", k.gamma_n},
        {"A_par_hz", k.A_par},
        {"A_perp_hz", k.A_perp},
        {"T0_k", k.T0},
        {"lambda_D_per_k", k.lambda_D},
        {"lambda_Q_per_k", k.lambda_Q},
        {"lambda_D2_per_k2", k.lambda_D2},
        {"lambda_Q2_per_k2", k.lambda_Q2}}},
      {"operating_point", {{"Bz_g", c.Bz}, {"T_k", c.T}}},
      {"spectrum",
       {{"tau_start_s", s.tau_start},
        {"tau_step_s", s.tau_step},
        {"n_points", s.n_points},
        {"pump_hz", s.tones.pump},
        {"stokes_hz", s.tones.stokes},
        {"area_first_rad", s.areas.first},
        {"area_echo_rad", s.areas.echo},
        {"area_last_rad", s.areas.last},
        {"area_scale", c.spectrum.area_scale},
        {"scheme", s.scheme.id},
        {"rabi_fwhm", s.distribution.fwhm},
        {"rabi_nodes", s.distribution.nodes},
        {"perfect_echo", s.perfect_echo},
        {"prep_fidelity", s.readout.prep_fidelity},
        {"window", detail::window_name(c.spectrum.window)},
        {"zero_pad_factor", c.spectrum.zero_pad_factor}}},
      {"clock",
       {{"t_cycle_s", r.t_cycle},
        {"n_cycles", r.n_cycles},
        {"T_base_k", r.T_base},
        {"mode", to_string(r.mode)},
        {"second_order", r.second_order},
        {"psn_enabled", r.psn_enabled},
        {"loop_gain", r.loop_gain},
        {"temperature_noise", {{"kind", to_string(r.temperature_kind)}, {"magnitude_k", r.temperature_magnitude}}},
        {"lo_noise", {{"kind", to_string(r.lo_kind)}, {"magnitude_frac", r.lo_magnitude}}},
        {"thermometer_offset",
         {{"kind", to_string(r.thermometer_offset_kind)}, {"magnitude_k", r.thermometer_offset_magnitude}}},
        {"thermometer_noise_k", r.thermometer_noise},
        {"noise_period_s", r.noise_period},
        {"allan_per_decade", c.allan_per_decade},
        {"D", {{"S0", r.D.S0}, {"psn", detail::psn_json(r.D.psn)}}},
        {"Q", {{"S0", r.Q.S0}, {"psn", detail::psn_json(r.Q.psn)}}}}},
      {"sweep",
       {{"parameter", to_string(w.parameter)},
        {"values", w.values},
        {"half_span", w.half_span},
        {"points", w.points},
        {"Bz_g", w.base.Bz},
        {"T_k", w.base.T},
        {"tau_D_s", w.base.tau_D},
        {"tau_Q_s", w.base.tau_Q},
        {"rabi_fwhm", w.base.measurement.distribution.fwhm},
        {"rabi_nodes", w.base.measurement.distribution.nodes},
        {"area_scale", w.base.measurement.area_scale},
        {"prep_fidelity", w.base.measurement.readout.prep_fidelity}}},
      {"budget", {{"rows", budget_rows}}},
      {"fringes",
       {{"S0", c.fringes.model.S0},
        {"S1", c.fringes.model.S1},
        {"T2_s", c.fringes.model.T2},
        {"stretch", c.fringes.model.p},
        {"f_hz", c.fringes.model.f},
        {"phi_rad", c.fringes.model.phi},
        {"tau_start_s", c.fringes.tau_start},
        {"tau_step_s", c.fringes.tau_step},
        {"n_points", c.fringes.n_points},
        {"noise", c.fringes.noise}}},
  };
}

inline const Json& default_config_json() {
  static const Json j = to_json(AppConfig{});
  return j;
}

inline AppConfig from_json(const Json& user) {
  if (!user.is_object()) throw ConfigError("configuration must be a JSON object");
  if (user.contains("schema_version")) {
    if (!user.at("schema_version").is_number_integer() || user.at("schema_version").get<int>() != kSchemaVersion) {
      throw ConfigError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
    }
  }
  detail::check_keys(user, default_config_json(), "");
  Json j = default_config_json();
  j.merge_patch(user);
  // merge_patch removes keys set to null; arrays are replaced wholesale.
  try {
    AppConfig c;
    c.schema_version = j.at("schema_version").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const Json& k = j.at("constants");
    c.constants.D0 = k.at("D0_hz").get<double>();
    c.constants.Q0 = k.at("Q0_hz").get<double>();
    c.constants.gamma_e = k.at("gamma_e_hz_per_g").get<double>();
    c.constants.gamma_n = k.at("gamma_n_hz_per_g").get<double>();
    c.constants.A_par = k.at("A_par_hz").get<double>();
    c.constants.A_perp = k.at("A_perp_hz").get<double>();
    c.constants.T0 = k.at("T0_k").get<double>();
    c.constants.lambda_D = k.at("lambda_D_per_k").get<double>();
    c.constants.lambda_Q = k.at("lambda_Q_per_k").get<double>();
    c.constants.lambda_D2 = k.at("lambda_D2_per_k2").get<double>();
    c.constants.lambda_Q2 = k.at("lambda_Q2_per_k2").get<double>();
    c.constants.validate();

    c.Bz = j.at("operating_point").at("Bz_g").get<double>();
    c.T = j.at("operating_point").at("T_k").get<double>();

    const Json& s = j.at("spectrum");
    ScanSettings& scan = c.spectrum.scan;
    scan.tau_start = s.at("tau_start_s").get<double>();
    scan.tau_step = s.at("tau_step_s").get<double>();
    scan.n_points = s.at("n_points").get<std::size_t>();
    scan.tones = {s.at("pump_hz").get<double>(), s.at("stokes_hz").get<double>()};
    scan.areas = {s.at("area_first_rad").get<double>(), s.at("area_echo_rad").get<double>(),
                  s.at("area_last_rad").get<double>()};
    c.spectrum.area_scale = s.at("area_scale").get<double>();
    const std::string scheme = s.at("scheme").get<std::string>();
    if (scheme == "ttzfs8") {
      scan.scheme = ttzfs8_scheme();
    } else if (scheme == "single") {
      scan.scheme = single_phase_scheme();
    } else {
      throw ConfigError("unknown phase-cycle scheme '" + scheme + "'");
    }
    scan.distribution.fwhm = s.at("rabi_fwhm").get<double>();
    scan.distribution.nodes = s.at("rabi_nodes").get<int>();
    scan.perfect_echo = s.at("perfect_echo").get<bool>();
    scan.readout.prep_fidelity = s.at("prep_fidelity").get<double>();
    c.spectrum.window = detail::window_from(s.at("window").get<std::string>());
    c.spectrum.zero_pad_factor = s.at("zero_pad_factor").get<int>();
    scan.validate();

    const Json& r = j.at("clock");
    ScenarioConfig& clock = c.clock;
    clock.constants = c.constants;
    clock.seed = c.seed;
    clock.t_cycle = r.at("t_cycle_s").get<double>();
    clock.n_cycles = r.at("n_cycles").get<std::size_t>();
    clock.T_base = r.at("T_base_k").get<double>();
    clock.mode = feedback_mode_from_string(r.at("mode").get<std::string>());
    clock.second_order = r.at("second_order").get<bool>();
    clock.psn_enabled = r.at("psn_enabled").get<bool>();
    clock.loop_gain = r.at("loop_gain").get<double>();
    clock.temperature_kind = noise_kind_from_string(r.at("temperature_noise").at("kind").get<std::string>());
    clock.temperature_magnitude = r.at("temperature_noise").at("magnitude_k").get<double>();
    clock.lo_kind = noise_kind_from_string(r.at("lo_noise").at("kind").get<std::string>());
    clock.lo_magnitude = r.at("lo_noise").at("magnitude_frac").get<double>();
    clock.thermometer_offset_kind =
        noise_kind_from_string(r.at("thermometer_offset").at("kind").get<std::string>());
    clock.thermometer_offset_magnitude = r.at("thermometer_offset").at("magnitude_k").get<double>();
    clock.thermometer_noise = r.at("thermometer_noise_k").get<double>();
    clock.noise_period = r.at("noise_period_s").get<double>();
    c.allan_per_decade = r.at("allan_per_decade").get<int>();
    if (c.allan_per_decade < 1) throw ConfigError("allan_per_decade must be >= 1");
    clock.D.S0 = r.at("D").at("S0").get<double>();
    clock.D.psn = detail::psn_from(r.at("D").at("psn"));
    clock.Q.S0 = r.at("Q").at("S0").get<double>();
    clock.Q.psn = detail::psn_from(r.at("Q").at("psn"));
    clock.validate();

    const Json& w = j.at("sweep");
    SweepConfig& sweep = c.sweep;
    sweep.base.constants = c.constants;
    sweep.parameter = sweep_parameter_from_string(w.at("parameter").get<std::string>());
    sweep.values = w.at("values").get<std::vector<double>>();
    sweep.half_span = w.at("half_span").get<double>();
    sweep.points = w.at("points").get<int>();
    sweep.base.Bz = w.at("Bz_g").get<double>();
    sweep.base.T = w.at("T_k").get<double>();
    sweep.base.tau_D = w.at("tau_D_s").get<double>();
    sweep.base.tau_Q = w.at("tau_Q_s").get<double>();
    sweep.base.measurement.distribution.fwhm = w.at("rabi_fwhm").get<double>();
    sweep.base.measurement.distribution.nodes = w.at("rabi_nodes").get<int>();
    sweep.base.measurement.area_scale = w.at("area_scale").get<double>();
    sweep.base.measurement.readout.prep_fidelity = w.at("prep_fidelity").get<double>();
    sweep.base.measurement.validate();

    c.budget.clear();
    for (const auto& row : j.at("budget").at("rows")) c.budget.push_back(detail::budget_row_from(row));

    const Json& f = j.at("fringes");
    c.fringes.model = {f.at("S0").get<double>(),   f.at("S1").get<double>(),   f.at("T2_s").get<double>(),
                       f.at("stretch").get<double>(), f.at("f_hz").get<double>(), f.at("phi_rad").get<double>()};
    c.fringes.tau_start = f.at("tau_start_s").get<double>();
    c.fringes.tau_step = f.at("tau_step_s").get<double>();
    c.fringes.n_points = f.at("n_points").get<std::size_t>();
    c.fringes.noise = f.at("noise").get<double>();
    return c;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
}

inline AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("configuration '" + path + "': " + e.what());
  }
  return from_json(j);
}

/// 64-bit FNV-1a of the canonical (key-sorted, compact) dump, as 16 hex
/// digits. Key order in the source file does not matter.
inline std::string config_hash(const Json& j) {
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

inline std::string config_hash(const AppConfig& c) { return config_hash(to_json(c)); }

}  // namespace nvclock
