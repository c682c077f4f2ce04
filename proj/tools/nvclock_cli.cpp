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

// nvclock command-line interface.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nvclock.hpp"

namespace fs = std::filesystem;
using nvclock::CsvTable;
using nvclock::Json;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kDomain = 3, kNonConvergence = 4 };

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  unsigned threads = 0;
  std::string format = "csv";
};

// Collects outputs in memory; nothing touches the disk until every result
// has been computed.
class Outputs {
 public:
  Outputs(const Globals& g, std::string command, const nvclock::AppConfig& cfg)
      : g_(g), start_(nvclock::utc_timestamp()) {
    manifest_.tool_version = NVCLOCK_VERSION;
    manifest_.command = std::move(command);
    manifest_.config_hash = nvclock::config_hash(cfg);
    manifest_.seed = cfg.seed;
  }

  void table(const std::string& stem, const CsvTable& t) {
    if (g_.format == "json") {
      files_.emplace_back(stem + ".json", csv_to_json(t.str()).dump(2) + "\n");
    } else {
      files_.emplace_back(stem + ".csv", t.str());
    }
  }

  void text(const std::string& name, const std::string& content) { files_.emplace_back(name, content); }

  void commit() {
    manifest_.start_time = start_;
    for (const auto& [name, _] : files_) manifest_.outputs.push_back(name);
    manifest_.end_time = nvclock::utc_timestamp();
    for (const auto& [name, content] : files_) nvclock::write_file_atomic(fs::path(g_.out_dir) / name, content);
    nvclock::write_file_atomic(fs::path(g_.out_dir) / "manifest.json", manifest_.to_json().dump(2) + "\n");
  }

 private:
  static Json csv_to_json(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    auto split = [](const std::string& s) {
      std::vector<std::string> cells;
      std::string c;
      std::istringstream is(s);
      while (std::getline(is, c, ',')) cells.push_back(c);
      return cells;
    };
    Json j;
    j["columns"] = split(line);
    j["rows"] = Json::array();
    while (std::getline(in, line)) {
      Json row = Json::array();
      for (const auto& c : split(line)) {
        double v = 0.0;
        const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
        if (r.ec == std::errc() && r.ptr == c.data() + c.size()) {
          row.push_back(v);
        } else {
          row.push_back(c);
        }
      }
      j["rows"].push_back(row);
    }
    return j;
  }

  const Globals& g_;
  std::string start_;
  nvclock::RunManifest manifest_;
  std::vector<std::pair<std::string, std::string>> files_;
};

nvclock::AppConfig load(const Globals& g) {
  nvclock::AppConfig cfg = g.config_path.empty() ? nvclock::from_json(Json::object()) : nvclock::load_config(g.config_path);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.clock.seed = *g.seed;
  }
  return cfg;
}

unsigned threads(const Globals& g) { return g.threads == 0 ? nvclock::default_threads() : g.threads; }

std::string fmt(double v) { return nvclock::format_number(v); }

// ---------------------------------------------------------------------------

struct FrequenciesArgs {
  std::optional<double> field;
  std::optional<double> temp;
  std::optional<double> sweep_to;
  int sweep_points = 11;
};

int cmd_frequencies(const Globals& g, const FrequenciesArgs& a) {
  const auto cfg = load(g);
  const double T = a.temp.value_or(cfg.T);
  const double B0 = a.field.value_or(cfg.Bz);
  std::vector<double> fields{B0};
  if (a.sweep_to) {
    if (a.sweep_points < 2) throw nvclock::ConfigError("--sweep-points must be >= 2");
    fields.clear();
    for (int i = 0; i < a.sweep_points; ++i) fields.push_back(B0 + (*a.sweep_to - B0) * i / (a.sweep_points - 1));
  }
  CsvTable t({"Bz_g", "T_k", "f_plus_hz", "f_minus_hz", "f1_hz", "f2_hz", "d_half_sum_hz", "q_half_sum_hz",
              "approx_f_plus_hz", "approx_f_minus_hz", "approx_f1_hz", "approx_f2_hz", "approx_d_half_sum_hz",
              "approx_q_half_sum_hz"});
  for (double B : fields) {
    const auto q = nvclock::transition_frequencies(cfg.constants, B, T);
    const auto p = nvclock::approx_frequencies(cfg.constants, B, T);
    t.add_row({B, T, q.f_plus, q.f_minus, q.f1, q.f2, q.d_half_sum(), q.q_half_sum(), p.quartet.f_plus,
               p.quartet.f_minus, p.quartet.f1, p.quartet.f2, p.d_half_sum, p.q_half_sum});
  }
  std::cout << t.str();
  Outputs out(g, "frequencies", cfg);
  out.table("frequencies", t);
  out.commit();
  return kOk;
}

struct SpectrumArgs {
  bool single = false;
  bool cycled = false;
  bool perfect_echo = false;
  std::optional<double> area_scale;
  std::optional<double> fwhm;
  std::optional<std::size_t> points;
  bool write_scan = false;
};

nvclock::ScanSettings scan_settings(const nvclock::AppConfig& cfg, const SpectrumArgs& a) {
  nvclock::ScanSettings s = cfg.spectrum.scan;
  const double scale = a.area_scale.value_or(cfg.spectrum.area_scale);
  s.areas = s.areas.scaled(scale);
  if (a.single) s.scheme = nvclock::single_phase_scheme();
  if (a.cycled) s.scheme = nvclock::ttzfs8_scheme();
  if (a.perfect_echo) s.perfect_echo = true;
  if (a.fwhm) s.distribution.fwhm = *a.fwhm;
  if (a.points) s.n_points = *a.points;
  return s;
}

int cmd_spectrum(const Globals& g, const SpectrumArgs& a) {
  if (a.single && a.cycled) throw nvclock::ConfigError("--single-phase and --cycled are exclusive");
  const auto cfg = load(g);
  const auto s = scan_settings(cfg, a);
  const auto scan = nvclock::simulate_scan(s, threads(g));
  const auto spec = nvclock::amplitude_spectrum(scan, {cfg.spectrum.window, cfg.spectrum.zero_pad_factor});
  const auto rep = nvclock::analyse_components(spec, s.tones);

  CsvTable t({"freq_hz", "value"});
  for (std::size_t k = 0; k < spec.frequency.size(); ++k) t.add_row({spec.frequency[k], spec.amplitude[k]});
  CsvTable lines({"freq_hz", "amplitude", "relative_db", "label"});
  for (const auto& l : rep.unwanted) lines.add_row({fmt(l.frequency), fmt(l.amplitude), fmt(l.relative_db), l.label});

  std::cout << "scheme: " << s.scheme.id << (s.perfect_echo ? " (exact echo)" : "") << "\n"
            << "rabi_fwhm: " << s.distribution.fwhm << "\n"
            << "desired_freq_hz: " << fmt(rep.desired_frequency) << "\n"
            << "desired_amplitude: " << fmt(rep.desired_amplitude) << "\n";
  for (const auto& l : rep.unwanted) {
    std::cout << "  line " << std::setw(12) << fmt(l.frequency) << " Hz  " << std::setw(8) << std::fixed
              << std::setprecision(1) << l.relative_db << " dB  " << l.label << "\n";
    std::cout.unsetf(std::ios::floatfield);
  }
  std::cout << "suppression_db: " << std::fixed << std::setprecision(1) << -rep.worst_db << "\n";
  std::cout.unsetf(std::ios::floatfield);

  Outputs out(g, "spectrum", cfg);
  out.table("spectrum", t);
  out.table("spectrum_lines", lines);
  if (a.write_scan) {
    CsvTable f({"tau_s", "value"});
    for (std::size_t i = 0; i < scan.taus.size(); ++i) f.add_row({scan.taus[i], scan.signals[i]});
    out.table("scan", f);
  }
  out.commit();
  return kOk;
}

struct FringesArgs {
  bool model = false;
  SpectrumArgs scan;
};

int cmd_fringes(const Globals& g, const FringesArgs& a) {
  const auto cfg = load(g);
  nvclock::FringeScan scan;
  if (a.model) {
    const auto& f = cfg.fringes;
    scan = nvclock::synthetic_fringes(f.model, f.tau_start, f.tau_step, f.n_points, f.noise, cfg.seed);
  } else {
    scan = nvclock::simulate_scan(scan_settings(cfg, a.scan), threads(g));
  }
  CsvTable t({"tau_s", "value"});
  for (std::size_t i = 0; i < scan.taus.size(); ++i) t.add_row({scan.taus[i], scan.signals[i]});
  Outputs out(g, "fringes", cfg);
  out.table("fringes", t);
  out.commit();
  std::cout << "points: " << scan.taus.size() << "\n";
  return kOk;
}

struct FitArgs {
  std::string input;
  std::optional<double> prior;
};

int cmd_fit(const Globals& g, const FitArgs& a) {
  const auto cfg = load(g);
  const auto data = nvclock::read_csv(a.input);
  if (data.columns.size() < 2) throw nvclock::ConfigError("fit input needs tau_s,value columns");
  nvclock::FringeScan scan;
  scan.taus = data.columns[0];
  scan.signals = data.columns[1];
  nvclock::FitOptions opt;
  opt.frequency_prior = a.prior;
  const auto fit = nvclock::fit_fringe(scan, opt);
  const auto& m = fit.params;
  const auto& e = fit.std_errors;
  CsvTable t({"parameter", "value", "std_error"});
  t.add_row({"S0", fmt(m.S0), fmt(e.S0)});
  t.add_row({"S1", fmt(m.S1), fmt(e.S1)});
  t.add_row({"T2_s", fmt(m.T2), fmt(e.T2)});
  t.add_row({"p", fmt(m.p), fmt(e.p)});
  t.add_row({"f_hz", fmt(m.f), fmt(e.f)});
  t.add_row({"phi_rad", fmt(m.phi), fmt(e.phi)});
  t.add_row({"residual_norm", fmt(fit.residual_norm), ""});
  t.add_row({"rms_residual", fmt(fit.rms_residual), ""});
  t.add_row({"iterations", std::to_string(fit.iterations), ""});
  for (const auto& [k, v, s] : std::vector<std::tuple<std::string, double, double>>{
           {"S0", m.S0, e.S0}, {"S1", m.S1, e.S1}, {"T2_s", m.T2, e.T2}, {"p", m.p, e.p}, {"f_hz", m.f, e.f},
           {"phi_rad", m.phi, e.phi}}) {
    std::cout << k << ": " << fmt(v) << " +- " << fmt(s) << "\n";
  }
  std::cout << "rms_residual: " << fmt(fit.rms_residual) << "\n";
  Outputs out(g, "fit", cfg);
  out.table("fit", t);
  out.commit();
  return kOk;
}

struct ClockArgs {
  std::optional<std::string> mode;
  std::optional<std::size_t> cycles;
  bool compare = false;
};

CsvTable allan_table(const std::vector<std::string>& names, const std::vector<nvclock::AllanCurve>& curves) {
  std::vector<std::string> header{"tau_s"};
  for (const auto& n : names) header.push_back("sigma_" + n);
  header.push_back("n");
  CsvTable t(header);
  const auto& ref = curves.front();
  for (std::size_t i = 0; i < ref.taus.size(); ++i) {
    std::vector<double> row{ref.taus[i]};
    for (const auto& c : curves) row.push_back(c.sigmas.at(i));
    row.push_back(static_cast<double>(ref.n_samples[i]));
    t.add_row(row);
  }
  return t;
}

int cmd_clock_run(const Globals& g, const ClockArgs& a) {
  auto cfg = load(g);
  if (a.mode) cfg.clock.mode = nvclock::feedback_mode_from_string(*a.mode);
  if (a.cycles) cfg.clock.n_cycles = *a.cycles;
  cfg.clock.validate();
  const auto& sc = cfg.clock;
  const auto taus = nvclock::log_spaced_taus(sc.t_cycle, sc.n_cycles, cfg.allan_per_decade);
  Outputs out(g, a.compare ? "clock-run --compare" : "clock-run", cfg);

  if (a.compare) {
    nvclock::StrategyOptions opt;
    opt.per_decade = cfg.allan_per_decade;
    const auto runs = nvclock::strategy_comparison(sc, opt, threads(g));
    std::vector<std::string> names;
    std::vector<nvclock::AllanCurve> curves;
    for (const auto& r : runs) {
      names.push_back(r.name);
      curves.push_back(r.allan);
    }
    const auto t = allan_table(names, curves);
    out.table("comparison_allan", t);
    std::cout << "variant                    sigma(1 s)     sigma(tau_max)\n";
    for (const auto& r : runs) {
      std::cout << std::left << std::setw(26) << r.name << " " << std::setw(14) << fmt(r.allan.sigmas.front())
                << " " << fmt(r.allan.sigmas.back()) << "\n";
    }
  } else {
    const auto s = nvclock::run_scenario(sc);
    CsvTable ts({"t_s", "frac_D", "frac_Q", "frac_psi", "true_temperature_k", "true_lo_offset", "flagged"});
    for (std::size_t i = 0; i < s.size(); ++i) {
      ts.add_row({s.timestamps[i], s.frac_D[i], s.frac_Q[i], s.frac_psi[i], s.true_temperature[i],
                  s.true_LO_offset[i], s.flagged[i] ? 1.0 : 0.0});
    }
    const auto units = nvclock::temperature_in_units(s, sc.constants);
    CsvTable tu({"t_s", "temperature_from_D_k", "temperature_from_Q_k", "difference_k"});
    for (std::size_t i = 0; i < s.size(); ++i) {
      tu.add_row({s.timestamps[i], units.from_D[i], units.from_Q[i], units.difference[i]});
    }
    const std::vector<nvclock::AllanCurve> curves{
        nvclock::allan_deviation(s.frac_D, sc.t_cycle, taus), nvclock::allan_deviation(s.frac_Q, sc.t_cycle, taus),
        nvclock::allan_deviation(s.frac_psi, sc.t_cycle, taus),
        nvclock::allan_deviation(s.clock_error(), sc.t_cycle, taus)};
    out.table("timeseries", ts);
    out.table("temperature_units", tu);
    out.table("allan", allan_table({"D", "Q", "psi", "clock_error"}, curves));
    std::cout << "mode: " << nvclock::to_string(sc.mode) << "\n"
              << "cycles: " << s.size() << "\n"
              << "flagged: " << s.flagged_count() << "\n"
              << "sigma_psi(1 s): " << fmt(curves[2].sigmas.front()) << "\n"
              << "sigma_psi(" << fmt(curves[2].taus.back()) << " s): " << fmt(curves[2].sigmas.back()) << "\n";
  }
  out.commit();
  return kOk;
}

struct AllanArgs {
  std::string input;
  std::optional<double> dt;
  int per_decade = 10;
};

int cmd_allan(const Globals& g, const AllanArgs& a) {
  const auto cfg = load(g);
  const auto data = nvclock::read_csv(a.input);
  if (data.columns.size() < 2) throw nvclock::ConfigError("allan input needs t_s,value columns");
  const auto& t = data.columns[0];
  const auto& y = data.columns[1];
  if (y.size() < 3) throw nvclock::DomainError("allan input needs at least 3 samples");
  const double dt = a.dt.value_or(t[1] - t[0]);
  const auto curve = nvclock::allan_deviation(y, dt, nvclock::log_spaced_taus(dt, y.size(), a.per_decade));
  CsvTable out_t({"tau_s", "sigma", "n"});
  for (std::size_t i = 0; i < curve.taus.size(); ++i) {
    out_t.add_row({curve.taus[i], curve.sigmas[i], static_cast<double>(curve.n_samples[i])});
  }
  for (const auto& w : curve.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << out_t.str();
  Outputs out(g, "allan", cfg);
  out.table("allan", out_t);
  out.commit();
  return kOk;
}

struct BudgetArgs {
  bool model_temperature = false;
  bool cryogenic = false;
};

int cmd_budget(const Globals& g, const BudgetArgs& a) {
  const auto cfg = load(g);
  auto rows = cfg.budget;
  for (auto& r : rows) {
    if (r.parameter != "temperature") continue;
    if (a.model_temperature) r = nvclock::model_temperature_sensitivities(cfg.constants, r.instability.value_or(10.0));
    if (a.cryogenic) r = nvclock::scaled_temperature_row(r, 1.0 / 15.0);
  }
  const auto table = nvclock::budget_table(rows);
  CsvTable t({"parameter", "unit", "instability", "target", "sensitivity_per_unit", "contribution", "upper_bound"});
  for (const auto& e : table.entries) {
    t.add_row({e.parameter, e.unit, fmt(e.instability), "D", fmt(e.sensitivity_D), fmt(e.contribution_D), "0"});
    t.add_row({e.parameter, e.unit, fmt(e.instability), "Q", fmt(e.sensitivity_Q), fmt(e.contribution_Q), "0"});
    t.add_row({e.parameter, e.unit, fmt(e.instability), "psi", fmt(e.sensitivity_psi), fmt(e.contribution_psi),
               e.psi_upper_bound ? "1" : "0"});
  }
  t.add_row({"total_rss", "", "", "D", "", fmt(table.total_D), "0"});
  t.add_row({"total_rss", "", "", "Q", "", fmt(table.total_Q), "0"});
  t.add_row({"total_rss", "", "", "psi", "", fmt(table.total_psi), "0"});
  std::cout << t.str();
  Outputs out(g, "budget", cfg);
  out.table("budget", t);
  out.commit();
  return kOk;
}

struct SweepArgs {
  std::optional<std::string> parameter;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
  auto cfg = load(g);
  if (a.parameter) cfg.sweep.parameter = nvclock::sweep_parameter_from_string(*a.parameter);
  const auto res = nvclock::sensitivity_sweep(cfg.sweep.base, cfg.sweep.parameter, cfg.sweep.grid(), threads(g));
  CsvTable t({"value", "frac_D", "frac_Q", "frac_psi", "flagged"});
  for (const auto& r : res.rows) t.add_row({r.value, r.frac_D, r.frac_Q, r.frac_psi, r.flagged ? 1.0 : 0.0});
  CsvTable s({"target", "central_slope", "fit_linear", "fit_quadratic", "quadratic_dominant", "no_signal",
              "non_monotonic"});
  auto add = [&](const char* name, const nvclock::SlopeReport& r) {
    s.add_row({name, fmt(r.slope), fmt(r.linear), fmt(r.quadratic), r.quadratic_dominant ? "1" : "0",
               r.no_signal ? "1" : "0", r.non_monotonic ? "1" : "0"});
  };
  add("D", res.D);
  add("Q", res.Q);
  add("psi", res.psi);
  std::cout << "parameter: " << nvclock::to_string(res.parameter) << "\n" << s.str();
  Outputs out(g, "sweep", cfg);
  out.table("sweep", t);
  out.table("sweep_slopes", s);
  out.commit();
  return kOk;
}

int cmd_coefficients(const Globals& g) {
  const auto cfg = load(g);
  const auto& c = cfg.constants;
  CsvTable t({"quantity", "value", "unit"});
  t.add_row({"alpha", fmt(nvclock::alpha_from_lambdas(c)), "1"});
  t.add_row({"one_minus_alpha", fmt(1.0 - nvclock::alpha_from_lambdas(c)), "1"});
  t.add_row({"normalization", fmt(nvclock::composite_normalization(c)), "1/K"});
  t.add_row({"lambda_D_minus_lambda_Q", fmt(c.lambda_D - c.lambda_Q), "1/K"});
  t.add_row({"second_order_coefficient", fmt(nvclock::second_order_coefficient(c)), "1"});
  std::cout << t.str();
  Outputs out(g, "coefficients", cfg);
  out.table("coefficients", t);
  out.commit();
  return kOk;
}

int cmd_config(const Globals& g) {
  const auto cfg = load(g);
  std::cout << nvclock::to_json(cfg).dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nvclock: composite D/Q spin-clock simulator and analysis toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Override the random seed");
  app.add_option("--out-dir", g.out_dir, "Directory for output files");
  app.add_option("--threads", g.threads, "Worker threads (0: all cores)");
  app.add_option("--format", g.format, "Output file format")->check(CLI::IsMember({"csv", "json"}));

  FrequenciesArgs fa;
  auto* freq = app.add_subcommand("frequencies", "Transition frequencies, exact and perturbative");
  freq->add_option("--field", fa.field, "Axial field (G)");
  freq->add_option("--temp", fa.temp, "Temperature (K)");
  freq->add_option("--sweep-to", fa.sweep_to, "Sweep the field from --field to this value (G)");
  freq->add_option("--sweep-points", fa.sweep_points, "Points in the field sweep");

  SpectrumArgs sa;
  auto add_scan_flags = [](CLI::App* cmd, SpectrumArgs& s) {
    cmd->add_flag("--single-phase", s.single, "Uncycled sequence");
    cmd->add_flag("--cycled", s.cycled, "Eight-configuration phase cycle");
    cmd->add_flag("--perfect-echo", s.perfect_echo, "Exact 2pi echo; area errors on the pi/2 pulses only");
    cmd->add_option("--area-scale", s.area_scale, "Scale applied to all pulse areas");
    cmd->add_option("--rabi-fwhm", s.fwhm, "Fractional FWHM of the Rabi distribution");
    cmd->add_option("--points", s.points, "Number of tau points");
  };
  auto* spec = app.add_subcommand("spectrum", "Amplitude spectrum of a simulated tau scan");
  add_scan_flags(spec, sa);
  spec->add_flag("--write-scan", sa.write_scan, "Also write the time-domain scan");

  FringesArgs fr;
  auto* fringes = app.add_subcommand("fringes", "Write a fringe scan (pulse engine or analytic model)");
  add_scan_flags(fringes, fr.scan);
  fringes->add_flag("--model", fr.model, "Use the analytic decaying-fringe model of the 'fringes' section");

  FitArgs fit;
  auto* fitc = app.add_subcommand("fit", "Fit a decaying fringe to a tau_s,value CSV");
  fitc->add_option("input", fit.input, "Input CSV")->required()->check(CLI::ExistingFile);
  fitc->add_option("--frequency-prior", fit.prior, "Initial fringe frequency (Hz)");

  ClockArgs ca;
  auto* clock = app.add_subcommand("clock-run", "Interleaved D/Q clock simulation");
  clock->add_option("--mode", ca.mode, "open_loop, composite, D_only, Q_only, thermometer_compensated");
  clock->add_option("--cycles", ca.cycles, "Number of cycles");
  clock->add_flag("--compare", ca.compare, "Run the strategy comparison");

  AllanArgs aa;
  auto* allan = app.add_subcommand("allan", "Overlapping Allan deviation of a t_s,value CSV");
  allan->add_option("input", aa.input, "Input CSV")->required()->check(CLI::ExistingFile);
  allan->add_option("--dt", aa.dt, "Sample interval (s); default from the first two timestamps");
  allan->add_option("--per-decade", aa.per_decade, "Taus per decade");

  BudgetArgs ba;
  auto* budget = app.add_subcommand("budget", "Instability budget");
  budget->add_flag("--model-temperature", ba.model_temperature, "Temperature sensitivities from the constants");
  budget->add_flag("--cryogenic", ba.cryogenic, "Temperature sensitivity of D reduced 15x");

  SweepArgs swa;
  auto* sweep = app.add_subcommand("sweep", "Sensitivity sweep of one parameter");
  sweep->add_option("--parameter", swa.parameter, "temperature, Bz, tau_D, tau_Q, prep_fidelity, area_scale");

  auto* coeff = app.add_subcommand("coefficients", "Composite-clock coefficients");
  auto* config = app.add_subcommand("config", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*freq) return cmd_frequencies(g, fa);
    if (*spec) return cmd_spectrum(g, sa);
    if (*fringes) return cmd_fringes(g, fr);
    if (*fitc) return cmd_fit(g, fit);
    if (*clock) return cmd_clock_run(g, ca);
    if (*allan) return cmd_allan(g, aa);
    if (*budget) return cmd_budget(g, ba);
    if (*sweep) return cmd_sweep(g, swa);
    if (*coeff) return cmd_coefficients(g);
    if (*config) return cmd_config(g);
  } catch (const nvclock::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const nvclock::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const nvclock::ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
