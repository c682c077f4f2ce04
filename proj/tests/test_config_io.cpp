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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "nvclock/config.hpp"
#include "nvclock/io.hpp"

namespace {

namespace fs = std::filesystem;
using nvclock::Json;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nvclock_test_config_io";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Config, DefaultsRoundTrip) {
  const Json j = nvclock::to_json(nvclock::AppConfig{});
  const auto c = nvclock::from_json(j);
  EXPECT_EQ(nvclock::to_json(c), j);
  EXPECT_EQ(nvclock::from_json(Json::object()).clock.n_cycles, nvclock::AppConfig{}.clock.n_cycles);
}

TEST(Config, PartialOverride) {
  const auto c = nvclock::from_json(Json::parse(
      R"({"seed": 9, "clock": {"mode": "D_only", "lo_noise": {"magnitude_frac": 1e-9}}, "operating_point": {"Bz_g": 480}})"));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.clock.seed, 9u);
  EXPECT_EQ(c.clock.mode, nvclock::FeedbackMode::D_only);
  EXPECT_DOUBLE_EQ(c.clock.lo_magnitude, 1e-9);
  EXPECT_EQ(c.clock.lo_kind, nvclock::NoiseKind::white);
  EXPECT_DOUBLE_EQ(c.Bz, 480.0);
  EXPECT_DOUBLE_EQ(c.T, 297.0);
}

TEST(Config, ConstantsPropagate) {
  const auto c = nvclock::from_json(Json::parse(R"({"constants": {"lambda_Q_per_k": -8e-6}})"));
  EXPECT_DOUBLE_EQ(c.constants.lambda_Q, -8e-6);
  EXPECT_DOUBLE_EQ(c.clock.constants.lambda_Q, -8e-6);
  EXPECT_DOUBLE_EQ(c.sweep.base.constants.lambda_Q, -8e-6);
}

TEST(Config, Rejections) {
  auto bad = [](const char* text) { return nvclock::from_json(Json::parse(text)); };
  EXPECT_THROW(bad(R"({"schema_version": 2})"), nvclock::ConfigError);
  EXPECT_THROW(bad(R"({"colck": {}})"), nvclock::ConfigError);
  EXPECT_THROW(bad(R"({"clock": {"n_cycle": 5}})"), nvclock::ConfigError);
  EXPECT_THROW(bad(R"({"clock": {"n_cycles": "many"}})"), nvclock::ConfigError);
  EXPECT_THROW(bad(R"({"clock": {"n_cycles": 10}})"), nvclock::ConfigError);
  EXPECT_THROW(bad(R"({"clock": {"mode": "both"}})"), nvclock::ConfigError);
  EXPECT_THROW(bad(R"({"constants": {"lambda_Q_per_k": -25.3e-6}})"), nvclock::ConfigError);
  EXPECT_THROW(bad(R"({"spectrum": {"scheme": "ttzfs4"}})"), nvclock::ConfigError);
  EXPECT_THROW(bad(R"({"budget": {"rows": [{"parameter": "x", "colour": 1}]}})"), nvclock::ConfigError);
  EXPECT_THROW(bad("[1, 2]"), nvclock::ConfigError);
}

TEST(Config, BudgetRowsWithGapsLoadThenFail) {
  const auto c = nvclock::from_json(
      Json::parse(R"({"budget": {"rows": [{"parameter": "t", "unit": "mK", "instability": 1,
                     "sensitivity_D_per_unit": 1e-9, "sensitivity_Q_per_unit": null,
                     "sensitivity_psi_per_unit": 1e-9}]}})"));
  ASSERT_EQ(c.budget.size(), 1u);
  EXPECT_FALSE(c.budget[0].sensitivity_Q.has_value());
  EXPECT_THROW(nvclock::budget_table(c.budget), nvclock::ConfigError);
}

TEST(Config, LoadFromFile) {
  const auto path = scratch("cfg.json");
  {
    std::ofstream out(path);
    out << R"({"schema_version": 1, "seed": 3})";
  }
  EXPECT_EQ(nvclock::load_config(path.string()).seed, 3u);
  {
    std::ofstream out(path);
    out << "{not json";
  }
  EXPECT_THROW(nvclock::load_config(path.string()), nvclock::ConfigError);
  EXPECT_THROW(nvclock::load_config((path.parent_path() / "missing.json").string()), nvclock::ConfigError);
}

TEST(Config, HashIgnoresKeyOrderAndTracksValues) {
  const Json a = Json::parse(R"({"x": 1, "y": {"b": 2, "a": 3}})");
  const Json b = Json::parse(R"({"y": {"a": 3, "b": 2}, "x": 1})");
  const Json c = Json::parse(R"({"x": 1, "y": {"b": 2, "a": 4}})");
  EXPECT_EQ(nvclock::config_hash(a), nvclock::config_hash(b));
  EXPECT_NE(nvclock::config_hash(a), nvclock::config_hash(c));
  EXPECT_EQ(nvclock::config_hash(a).size(), 16u);
  // FNV-1a 64 of the empty object "{}".
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : std::string("{}")) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  EXPECT_EQ(nvclock::config_hash(Json::object()), std::string(buf));
}

TEST(Config, SweepGrid) {
  nvclock::SweepConfig s;
  s.parameter = nvclock::SweepParameter::Bz;
  s.half_span = 5.0;
  s.points = 5;
  EXPECT_EQ(s.grid(), (std::vector<double>{470.0, 472.5, 475.0, 477.5, 480.0}));
  s.points = 4;
  EXPECT_THROW(s.grid(), nvclock::ConfigError);
  s.values = {1.0, 2.0, 3.0};
  EXPECT_EQ(s.grid(), s.values);
}

TEST(Csv, NumbersRoundTripExactly) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  nvclock::CsvTable t({"a", "b"});
  std::vector<double> a, b;
  for (int i = 0; i < 200; ++i) {
    a.push_back(u(gen) * 1e-12);
    b.push_back(u(gen));
    t.add_row(std::vector<double>{a.back(), b.back()});
  }
  const auto path = scratch("round.csv");
  nvclock::write_file_atomic(path, t.str());
  EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
  const auto d = nvclock::read_csv(path.string());
  EXPECT_EQ(d.header, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(d.columns[0], a);
  EXPECT_EQ(d.columns[1], b);
}

TEST(Csv, RowWidthChecked) {
  nvclock::CsvTable t({"a", "b"});
  EXPECT_THROW(t.add_row(std::vector<double>{1.0}), nvclock::Error);
}

TEST(Csv, MalformedInputRejected) {
  const auto path = scratch("bad.csv");
  {
    std::ofstream out(path);
    out << "tau_s,signal\n1e-9,0.5\n2e-9,abc\n";
  }
  EXPECT_THROW(nvclock::read_csv(path.string()), nvclock::ConfigError);
  {
    std::ofstream out(path);
    out << "tau_s,signal\n1e-9\n";
  }
  EXPECT_THROW(nvclock::read_csv(path.string()), nvclock::ConfigError);
  {
    std::ofstream out(path);
    out << "tau_s, signal\r\n1e-9, 0.5\r\n\r\n";
  }
  const auto d = nvclock::read_csv(path.string());
  EXPECT_EQ(d.header[1], "signal");
  EXPECT_EQ(d.columns[1], std::vector<double>{0.5});
}

TEST(Manifest, Fields) {
  nvclock::RunManifest m{"1.0.0", "clock-run", "abc", 7, "t0", "t1", {"a.csv"}};
  const auto j = m.to_json();
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 7u);
  EXPECT_EQ(j.at("outputs").at(0), "a.csv");
  EXPECT_EQ(nvclock::utc_timestamp().size(), 20u);
}

}  // namespace
