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

#include <cmath>
#include <random>

#include "nvclock/clock_composer.hpp"

namespace {

using nvclock::QuadratureReadout;
using nvclock::SpinConstants;
using nvclock::Target;

constexpr double kPi = 3.14159265358979323846;

TEST(NormalizedReadout, Basics) {
  EXPECT_DOUBLE_EQ(nvclock::normalized_readout({1.0, 1.0, 1e-6, 1e-6, 0.0}), 0.0);
  EXPECT_NEAR(nvclock::normalized_readout({1.02, 1.00, 1e-6, 1e-6, 0.0}), 0.02, 1e-15);
  EXPECT_THROW(nvclock::normalized_readout({1.0, -0.5, 1e-6, 1e-6, 0.5}), nvclock::DomainError);
  EXPECT_THROW(nvclock::normalized_readout({1.0, 1.0, 0.0, 1e-6, 0.0}), nvclock::DomainError);
}

TEST(NormalizedReadout, OffsetScalesInversely) {
  const double diff = 0.03;
  for (double offset : {0.0, 0.5, 2.0, 7.5}) {
    const double vb = 1.0;
    const double s = nvclock::normalized_readout({vb + diff, vb, 1e-6, 1e-6, offset});
    EXPECT_NEAR(s * (vb + offset), diff, 1e-15);
  }
}

TEST(Detuning, ArctangentExamples) {
  EXPECT_NEAR(nvclock::detuning_from_quadratures({0.3, 0.3, 1.0, Target::D}), 0.125, 1e-15);
  EXPECT_DOUBLE_EQ(nvclock::detuning_from_quadratures({0.3, 0.0, 1.0, Target::D}), 0.0);
  EXPECT_THROW(nvclock::detuning_from_quadratures({0.0, 0.0, 1.0, Target::D}), nvclock::DomainError);
}

TEST(Detuning, ForwardModelRoundTrip) {
  const auto q = nvclock::forward_quadratures(37.0, 1e-3, 0.04);
  EXPECT_NEAR(nvclock::detuning_from_quadratures(q), 37.0, 37.0 * 1e-9);
  // Identity across the capture range, any amplitude.
  const double tau = 2e-6;
  for (double frac = -0.99; frac <= 0.99; frac += 0.03) {
    const double d = frac / (4.0 * tau);
    const auto r = nvclock::forward_quadratures(d, tau, 0.013);
    EXPECT_NEAR(nvclock::detuning_from_quadratures(r), d, 1e-9 * std::max(std::abs(d), 1.0));
  }
}

TEST(Detuning, BranchCutFlagged) {
  const double tau = 1e-3;
  EXPECT_FALSE(nvclock::extract_detuning(nvclock::forward_quadratures(0.2 / tau, tau, 1.0)).near_branch_cut);
  EXPECT_TRUE(nvclock::extract_detuning(nvclock::forward_quadratures(0.3 / tau, tau, 1.0)).near_branch_cut);
}

TEST(Detuning, UnwrappingFollowsLargeExcursions) {
  const double tau = 1e-3;
  std::vector<QuadratureReadout> series;
  std::vector<double> truth;
  for (int i = 0; i < 200; ++i) {
    const double d = 900.0 * std::sin(i * 0.03);  // up to 3.6 capture ranges
    truth.push_back(d);
    series.push_back(nvclock::forward_quadratures(d, tau, 1.0));
  }
  const auto u = nvclock::unwrap_detunings(series);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    EXPECT_NEAR(u.values[i], truth[i], 1e-9) << i;
    EXPECT_FALSE(u.flagged[i]);
  }
}

TEST(Alpha, Examples) {
  EXPECT_NEAR(nvclock::alpha_from_lambdas(-25.3, -7.17), 1.3955, 0.0005);
  EXPECT_DOUBLE_EQ(nvclock::alpha_from_lambdas(-25.3, 25.3), 0.5);
  EXPECT_DOUBLE_EQ(nvclock::alpha_from_lambdas(-25.3, 0.0), 1.0);
  try {
    nvclock::alpha_from_lambdas(-7.0, -7.0);
    FAIL() << "expected DomainError";
  } catch (const nvclock::DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("approach infinity"), std::string::npos);
  }
}

TEST(Composite, WeightsSumToOne) {
  const double a = nvclock::alpha_from_lambdas(SpinConstants{});
  EXPECT_DOUBLE_EQ(a + (1.0 - a), 1.0);
  for (double x : {1e-9, -3e-7, 0.0}) EXPECT_NEAR(nvclock::composite_correction(x, x, SpinConstants{}), x, 1e-24);
}

TEST(Composite, FirstOrderTemperatureNull) {
  const SpinConstants c;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1e-6, 1e-6);
  for (int i = 0; i < 200; ++i) {
    const double fD = u(gen), fQ = u(gen), t = 1e4 * u(gen);
    const double base = nvclock::composite_correction(fQ, fD, c);
    const double moved = nvclock::composite_correction(fQ + c.lambda_Q * t, fD + c.lambda_D * t, c);
    EXPECT_NEAR(moved, base, 1e-12 * 1e-6 + 1e-12 * std::abs(base));
  }
  EXPECT_NEAR(nvclock::composite_correction(c.lambda_Q * 0.01, c.lambda_D * 0.01, c), 0.0, 1e-12 * 1e-7);
}

TEST(Composite, TemperatureFormAgrees) {
  const SpinConstants c;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1e-6, 1e-6);
  for (int i = 0; i < 100; ++i) {
    const double fD = u(gen), fQ = u(gen);
    const double a = nvclock::composite_correction(fQ, fD, c);
    const double b = nvclock::composite_correction_temperature_form(fQ, fD, c);
    EXPECT_NEAR(a, b, 1e-12 * std::max(std::abs(a), 1e-15));
  }
}

TEST(Composite, NormalizationAndCoefficients) {
  const SpinConstants c;
  EXPECT_NEAR(nvclock::composite_normalization(c) * 1e6, -10.0, 0.1);  // ppb/mK
  EXPECT_NEAR(c.lambda_D * c.lambda_Q / (c.lambda_D - c.lambda_Q) * 1e6, -10.0, 0.2);
  EXPECT_NEAR((c.lambda_D - c.lambda_Q) * 1e6, -18.13, 0.18);
}

TEST(Composite, SecondOrderResidualIsCubic) {
  // Synthetic cubic-free second-order model: the corrected residual then
  // comes from O(dT^3) cross terms only.
  SpinConstants c;
  c.lambda_D2 = 3e-8;
  c.lambda_Q2 = -1e-8;
  auto residual = [&](double dT) {
    const double fD = c.lambda_D * dT + 0.5 * c.lambda_D2 * dT * dT;
    const double fQ = c.lambda_Q * dT + 0.5 * c.lambda_Q2 * dT * dT;
    return std::abs(nvclock::composite_correction_2nd(fQ, fD, c));
  };
  // Least-squares slope in log-log over 1 .. 100 mK.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double dT = 1e-3; dT <= 0.1 + 1e-12; dT *= std::pow(10.0, 0.25)) {
    const double x = std::log(dT), y = std::log(residual(dT));
    sx += x; sy += y; sxx += x * x; sxy += x * y; ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(slope, 3.0, 0.2);
  // First-order combination alone leaves a quadratic residual.
  const double fD = c.lambda_D * 0.05 + 0.5 * c.lambda_D2 * 0.0025;
  const double fQ = c.lambda_Q * 0.05 + 0.5 * c.lambda_Q2 * 0.0025;
  EXPECT_GT(std::abs(nvclock::composite_correction(fQ, fD, c)), 100.0 * residual(0.05));
  EXPECT_DOUBLE_EQ(nvclock::composite_correction_2nd(0.0, 0.0, c), nvclock::composite_correction(0.0, 0.0, c));
}

TEST(Temperature, EstimateAndLoNull) {
  const SpinConstants c;
  EXPECT_DOUBLE_EQ(nvclock::temperature_estimate(3e-9, 3e-9, c), 0.0);
  EXPECT_NEAR(nvclock::temperature_estimate(c.lambda_D * 0.01, c.lambda_Q * 0.01, c), 0.01, 1e-11);
  for (double x : {1e-8, -4e-7}) {
    const double a = nvclock::temperature_estimate(2e-7 + x, -1e-7 + x, c);
    const double b = nvclock::temperature_estimate(2e-7, -1e-7, c);
    EXPECT_NEAR(a, b, 1e-12 * std::abs(b));
  }
}

TEST(Thermometer, Compensation) {
  const SpinConstants c;
  EXPECT_DOUBLE_EQ(nvclock::compensate_with_thermometer(123.0, 0.0, c), 123.0);
  const double dT = 0.02;
  EXPECT_NEAR(nvclock::compensate_with_thermometer(c.lambda_D * c.D0 * dT, dT, c), 0.0, 1e-9);
  const double eps = 3e-3;
  EXPECT_NEAR(nvclock::compensate_with_thermometer(c.lambda_D * c.D0 * dT, dT + eps, c),
              -c.lambda_D * c.D0 * eps, 1e-9);
}

TEST(Feedback, ZeroDetuningsGiveZero) {
  const SpinConstants c;
  const auto d = nvclock::forward_quadratures(0.0, 1.68e-6, 0.05, Target::D);
  const auto q = nvclock::forward_quadratures(0.0, 0.881e-3, 0.05, Target::Q);
  EXPECT_DOUBLE_EQ(nvclock::feedback_shift(d, q, c, 10e6), 0.0);
}

TEST(Feedback, LoOffsetRoundTrip) {
  const SpinConstants c;
  const double psi = 10e6;
  for (double x : {2e-9, -7e-8, 1e-6}) {
    const auto d = nvclock::forward_quadratures(c.D0 * x, 1.68e-6, 0.05, Target::D);
    const auto q = nvclock::forward_quadratures(c.Q0 * x, 0.881e-3, 0.02, Target::Q);
    const double shift = nvclock::feedback_shift(d, q, c, psi);
    EXPECT_NEAR(shift / psi, x, 1e-9 * std::abs(x));
    const double via_composite = psi * nvclock::composite_correction(nvclock::detuning_from_quadratures(q) / c.Q0,
                                                                     nvclock::detuning_from_quadratures(d) / c.D0, c);
    EXPECT_NEAR(shift, via_composite, 1e-12 * std::abs(shift));
  }
}

TEST(Feedback, TemperatureStepCancels) {
  const SpinConstants c;
  const double dT = 0.05;
  const auto d = nvclock::forward_quadratures(c.lambda_D * c.D0 * dT, 1.68e-6, 0.05, Target::D);
  const auto q = nvclock::forward_quadratures(c.lambda_Q * c.Q0 * dT, 0.881e-3, 0.02, Target::Q);
  EXPECT_NEAR(nvclock::feedback_shift(d, q, c, 10e6) / 10e6, 0.0, 1e-15);
}

TEST(Budget, ReferenceRows) {
  const auto t = nvclock::budget_table(nvclock::default_budget_inputs());
  ASSERT_EQ(t.entries.size(), 5u);
  EXPECT_NEAR(t.entries[0].contribution_D, 250e-9, 1e-20);
  EXPECT_NEAR(t.entries[0].contribution_Q, 72e-9, 1e-20);
  EXPECT_TRUE(t.entries[0].psi_upper_bound);
  EXPECT_NEAR(t.entries[3].contribution_psi, 2.0e-9, 1e-20);
  EXPECT_NEAR(t.entries[4].contribution_D, 2.2e-9, 1e-20);
}

TEST(Budget, ContributionIsAbsoluteProduct) {
  nvclock::BudgetInput in{"x", "u", -2.0, 3e-9, -4e-9, 0.0, false};
  const auto t = nvclock::budget_table({in});
  EXPECT_DOUBLE_EQ(t.entries[0].contribution_D, 6e-9);
  EXPECT_DOUBLE_EQ(t.entries[0].contribution_Q, 8e-9);
  EXPECT_DOUBLE_EQ(t.total_psi, 0.0);
}

TEST(Budget, MissingEntriesRejected) {
  nvclock::BudgetInput in{"x", "u", 1.0, 3e-9, std::nullopt, 1e-9, false};
  EXPECT_THROW(nvclock::budget_table({in}), nvclock::ConfigError);
  EXPECT_THROW(nvclock::budget_table({}), nvclock::ConfigError);
}

TEST(Budget, ModelTemperatureRow) {
  const SpinConstants c;
  const auto row = nvclock::model_temperature_sensitivities(c);
  EXPECT_NEAR(*row.sensitivity_D, 25.3e-9, 1e-15);
  EXPECT_NEAR(*row.sensitivity_Q, 7.17e-9, 1e-15);
  EXPECT_LT(*row.sensitivity_psi, 1e-20);
  const auto cryo = nvclock::scaled_temperature_row(row, 1.0 / 15.0);
  EXPECT_NEAR(*cryo.sensitivity_D * 15.0, *row.sensitivity_D, 1e-20);
}

TEST(OptimalTau, ExponentialDecay) {
  EXPECT_DOUBLE_EQ(nvclock::optimal_tau(1.68e-6, 1.0), 1.68e-6);
  // tau exp(-(tau/T2)^p) is maximal at the returned value.
  const double T2 = 2.0, p = 1.5;
  const double t0 = nvclock::optimal_tau(T2, p);
  auto g = [&](double t) { return t * std::exp(-std::pow(t / T2, p)); };
  EXPECT_GT(g(t0), g(t0 * 1.01));
  EXPECT_GT(g(t0), g(t0 * 0.99));
}

}  // namespace
