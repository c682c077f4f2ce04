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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "nvclock/spin_model.hpp"
#include "support/oracles.hpp"

namespace {

using nvclock::SpinConstants;

TEST(SpinModel, HamiltonianMatchesKroneckerConstruction) {
  const SpinConstants c;
  for (double B : {0.0, 120.0, 475.0, -300.0}) {
    const auto h = nvclock::build_hamiltonian(c, B, 297.0);
    const auto ref = oracle::hamiltonian(c, B, 297.0);
    EXPECT_LT((h - ref).cwiseAbs().maxCoeff(), 1e-6) << "B = " << B;
  }
}

TEST(SpinModel, HamiltonianIsHermitian) {
  const auto h = nvclock::build_hamiltonian(SpinConstants{}, 475.0, 310.0);
  EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SpinModel, TransitionsMatchGenericEigensolver) {
  // Unlabelled spectrum from a full 9x9 solve must contain the labelled
  // energies.
  const SpinConstants c;
  const double B = 475.0;
  const auto ref = oracle::hamiltonian(c, B, 297.0);
  Eigen::SelfAdjointEigenSolver<oracle::M9> es(ref);
  std::vector<double> eig(es.eigenvalues().data(), es.eigenvalues().data() + 9);
  const auto e = nvclock::labelled_energies(c, B, 297.0);
  for (double v : e) {
    const auto it = std::min_element(eig.begin(), eig.end(),
                                     [v](double a, double b) { return std::abs(a - v) < std::abs(b - v); });
    EXPECT_LT(std::abs(*it - v), 1e-3);
  }
}

TEST(SpinModel, TemperatureModelSteps) {
  const SpinConstants c;
  const auto [D1, Q1] = nvclock::temperature_model(c, c.T0 + 1.0);
  const double dD = D1 - c.D0;
  const double dQ = Q1 - c.Q0;
  EXPECT_NEAR(dD, c.lambda_D * c.D0 + 0.5 * c.lambda_D2 * c.D0, 1e-6);
  EXPECT_NEAR(dD, -72e3, 1e3);  // about -72 kHz/K
  EXPECT_NEAR(dQ, 35.0, 1.0);   // about +35 Hz/K
  const auto [D0, Q0] = nvclock::temperature_model(c, c.T0);
  EXPECT_EQ(D0, c.D0);
  EXPECT_EQ(Q0, c.Q0);
}

TEST(SpinModel, TemperatureOutsideWindowRejected) {
  const SpinConstants c;
  EXPECT_THROW(nvclock::temperature_model(c, 50.0), nvclock::DomainError);
  EXPECT_THROW(nvclock::temperature_model(c, 450.0), nvclock::DomainError);
  EXPECT_NO_THROW(nvclock::temperature_model(c, 70.0));
  EXPECT_NO_THROW(nvclock::temperature_model(c, 400.0));
}

TEST(SpinModel, FieldOutsideRangeRejected) {
  EXPECT_THROW(nvclock::transition_frequencies(SpinConstants{}, 2500.0, 297.0), nvclock::DomainError);
}

TEST(SpinModel, InvalidConstantsRejected) {
  SpinConstants c;
  c.Q0 = 4.9e6;
  EXPECT_THROW(c.validate(), nvclock::ConfigError);
  c = SpinConstants{};
  c.lambda_Q = c.lambda_D;
  EXPECT_THROW(c.validate(), nvclock::ConfigError);
}

TEST(SpinModel, ZeroFieldNuclearTransitionsDegenerate) {
  const auto q = nvclock::transition_frequencies(SpinConstants{}, 0.0, 297.0);
  EXPECT_NEAR(q.f1, q.f2, 1e-6 * q.f1);
}

TEST(SpinModel, HalfSumTracksLambdaD) {
  const SpinConstants c;
  const double h = 0.01;
  const auto up = nvclock::transition_frequencies(c, 475.0, c.T0 + h);
  const auto dn = nvclock::transition_frequencies(c, 475.0, c.T0 - h);
  const double slope = (up.d_half_sum() - dn.d_half_sum()) / (2.0 * h);
  EXPECT_NEAR(slope / (c.lambda_D * c.D0), 1.0, 0.01);
}

TEST(SpinModel, PerturbativeFormsAgreeWithDiagonalisation) {
  const SpinConstants c;
  for (double B = 0.0; B <= 900.0; B += 75.0) {
    const auto exact = nvclock::transition_frequencies(c, B, 297.0);
    const auto approx = nvclock::approx_frequencies(c, B, 297.0);
    EXPECT_NEAR(approx.quartet.f1 / exact.f1, 1.0, 1e-3) << B;
    EXPECT_NEAR(approx.quartet.f2 / exact.f2, 1.0, 1e-3) << B;
    EXPECT_NEAR(approx.d_half_sum / exact.d_half_sum(), 1.0, 1e-5) << B;
    EXPECT_NEAR(approx.q_half_sum / exact.q_half_sum(), 1.0, 1e-3) << B;
  }
}

TEST(SpinModel, PerturbativeFormsRejectAnticrossing) {
  const SpinConstants c;
  const double gslac = c.D0 / c.gamma_e;
  EXPECT_THROW(nvclock::approx_frequencies(c, gslac, 297.0), nvclock::NearAnticrossingError);
  EXPECT_THROW(nvclock::approx_frequencies(c, gslac + 100.0, 297.0), nvclock::DomainError);
}

TEST(SpinModel, FPlusMonotoneInField) {
  const SpinConstants c;
  double prev = 0.0;
  for (double B = 0.0; B <= 1000.0; B += 50.0) {
    const double f = nvclock::transition_frequencies(c, B, 297.0).f_plus;
    EXPECT_GT(f, prev);
    prev = f;
  }
}

TEST(SpinModel, NuclearTransitionsNearReferenceAt475G) {
  const auto q = nvclock::transition_frequencies(SpinConstants{}, 475.0, 297.0);
  EXPECT_NEAR(q.f1 / 5.0892e6, 1.0, 1e-3);
  EXPECT_NEAR(q.f2 / 4.7964e6, 1.0, 1e-3);
}

}  // namespace
