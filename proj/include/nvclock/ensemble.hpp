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

// Averaging over an inhomogeneous distribution of Rabi frequencies. All
// pulse areas scale with the local Rabi frequency, so the distribution is
// over a dimensionless scale s with mean `center` (1 = nominal).

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "nvclock/errors.hpp"
#include "nvclock/parallel.hpp"

namespace nvclock {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Hermite rule for a standard normal variable (Golub-Welsch).
inline QuadratureRule gauss_hermite_normal(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  if (n == 1) return {{0.0}, {1.0}};
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    // Physicists' nodes x map to a standard normal via z = sqrt(2) x.
    rule.nodes[i] = std::numbers::sqrt2 * solver.eigenvalues()(i);
    const double v = solver.eigenvectors()(0, i);
    rule.weights[i] = v * v;
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

/// Gaussian distribution of the Rabi scale, parameterised by its full width
/// at half maximum as a fraction of nominal.
struct RabiDistribution {
  double center = 1.0;
  double fwhm = 0.0;
  int nodes = 64;

  [[nodiscard]] double sigma() const { return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2)); }

  void validate() const {
    if (!(fwhm >= 0.0)) throw ConfigError("Rabi distribution FWHM must be non-negative");
    if (nodes < 1) throw ConfigError("Rabi distribution needs n_samples >= 1");
  }

  /// (scale, weight) pairs. A zero width collapses to the center.
  [[nodiscard]] QuadratureRule rule() const {
    validate();
    if (fwhm == 0.0) return {{center}, {1.0}};
    QuadratureRule r = gauss_hermite_normal(nodes);
    for (double& x : r.nodes) x = center + sigma() * x;
    return r;
  }
};

/// Deterministic quadrature average of fn(scale). The result type needs
/// `R * double` and `R + R`; nodes are evaluated concurrently and summed
/// in node order.
template <class Fn>
auto ensemble_average(Fn&& fn, const RabiDistribution& dist, unsigned threads = 1) {
  const QuadratureRule r = dist.rule();
  using Result = std::decay_t<decltype(fn(1.0))>;
  std::vector<Result> values(r.nodes.size());
  parallel_for(r.nodes.size(), threads, [&](std::size_t i) { values[i] = fn(r.nodes[i]); });
  Result sum = values[0] * r.weights[0];
  for (std::size_t i = 1; i < values.size(); ++i) sum = sum + values[i] * r.weights[i];
  return sum;
}

}  // namespace nvclock
