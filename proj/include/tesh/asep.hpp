// Copyright 2026 The tesh authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tesh/qcore.hpp"

// Absolute-separability test for qubit-vs-rest cuts (spectral criterion),
// threshold-entanglement verification, and the search cost function.

namespace tesh::asep {

/// theta(lambda) = lambda_1 - lambda_{D-1} - 2*sqrt(lambda_{D-2} lambda_D)
/// on a non-increasing spectrum of length D >= 4. theta <= 0 is necessary
/// and sufficient for the state to stay separable across every single-qubit
/// vs rest cut under all global unitaries.
inline double theta(const qcore::Spectrum& lam) {
  const Eigen::Index d = lam.size();
  if (d < 4) throw std::invalid_argument("theta: criterion needs a spectrum of length >= 4");
  // Clamped eigenvalues may carry -1e-10 noise; the product under the root
  // must not go negative.
  double prod = std::max(lam[d - 3], 0.0) * std::max(lam[d - 1], 0.0);
  return lam[0] - lam[d - 2] - 2.0 * std::sqrt(prod);
}

inline bool is_as(const qcore::Spectrum& lam, double tol) { return theta(lam) <= tol; }

/// Default tolerance on theta. Marginals of boundary states sit exactly at
/// theta = 0, so a strictly negative requirement would reject them.
inline constexpr double kDefaultAsTolerance = 1e-9;

/// Cost Theta(psi) = sum over all floor(n/2)-qubit subsets S of
/// max{0, theta(spec(rho_S))}^2. Zero exactly on states whose half-size
/// marginals are all absolutely separable across 1-vs-rest cuts.
inline double cost_theta(const qcore::StateVector& psi) {
  if (psi.n < 4) throw std::invalid_argument("cost_theta: need at least four qubits");
  const int k = psi.n / 2;
  double total = 0.0;
  for_each_subset(psi.n, k, [&](const std::vector<int>& s) {
    double th = theta(qcore::spectrum(qcore::partial_trace(psi, s)));
    if (th > 0.0) total += th * th;
  });
  return total;
}

/// Per-subset outcome of a TE verification.
struct SubsetRecord {
  std::vector<int> subset;
  int size = 0;
  double theta_value = 0.0;
  bool as = false;
};

/// Verification result. `certified` names the exact property checked:
/// absolute separability is certified across 1-vs-rest cuts of each
/// half-size marginal; smaller marginals inherit it by partial-trace
/// monotonicity.
struct TEReport {
  int n = 0;
  double tolerance = kDefaultAsTolerance;
  bool overall = false;
  std::string certified = "AS_1|rest certified";
  std::vector<SubsetRecord> records;
};

/// Evaluates theta on every subset of size floor(n/2). Sizes below that
/// follow by monotonicity (tracing a qubit out of an AS_1|rest state leaves
/// an AS_1|rest state); single qubits are trivially separable.
inline TEReport verify_te(const qcore::StateVector& psi, double tol = kDefaultAsTolerance) {
  if (psi.n < 4) throw std::invalid_argument("verify_te: need at least four qubits");
  if (tol < 0) throw std::invalid_argument("verify_te: tolerance must be nonnegative");
  TEReport report;
  report.n = psi.n;
  report.tolerance = tol;
  report.overall = true;
  const int k = psi.n / 2;
  for_each_subset(psi.n, k, [&](const std::vector<int>& s) {
    SubsetRecord rec;
    rec.subset = s;
    rec.size = k;
    rec.theta_value = theta(qcore::spectrum(qcore::partial_trace(psi, s)));
    rec.as = rec.theta_value <= tol;
    if (!rec.as) report.overall = false;
    report.records.push_back(std::move(rec));
  });
  return report;
}

}  // namespace tesh::asep
