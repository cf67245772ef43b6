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

#include "tesh/qcore.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "testing.hpp"

using namespace tesh;
using namespace tesh::qcore;

TEST_CASE("haar_random_state basics", "[qcore]") {
  StateVector s1 = haar_random_state(1, 12345);
  REQUIRE(s1.dim() == 2);
  REQUIRE(std::abs(s1.amplitudes.squaredNorm() - 1.0) < 1e-12);

  StateVector a = haar_random_state(4, 777);
  StateVector b = haar_random_state(4, 777);
  REQUIRE((a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() == 0.0);

  StateVector c = haar_random_state(4, 778);
  REQUIRE((a.amplitudes - c.amplitudes).cwiseAbs().maxCoeff() > 1e-3);

  REQUIRE_THROWS_AS(haar_random_state(0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(haar_random_state(21, 1), std::invalid_argument);
}

TEST_CASE("haar marginal purity matches the known ensemble average", "[qcore]") {
  // For a 4-qubit Haar state, E[tr(rho_S^2)] over a fixed 2-qubit subset is
  // (d_A + d_B) / (d_A d_B + 1) = 8/17. Cross-checked by direct Monte Carlo.
  const std::vector<int> subset = {0, 1};
  double sum = 0.0;
  const int samples = 1000;
  for (int i = 0; i < samples; ++i) {
    StateVector psi = haar_random_state(4, mix_seed(2024, i));
    sum += marginal_purity(psi, subset);
  }
  double mean = sum / samples;
  REQUIRE(mean == Catch::Approx(8.0 / 17.0).margin(0.01));
}

TEST_CASE("phi4_state spectrum and purity", "[qcore]") {
  StateVector phi = phi4_state();
  REQUIRE(std::abs(phi.amplitudes.squaredNorm() - 1.0) < 1e-14);

  for_each_subset(4, 2, [&](const std::vector<int>& s) {
    Spectrum lam = spectrum(partial_trace(phi, s));
    REQUIRE(lam.size() == 4);
    REQUIRE(lam[0] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(lam[1] == Catch::Approx(1.0 / 6.0).margin(1e-12));
    REQUIRE(lam[2] == Catch::Approx(1.0 / 6.0).margin(1e-12));
    REQUIRE(lam[3] == Catch::Approx(1.0 / 6.0).margin(1e-12));
    REQUIRE(marginal_purity(phi, s) == Catch::Approx(1.0 / 3.0).margin(1e-12));
  });
}

TEST_CASE("graph states", "[qcore]") {
  StateVector empty2 = graph_state(GraphSpec(2, {}));
  for (int i = 0; i < 4; ++i) REQUIRE(empty2.amplitudes[i] == Complex(0.5, 0.0));

  StateVector edge2 = graph_state(GraphSpec(2, {{0, 1}}));
  REQUIRE(edge2.amplitudes[0] == Complex(0.5, 0.0));
  REQUIRE(edge2.amplitudes[1] == Complex(0.5, 0.0));
  REQUIRE(edge2.amplitudes[2] == Complex(0.5, 0.0));
  REQUIRE(edge2.amplitudes[3] == Complex(-0.5, 0.0));

  // The 5-cycle graph state has every 2-qubit marginal maximally mixed.
  StateVector ring = graph_state(testing::cycle5_graph());
  for_each_subset(5, 2, [&](const std::vector<int>& s) {
    REQUIRE(marginal_purity(ring, s) == Catch::Approx(0.25).margin(1e-12));
  });

  REQUIRE_THROWS_AS(GraphSpec(3, {{1, 1}}), std::invalid_argument);
  REQUIRE_THROWS_AS(GraphSpec(3, {{0, 3}}), std::invalid_argument);
}

TEST_CASE("partial_trace basics", "[qcore]") {
  Eigen::VectorXcd zz = Eigen::VectorXcd::Zero(4);
  zz[0] = 1.0;
  StateVector s00(2, zz);
  DensityMatrix rho = partial_trace(s00, {0});
  REQUIRE(std::abs(rho.mat(0, 0) - Complex(1, 0)) < 1e-15);
  REQUIRE(std::abs(rho.mat(1, 1)) < 1e-15);

  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  StateVector sb(2, bell);
  DensityMatrix rb = partial_trace(sb, {0});
  REQUIRE(std::abs(rb.mat(0, 0) - Complex(0.5, 0)) < 1e-14);
  REQUIRE(std::abs(rb.mat(1, 1) - Complex(0.5, 0)) < 1e-14);
  REQUIRE(std::abs(rb.mat(0, 1)) < 1e-14);

  REQUIRE_THROWS_AS(partial_trace(sb, {}), std::invalid_argument);
  REQUIRE_THROWS_AS(partial_trace(sb, {0, 2}), std::invalid_argument);
  REQUIRE_THROWS_AS(partial_trace(sb, {1, 0}), std::invalid_argument);
}

TEST_CASE("partial_trace output is a valid density matrix", "[qcore]") {
  for (int n = 2; n <= 6; ++n) {
    StateVector psi = haar_random_state(n, mix_seed(55, n));
    for (int k = 1; k <= n / 2; ++k) {
      for_each_subset(n, k, [&](const std::vector<int>& s) {
        REQUIRE_NOTHROW(partial_trace(psi, s).validate());
      });
    }
  }
}

TEST_CASE("spectrum basics", "[qcore]") {
  DensityMatrix quarter;
  quarter.mat = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  Spectrum s = spectrum(quarter);
  for (int i = 0; i < 4; ++i) REQUIRE(s[i] == Catch::Approx(0.25).margin(1e-15));

  DensityMatrix diag;
  diag.mat = Eigen::MatrixXcd::Zero(2, 2);
  diag.mat(0, 0) = 0.3;
  diag.mat(1, 1) = 0.7;
  Spectrum s2 = spectrum(diag);
  REQUIRE(s2[0] == Catch::Approx(0.7).margin(1e-15));
  REQUIRE(s2[1] == Catch::Approx(0.3).margin(1e-15));

  DensityMatrix bad;
  bad.mat = Eigen::MatrixXcd::Zero(2, 2);
  bad.mat(0, 1) = Complex(0, 1e-3);
  bad.mat(0, 0) = 1.0;
  REQUIRE_THROWS_AS(spectrum(bad), NumericError);
}

TEST_CASE("spectrum is unitarily invariant", "[qcore]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 15);
    Eigen::MatrixXcd g = testing::random_complex_matrix(dim, rng);
    Eigen::MatrixXcd rho_m = g * g.adjoint();
    rho_m /= rho_m.trace().real();
    DensityMatrix rho{rho_m};
    Eigen::MatrixXcd u = testing::random_unitary(dim, rng);
    DensityMatrix rotated{u * rho_m * u.adjoint()};
    Spectrum a = spectrum(rho);
    Spectrum b = spectrum(rotated);
    REQUIRE((a.values - b.values).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("purity is symmetric under complementation", "[qcore]") {
  for (int n = 2; n <= 7; ++n) {
    StateVector psi = haar_random_state(n, mix_seed(7, n));
    for (int k = 1; k <= n / 2; ++k) {
      for_each_subset(n, k, [&](const std::vector<int>& s) {
        std::vector<int> comp;
        std::vector<bool> used(n, false);
        for (int q : s) used[q] = true;
        for (int q = 0; q < n; ++q)
          if (!used[q]) comp.push_back(q);
        REQUIRE(marginal_purity(psi, s) == Catch::Approx(marginal_purity(psi, comp)).margin(1e-10));
      });
    }
  }
}

TEST_CASE("average_marginal_purity", "[qcore]") {
  REQUIRE(average_marginal_purity(phi4_state(), 2) == Catch::Approx(1.0 / 3.0).margin(1e-12));
  REQUIRE(average_marginal_purity(graph_state(testing::cycle5_graph()), 2) ==
          Catch::Approx(0.25).margin(1e-12));

  Eigen::VectorXcd zeros = Eigen::VectorXcd::Zero(16);
  zeros[0] = 1.0;
  REQUIRE(average_marginal_purity(StateVector(4, zeros), 2) == Catch::Approx(1.0).margin(1e-15));

  // Range bound 2^-k <= average <= 1.
  for (int trial = 0; trial < 5; ++trial) {
    StateVector psi = haar_random_state(5, mix_seed(11, trial));
    for (int k = 1; k <= 2; ++k) {
      double p = average_marginal_purity(psi, k);
      REQUIRE(p >= std::pow(2.0, -k) - 1e-12);
      REQUIRE(p <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("pauli_expectation basics", "[qcore]") {
  Eigen::VectorXcd zero(2);
  zero << 1.0, 0.0;
  StateVector s0(1, zero);
  REQUIRE(pauli_expectation(s0, PauliString::parse("Z")) == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(pauli_expectation(s0, PauliString::parse("X")) == Catch::Approx(0.0).margin(1e-15));

  StateVector phi = phi4_state();
  REQUIRE(pauli_expectation(phi, PauliString::parse("XXXX")) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(pauli_expectation(phi, PauliString::parse("ZZZZ")) == Catch::Approx(1.0).margin(1e-12));

  REQUIRE_THROWS_AS(pauli_expectation(s0, PauliString::parse("ZZ")), std::invalid_argument);
}

TEST_CASE("pauli moment sum equals 2^n", "[qcore]") {
  for (int n = 1; n <= 5; ++n) {
    StateVector psi = haar_random_state(n, mix_seed(31, n));
    double sum = 0.0;
    testing::for_each_pauli(n, [&](const PauliString& p) {
      double e = pauli_expectation(psi, p);
      sum += e * e;
    });
    REQUIRE(sum == Catch::Approx(std::pow(2.0, n)).margin(1e-8));
  }
}
