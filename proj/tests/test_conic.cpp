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

#include "tesh/conic.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <sstream>

using namespace tesh::conic;

namespace {

// min t subject to [[t, 1], [1, t]] psd, modeled with a free variable t and
// a PSD slack S = t I + offdiag(1).
ConicProblem t_problem() {
  ConicProblem p;
  p.segments.push_back({SegmentKind::Free, 1});
  p.segments.push_back({SegmentKind::Psd, 2});
  p.objective = Eigen::VectorXd::Zero(4);
  p.objective[0] = 1.0;  // t
  // S00 - t = 0 ; S01 = 1 ; S11 - t = 0.  (S stored as entries 1..3.)
  SparseRow r0, r1, r2;
  r0.add(1, 1.0);
  r0.add(0, -1.0);
  r1.add(2, 1.0);
  r2.add(3, 1.0);
  r2.add(0, -1.0);
  p.rows = {r0, r1, r2};
  p.rhs.resize(3);
  p.rhs << 0.0, 1.0, 0.0;
  return p;
}

// The same optimum modeled without free variables:
// min 2 Y01 s.t. tr(Y) = 1, Y psd. Optimum -1.
ConicProblem t_problem_dualform() {
  ConicProblem p;
  p.segments.push_back({SegmentKind::Psd, 2});
  p.objective = Eigen::VectorXd::Zero(3);
  p.objective[1] = 2.0;  // paired off-diagonal functional 2*Y01
  SparseRow tr;
  tr.add(0, 1.0);
  tr.add(2, 1.0);
  p.rows = {tr};
  p.rhs.resize(1);
  p.rhs << 1.0;
  return p;
}

}  // namespace

TEST_CASE("psd boundary problem", "[conic]") {
  ConicSolution sol = solve(t_problem());
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(sol.primal_value == Catch::Approx(1.0).margin(1e-7));
  REQUIRE(sol.gap < 1e-6);
}

TEST_CASE("simple lp with free variable", "[conic]") {
  // min x s.t. x - s = 3, s >= 0, x free.
  ConicProblem p;
  p.segments.push_back({SegmentKind::Free, 1});
  p.segments.push_back({SegmentKind::NonNeg, 1});
  p.objective.resize(2);
  p.objective << 1.0, 0.0;
  SparseRow r;
  r.add(0, 1.0);
  r.add(1, -1.0);
  p.rows = {r};
  p.rhs.resize(1);
  p.rhs << 3.0;
  ConicSolution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(sol.primal_value == Catch::Approx(3.0).margin(1e-7));
  REQUIRE(sol.x[0] == Catch::Approx(3.0).margin(1e-6));
}

TEST_CASE("infeasible equalities are certified", "[conic]") {
  // x = 0 and x = 1 with x >= 0.
  ConicProblem p;
  p.segments.push_back({SegmentKind::NonNeg, 1});
  p.objective = Eigen::VectorXd::Zero(1);
  SparseRow r0, r1;
  r0.add(0, 1.0);
  r1.add(0, 1.0);
  p.rows = {r0, r1};
  p.rhs.resize(2);
  p.rhs << 0.0, 1.0;
  ConicSolution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded problem is certified", "[conic]") {
  // min -x0 with only x1 pinned.
  ConicProblem p;
  p.segments.push_back({SegmentKind::NonNeg, 2});
  p.objective.resize(2);
  p.objective << -1.0, 0.0;
  SparseRow r;
  r.add(1, 1.0);
  p.rows = {r};
  p.rhs.resize(1);
  p.rhs << 1.0;
  ConicSolution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Unbounded);
}

TEST_CASE("weak duality on every optimal return", "[conic]") {
  ConicSolution sol = solve(t_problem_dualform());
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(sol.primal_value == Catch::Approx(-1.0).margin(1e-7));
  REQUIRE(sol.dual_value <= sol.primal_value + 1e-7);
  REQUIRE(sol.gap <= 1e-7 * (1.0 + std::abs(sol.primal_value)));
}

TEST_CASE("random small lp against closed form", "[conic]") {
  // min c'x s.t. sum x = 1, x >= 0 has optimum min_i c_i.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);
    ConicProblem p;
    p.segments.push_back({SegmentKind::NonNeg, n});
    p.objective.resize(n);
    for (int i = 0; i < n; ++i) p.objective[i] = unif(rng);
    SparseRow r;
    for (int i = 0; i < n; ++i) r.add(i, 1.0);
    p.rows = {r};
    p.rhs.resize(1);
    p.rhs << 1.0;
    ConicSolution sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    REQUIRE(sol.primal_value == Catch::Approx(p.objective.minCoeff()).margin(1e-7));
  }
}

TEST_CASE("extremal eigenvalue sdp", "[conic]") {
  // min tr(CY) over unit-trace PSD Y equals lambda_min(C).
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 4;
    Eigen::MatrixXd C(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) C(i, j) = gauss(rng);
    C = (0.5 * (C + C.transpose())).eval();
    ConicProblem p;
    p.segments.push_back({SegmentKind::Psd, d});
    p.objective.resize(d * (d + 1) / 2);
    int pos = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j, ++pos) p.objective[pos] = (i == j) ? C(i, i) : 2.0 * C(i, j);
    SparseRow tr;
    for (int i = 0; i < d; ++i) tr.add(ConicProblem::psd_entry(d, i, i), 1.0);
    p.rows = {tr};
    p.rhs.resize(1);
    p.rhs << 1.0;
    ConicSolution sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
    REQUIRE(sol.primal_value == Catch::Approx(es.eigenvalues().minCoeff()).margin(1e-6));
  }
}

TEST_CASE("sdpa export format rules", "[conic]") {
  std::ostringstream os;
  export_sdpa(t_problem_dualform(), os);
  std::string text = os.str();
  // one 2x2 psd block, three nonzero entries (objective + trace row)
  REQUIRE(text.find("\n1\n2\n") != std::string::npos);
  int data_lines = 0;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '*' && std::count(line.begin(), line.end(), ' ') == 4)
      ++data_lines;
  }
  REQUIRE(data_lines == 3);
}

TEST_CASE("sdpa export uses negative sizes for lp blocks", "[conic]") {
  ConicProblem p;
  p.segments.push_back({SegmentKind::NonNeg, 3});
  p.objective = Eigen::VectorXd::Ones(3);
  SparseRow r;
  r.add(0, 1.0);
  p.rows = {r};
  p.rhs.resize(1);
  p.rhs << 1.0;
  std::ostringstream os;
  export_sdpa(p, os);
  REQUIRE(os.str().find("-3") != std::string::npos);
}

TEST_CASE("sdpa round trip resolves to the same optimum", "[conic]") {
  for (const ConicProblem& p : {t_problem(), t_problem_dualform()}) {
    ConicSolution before = solve(p);
    std::ostringstream os;
    export_sdpa(p, os);
    std::istringstream is(os.str());
    ConicProblem q = import_sdpa(is);
    ConicSolution after = solve(q);
    REQUIRE(after.status == SolveStatus::Optimal);
    REQUIRE(after.primal_value == Catch::Approx(before.primal_value).margin(1e-8));
  }
}

TEST_CASE("sdpa round trip reproduces data exactly", "[conic]") {
  ConicProblem p = t_problem_dualform();
  p.objective[1] = 0.1;  // not a binary-exact value; must survive unchanged
  std::ostringstream os1;
  export_sdpa(p, os1);
  std::istringstream is(os1.str());
  ConicProblem q = import_sdpa(is);
  std::ostringstream os2;
  export_sdpa(q, os2);
  REQUIRE(os1.str() == os2.str());
  REQUIRE(q.objective[1] == p.objective[1]);
}

TEST_CASE("psd side guard refuses oversized problems", "[conic]") {
  ConicProblem p;
  p.segments.push_back({SegmentKind::Psd, 1201});
  p.objective = Eigen::VectorXd::Zero(p.var_count());
  SparseRow r;
  r.add(0, 1.0);
  p.rows = {r};
  p.rhs.resize(1);
  p.rhs << 1.0;
  REQUIRE_THROWS_AS(solve(p), std::invalid_argument);
}
