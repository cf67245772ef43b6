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

#include "tesh/qcore.hpp"

// Reference states used by the test suites and shipped as data files for the
// command-line tool.

namespace tesh::fixtures {

/// 5-cycle graph; its graph state has all ten 2-qubit marginals maximally
/// mixed.
inline qcore::GraphSpec cycle5_graph() {
  return qcore::GraphSpec(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
}

/// A 6-vertex graph whose graph state has every 3-qubit marginal maximally
/// mixed (verified by direct marginal computation in the test suite).
inline qcore::GraphSpec ame6_graph() {
  return qcore::GraphSpec(
      6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 4}, {1, 5}, {2, 3}, {2, 5}, {3, 4}});
}

/// |0...0> on n qubits.
inline qcore::StateVector zeros_state(int n) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  amps[0] = 1.0;
  return qcore::StateVector(n, std::move(amps));
}

}  // namespace tesh::fixtures
