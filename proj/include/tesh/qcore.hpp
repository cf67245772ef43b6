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

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "tesh/common.hpp"

// Foundational quantum-state numerics: state construction, partial traces,
// marginal spectra and purities, Pauli expectation values.
//
// Index convention used throughout: qubit 0 is the MOST significant bit of
// the amplitude index, so the basis label |b_0 b_1 ... b_{n-1}> reads
// left-to-right as the binary expansion of the index.

namespace tesh::qcore {

using Complex = std::complex<double>;

/// Pure n-qubit state, stored as 2^n complex amplitudes with unit norm.
struct StateVector {
  int n = 0;
  Eigen::VectorXcd amplitudes;

  StateVector() = default;
  StateVector(int n_qubits, Eigen::VectorXcd amps) : n(n_qubits), amplitudes(std::move(amps)) {
    if (n < 1) throw std::invalid_argument("StateVector: need at least one qubit");
    if (amplitudes.size() != (Eigen::Index{1} << n))
      throw std::invalid_argument("StateVector: amplitude count is not 2^n");
    double norm2 = amplitudes.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-10)
      throw std::invalid_argument("StateVector: squared norm deviates from 1 beyond 1e-10");
  }

  Eigen::Index dim() const { return amplitudes.size(); }
};

/// Reduced density matrix on a qubit subset.
struct DensityMatrix {
  Eigen::MatrixXcd mat;

  Eigen::Index dim() const { return mat.rows(); }

  /// Checks hermiticity, unit trace and eigenvalue nonnegativity at the
  /// documented tolerances. Throws NumericError on violation.
  void validate() const {
    if (mat.rows() != mat.cols()) throw NumericError("DensityMatrix: not square");
    double herm = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) throw NumericError("DensityMatrix: hermiticity violated");
    if (std::abs(mat.trace().real() - 1.0) > 1e-12 || std::abs(mat.trace().imag()) > 1e-12)
      throw NumericError("DensityMatrix: trace deviates from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw NumericError("DensityMatrix: negative eigenvalue beyond tolerance");
  }
};

/// Eigenvalue list of a marginal, sorted non-increasing.
struct Spectrum {
  Eigen::VectorXd values;

  Spectrum() = default;
  explicit Spectrum(Eigen::VectorXd v) : values(std::move(v)) {
    for (Eigen::Index i = 0; i + 1 < values.size(); ++i)
      if (values[i] < values[i + 1] - 1e-12)
        throw std::invalid_argument("Spectrum: values not sorted non-increasing");
    if (values.size() > 0) {
      if (values.minCoeff() < -1e-10 || values.maxCoeff() > 1.0 + 1e-10)
        throw std::invalid_argument("Spectrum: value outside [0, 1]");
      if (std::abs(values.sum() - 1.0) > 1e-10)
        throw std::invalid_argument("Spectrum: values do not sum to 1");
    }
  }

  Eigen::Index size() const { return values.size(); }
  double operator[](Eigen::Index i) const { return values[i]; }
};

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// A tensor product of single-qubit Pauli operators (phase-free
/// representative).
struct PauliString {
  int n = 0;
  std::vector<Pauli> letters;

  PauliString() = default;
  PauliString(int n_qubits, std::vector<Pauli> ls) : n(n_qubits), letters(std::move(ls)) {
    if (static_cast<int>(letters.size()) != n)
      throw std::invalid_argument("PauliString: letter count mismatch");
  }

  /// Parses e.g. "XIZY".
  static PauliString parse(const std::string& s) {
    std::vector<Pauli> ls;
    ls.reserve(s.size());
    for (char c : s) {
      switch (c) {
        case 'I': ls.push_back(Pauli::I); break;
        case 'X': ls.push_back(Pauli::X); break;
        case 'Y': ls.push_back(Pauli::Y); break;
        case 'Z': ls.push_back(Pauli::Z); break;
        default: throw std::invalid_argument("PauliString: bad letter");
      }
    }
    return PauliString(static_cast<int>(s.size()), std::move(ls));
  }

  std::string str() const {
    static const char names[] = {'I', 'X', 'Y', 'Z'};
    std::string s(letters.size(), 'I');
    for (size_t i = 0; i < letters.size(); ++i) s[i] = names[static_cast<int>(letters[i])];
    return s;
  }

  int weight() const {
    int w = 0;
    for (Pauli p : letters)
      if (p != Pauli::I) ++w;
    return w;
  }
};

/// Simple undirected graph on qubits; fixture constructor input for graph
/// states.
struct GraphSpec {
  int n = 0;
  std::set<std::pair<int, int>> edges;  // each pair stored with first < second

  GraphSpec() = default;
  GraphSpec(int n_vertices, const std::vector<std::pair<int, int>>& edge_list) : n(n_vertices) {
    if (n < 1) throw std::invalid_argument("GraphSpec: need at least one vertex");
    for (auto [u, v] : edge_list) {
      if (u == v) throw std::invalid_argument("GraphSpec: self-loop");
      if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("GraphSpec: vertex out of range");
      edges.insert({std::min(u, v), std::max(u, v)});
    }
  }
};

/// Haar-random pure state: 2^n i.i.d. standard complex Gaussians,
/// normalized. Deterministic for a fixed seed.
inline StateVector haar_random_state(int n, std::uint64_t seed) {
  if (n < 1 || n > 20) throw std::invalid_argument("haar_random_state: n must be in [1, 20]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd amps(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    double re = gauss(rng);
    double im = gauss(rng);
    amps[i] = Complex(re, im);
  }
  amps /= amps.norm();
  return StateVector(n, std::move(amps));
}

/// The four-qubit state from which every two-qubit marginal has spectrum
/// (1/2, 1/6, 1/6, 1/6): an equal-weight superposition of the three
/// pairings of two Bell pairs, with relative cube roots of unity.
inline StateVector phi4_state() {
  const double a = 1.0 / std::sqrt(6.0);
  const Complex omega = std::polar(1.0, 2.0 * M_PI / 3.0);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(16);
  amps[0b0011] = a;
  amps[0b1100] = a;
  amps[0b0101] = a * omega;
  amps[0b1010] = a * omega;
  amps[0b0110] = a * omega * omega;
  amps[0b1001] = a * omega * omega;
  return StateVector(4, std::move(amps));
}

/// Graph state: |+>^n followed by a controlled-Z phase for each edge.
inline StateVector graph_state(const GraphSpec& g) {
  const Eigen::Index dim = Eigen::Index{1} << g.n;
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  Eigen::VectorXcd amps(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    int sign = 0;
    for (auto [u, v] : g.edges) {
      int bu = (idx >> (g.n - 1 - u)) & 1;
      int bv = (idx >> (g.n - 1 - v)) & 1;
      sign ^= (bu & bv);
    }
    amps[idx] = sign ? -a : a;
  }
  return StateVector(g.n, std::move(amps));
}

namespace detail {

/// Reshapes psi into the 2^k x 2^(n-k) matrix whose row index collects the
/// `subset` qubits (subset[0] most significant) and whose column index
/// collects the complement in increasing qubit order.
inline Eigen::MatrixXcd bipartition_matrix(const StateVector& psi, const std::vector<int>& subset) {
  const int n = psi.n;
  const int k = static_cast<int>(subset.size());
  std::vector<int> complement;
  complement.reserve(n - k);
  {
    std::vector<bool> in_subset(n, false);
    for (int q : subset) in_subset[q] = true;
    for (int q = 0; q < n; ++q)
      if (!in_subset[q]) complement.push_back(q);
  }
  Eigen::MatrixXcd m(Eigen::Index{1} << k, Eigen::Index{1} << (n - k));
  for (Eigen::Index idx = 0; idx < psi.dim(); ++idx) {
    Eigen::Index r = 0, c = 0;
    for (int j = 0; j < k; ++j) r |= static_cast<Eigen::Index>((idx >> (n - 1 - subset[j])) & 1) << (k - 1 - j);
    for (int j = 0; j < n - k; ++j)
      c |= static_cast<Eigen::Index>((idx >> (n - 1 - complement[j])) & 1) << (n - k - 1 - j);
    m(r, c) = psi.amplitudes[idx];
  }
  return m;
}

}  // namespace detail

/// Reduced density matrix on `subset` (strictly increasing qubit indices),
/// tracing out the complement.
inline DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& subset) {
  if (subset.empty()) throw std::invalid_argument("partial_trace: empty subset");
  for (size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= psi.n) throw std::invalid_argument("partial_trace: index out of range");
    if (i > 0 && subset[i] <= subset[i - 1])
      throw std::invalid_argument("partial_trace: subset not strictly increasing");
  }
  Eigen::MatrixXcd m = detail::bipartition_matrix(psi, subset);
  DensityMatrix rho;
  rho.mat = m * m.adjoint();
  return rho;
}

/// tr(rho^2) of the marginal on `subset`, computed without diagonalizing.
inline double marginal_purity(const StateVector& psi, const std::vector<int>& subset) {
  Eigen::MatrixXcd m = detail::bipartition_matrix(psi, subset);
  if (m.rows() <= m.cols()) {
    return (m * m.adjoint()).squaredNorm();
  }
  return (m.adjoint() * m).squaredNorm();
}

/// Eigenvalues of a density matrix, sorted non-increasing. Values within
/// 1e-10 of the boundary of [0, 1] are clamped onto it; larger violations
/// raise NumericError rather than being silently repaired.
inline Spectrum spectrum(const DensityMatrix& rho) {
  if (rho.mat.rows() != rho.mat.cols()) throw NumericError("spectrum: matrix not square");
  double herm = (rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-9) throw NumericError("spectrum: input not Hermitian within 1e-9");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((rho.mat + rho.mat.adjoint()) / 2.0,
                                                     Eigen::EigenvaluesOnly);
  Eigen::VectorXd vals = es.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < -1e-10 || vals[i] > 1.0 + 1e-10)
      throw NumericError("spectrum: eigenvalue outside [0,1] beyond clamping window");
    vals[i] = std::clamp(vals[i], 0.0, 1.0);
  }
  return Spectrum(std::move(vals));
}

/// Mean of tr(rho_S^2) over all C(n, k) subsets S of size k.
inline double average_marginal_purity(const StateVector& psi, int k) {
  if (k < 1 || k > psi.n) throw std::invalid_argument("average_marginal_purity: bad subset size");
  double sum = 0.0;
  std::int64_t count = 0;
  for_each_subset(psi.n, k, [&](const std::vector<int>& s) {
    sum += marginal_purity(psi, s);
    ++count;
  });
  return sum / static_cast<double>(count);
}

/// <psi|P|psi> for a Pauli string, evaluated in O(2^n). The result of a
/// Hermitian observable must be real; a residual imaginary part above 1e-9
/// indicates an internal inconsistency and raises NumericError.
inline double pauli_expectation(const StateVector& psi, const PauliString& p) {
  if (p.n != psi.n) throw std::invalid_argument("pauli_expectation: qubit count mismatch");
  const int n = psi.n;
  Eigen::Index x_mask = 0, zsign_mask = 0;
  int y_count = 0;
  for (int q = 0; q < n; ++q) {
    Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
    switch (p.letters[q]) {
      case Pauli::I: break;
      case Pauli::X: x_mask |= bit; break;
      case Pauli::Y:
        x_mask |= bit;
        zsign_mask |= bit;
        ++y_count;
        break;
      case Pauli::Z: zsign_mask |= bit; break;
    }
  }
  // P|b> = i^{#Y} * (-1)^{popcount(b & zsign_mask)} |b xor x_mask>.
  static const Complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex phase_y = i_pow[y_count & 3];
  Complex acc(0, 0);
  for (Eigen::Index b = 0; b < psi.dim(); ++b) {
    int par = std::popcount(static_cast<std::uint64_t>(b & zsign_mask)) & 1;
    Complex term = std::conj(psi.amplitudes[b ^ x_mask]) * psi.amplitudes[b];
    acc += par ? -term : term;
  }
  acc *= phase_y;
  if (std::abs(acc.imag()) > 1e-9)
    throw NumericError("pauli_expectation: expectation has non-real part beyond 1e-9");
  return acc.real();
}

}  // namespace tesh::qcore
