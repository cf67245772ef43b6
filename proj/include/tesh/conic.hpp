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

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tesh/common.hpp"

// Small dense LP/SDP solving in the standard equality form
//
//     minimize    c'x
//     subject to  A x = b,   x in K,
//
// where K is a product of free segments, nonnegative orthants and PSD
// cones. The solver is a homogeneous self-dual primal-dual interior-point
// method with Nesterov-Todd scaling and a Mehrotra predictor-corrector,
// which also yields certificates of primal or dual infeasibility.
//
// Variable layout: segments are concatenated. A PSD segment of side d
// occupies its d(d+1)/2 upper-triangle entries in row-major order
// ((0,0),(0,1),...,(0,d-1),(1,1),...). Linear coefficients apply entrywise
// to that layout, so a symmetric-matrix functional tr(F X) is written with
// coefficient F_pp on diagonal entries and 2 F_pq on off-diagonal ones.

namespace tesh::conic {

enum class SegmentKind { Free, NonNeg, Psd };

struct Segment {
  SegmentKind kind = SegmentKind::NonNeg;
  int size = 0;  // variable count for Free/NonNeg, matrix side for Psd

  int var_count() const { return kind == SegmentKind::Psd ? size * (size + 1) / 2 : size; }
};

/// One linear equality row, stored sparse as (column, coefficient) pairs.
struct SparseRow {
  std::vector<std::pair<int, double>> entries;

  void add(int col, double value) {
    if (value != 0.0) entries.emplace_back(col, value);
  }
};

struct ConicProblem {
  std::vector<Segment> segments;
  Eigen::VectorXd objective;
  std::vector<SparseRow> rows;
  Eigen::VectorXd rhs;

  int var_count() const {
    int n = 0;
    for (const auto& s : segments) n += s.var_count();
    return n;
  }

  int row_count() const { return static_cast<int>(rows.size()); }

  /// Offset of a segment's first variable.
  int segment_offset(int seg_index) const {
    int off = 0;
    for (int i = 0; i < seg_index; ++i) off += segments[i].var_count();
    return off;
  }

  /// Index of the (p, q) upper-triangle entry within a PSD segment of side d.
  static int psd_entry(int d, int p, int q) {
    if (p > q) std::swap(p, q);
    return p * d - p * (p - 1) / 2 + (q - p);
  }

  void validate() const {
    if (objective.size() != var_count())
      throw std::invalid_argument("ConicProblem: objective length mismatch");
    if (rhs.size() != row_count()) throw std::invalid_argument("ConicProblem: rhs length mismatch");
    for (const auto& s : segments)
      if (s.size <= 0) throw std::invalid_argument("ConicProblem: empty segment");
    for (const auto& row : rows)
      for (auto [col, v] : row.entries)
        if (col < 0 || col >= var_count()) throw std::invalid_argument("ConicProblem: column out of range");
  }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double primal_value = std::numeric_limits<double>::quiet_NaN();
  double dual_value = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd x;  // primal point (or unboundedness certificate)
  Eigen::VectorXd y;  // equality multipliers (or infeasibility certificate)
  Eigen::VectorXd z;  // dual slack
  int iterations = 0;
  double primal_residual = std::numeric_limits<double>::quiet_NaN();
  double dual_residual = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
};

struct SolveOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iters = 200;
  int max_total_psd_side = 1200;
  bool verbose = false;
};

namespace detail {

constexpr double kSqrt2 = 1.4142135623730951;

struct SegEntry {  // one coefficient of one row, local to a segment
  int p = 0, q = 0;  // matrix position for Psd (p <= q); q unused otherwise
  double v = 0.0;    // internal (svec) coefficient
};

struct SegRows {  // per-segment slice of every row
  std::vector<int> row_index;
  std::vector<std::vector<SegEntry>> entries;
};

// Internal per-segment state of the interior-point iteration.
struct SegState {
  SegmentKind kind;
  int size = 0;
  // NonNeg / Free
  Eigen::VectorXd x, z, w2, lam;  // w2 = x/z, lam = sqrt(x z)
  // Psd
  Eigen::MatrixXd X, Z, Wmat, Rinv;
  Eigen::VectorXd lam_psd;
};

inline Eigen::MatrixXd smat_entries(int d, const std::vector<SegEntry>& entries) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (const auto& e : entries) {
    if (e.p == e.q) {
      m(e.p, e.p) += e.v;
    } else {
      m(e.p, e.q) += e.v / kSqrt2;
      m(e.q, e.p) += e.v / kSqrt2;
    }
  }
  return m;
}

inline double dot_entries(const Eigen::MatrixXd& V, const std::vector<SegEntry>& entries) {
  double acc = 0.0;
  for (const auto& e : entries) {
    acc += (e.p == e.q) ? e.v * V(e.p, e.p) : kSqrt2 * e.v * V(e.p, e.q);
  }
  return acc;
}

}  // namespace detail

class Solver {
 public:
  Solver(const ConicProblem& problem, const SolveOptions& options)
      : prob_(problem), opt_(options) {
    prob_.validate();
    int psd_total = 0;
    for (const auto& s : prob_.segments)
      if (s.kind == SegmentKind::Psd) psd_total += s.size;
    if (psd_total > opt_.max_total_psd_side)
      throw std::invalid_argument("conic::solve: total PSD side exceeds the configured guard");
    build_internal();
  }

  ConicSolution run() {
    init_point();
    ConicSolution sol;
    int iters_done = 0;
    for (int iter = 0; iter < opt_.max_iters; ++iter) {
      iters_done = iter;
      compute_residuals();
      double merit = merit_score();
      if (merit <= 1.0) {
        finalize(sol, SolveStatus::Optimal);
        sol.iterations = iter;
        return sol;
      }
      if (merit < best_merit_) {
        best_merit_ = merit;
        save_snapshot();
        stall_ = 0;
      } else if (++stall_ > 8) {
        break;  // endgame noise; the best iterate is kept
      }
      if (SolveStatus cert; check_certificates(cert)) {
        finalize(sol, cert);
        sol.iterations = iter;
        return sol;
      }
      if (!scaling_update()) break;
      if (!factorize()) break;

      // Predictor (affine) direction.
      Dir aff;
      if (!solve_direction(-rp_, -rd_, -rg_, -tau_ * kappa_, nullptr, aff)) break;
      double alpha_aff = std::min(1.0, 0.999 * max_step(aff));
      double gap_ratio = predicted_gap(aff, alpha_aff);
      double sigma = std::pow(std::clamp(gap_ratio, 0.0, 1.0), 3.0);
      sigma = std::clamp(sigma, 1e-8, 1.0 - 1e-8);

      // Combined corrector direction.
      double eta = 1.0 - sigma;
      Dir dir;
      if (!solve_direction(-eta * rp_, -eta * rd_, -eta * rg_,
                           sigma * mu_ - tau_ * kappa_ - aff.dtau * aff.dkappa, &aff, dir))
        break;
      double alpha = 0.99 * max_step(dir);
      alpha = std::min(alpha, 1.0);
      take_step(dir, alpha);
      if (opt_.verbose) {
        std::printf("iter %3d  mu %.3e  alpha %.3f  sigma %.3f  tau %.3e  kappa %.3e  merit %.2e\n",
                    iter, mu_, alpha, sigma, tau_, kappa_, merit);
      }
    }
    // Fall back to the best iterate seen. Residuals within a decade of the
    // targets still satisfy the documented solution guarantees.
    if (best_merit_ < std::numeric_limits<double>::infinity()) restore_snapshot();
    compute_residuals();
    if (SolveStatus cert; check_certificates(cert)) {
      finalize(sol, cert);
      sol.iterations = iters_done;
      return sol;
    }
    finalize(sol, merit_score() <= 10.0 ? SolveStatus::Optimal : SolveStatus::NumericalFailure);
    sol.iterations = iters_done;
    return sol;
  }

 private:
  struct Dir {
    std::vector<Eigen::VectorXd> dx_nn, dz_nn;
    std::vector<Eigen::MatrixXd> dx_psd, dz_psd;
    Eigen::VectorXd dy, dx_free;
    double dtau = 0.0, dkappa = 0.0;
  };

  void build_internal() {
    const int m = prob_.row_count();
    seg_rows_.resize(prob_.segments.size());
    seg_off_.resize(prob_.segments.size());
    int off = 0;
    nu_ = 0;
    n_free_ = 0;
    for (size_t s = 0; s < prob_.segments.size(); ++s) {
      seg_off_[s] = off;
      off += prob_.segments[s].var_count();
      if (prob_.segments[s].kind == SegmentKind::Psd) nu_ += prob_.segments[s].size;
      if (prob_.segments[s].kind == SegmentKind::NonNeg) nu_ += prob_.segments[s].size;
      if (prob_.segments[s].kind == SegmentKind::Free) n_free_ += prob_.segments[s].size;
    }

    // Slice rows by segment, converting PSD coefficients to the internal
    // svec normalization (off-diagonal entries carry 1/sqrt(2) of the
    // symmetric pair so that all inner products are plain dots).
    auto locate = [&](int col) {
      size_t s = 0;
      while (s + 1 < seg_off_.size() && seg_off_[s + 1] <= col) ++s;
      return std::make_pair(s, col - seg_off_[s]);
    };
    std::vector<std::map<int, std::vector<detail::SegEntry>>> per_seg(prob_.segments.size());
    for (int i = 0; i < m; ++i) {
      for (auto [col, v] : prob_.rows[i].entries) {
        auto [s, local] = locate(col);
        detail::SegEntry e;
        if (prob_.segments[s].kind == SegmentKind::Psd) {
          int d = prob_.segments[s].size;
          int p = 0, rem = local;
          while (rem >= d - p) {
            rem -= d - p;
            ++p;
          }
          e.p = p;
          e.q = p + rem;
          e.v = (e.p == e.q) ? v : v / detail::kSqrt2;
        } else {
          e.p = local;
          e.q = local;
          e.v = v;
        }
        per_seg[s][i].push_back(e);
      }
    }
    for (size_t s = 0; s < prob_.segments.size(); ++s) {
      for (auto& [row, ents] : per_seg[s]) {
        seg_rows_[s].row_index.push_back(row);
        seg_rows_[s].entries.push_back(std::move(ents));
      }
    }

    // Objective slices with the same normalization.
    c_seg_.resize(prob_.segments.size());
    for (size_t s = 0; s < prob_.segments.size(); ++s) {
      const auto& seg = prob_.segments[s];
      c_seg_[s].resize(seg.var_count());
      for (int local = 0; local < seg.var_count(); ++local) {
        double v = prob_.objective[seg_off_[s] + local];
        if (seg.kind == SegmentKind::Psd) {
          int d = seg.size, p = 0, rem = local;
          while (rem >= d - p) {
            rem -= d - p;
            ++p;
          }
          c_seg_[s][local] = (rem == 0) ? v : v / detail::kSqrt2;
        } else {
          c_seg_[s][local] = v;
        }
      }
    }

    // Dense free-column block used by the augmented system.
    Af_ = Eigen::MatrixXd::Zero(m, n_free_);
    c_free_ = Eigen::VectorXd::Zero(n_free_);
    int fcol = 0;
    free_col_of_seg_.assign(prob_.segments.size(), -1);
    for (size_t s = 0; s < prob_.segments.size(); ++s) {
      if (prob_.segments[s].kind != SegmentKind::Free) continue;
      free_col_of_seg_[s] = fcol;
      for (size_t k = 0; k < seg_rows_[s].row_index.size(); ++k) {
        int row = seg_rows_[s].row_index[k];
        for (const auto& e : seg_rows_[s].entries[k]) Af_(row, fcol + e.p) += e.v;
      }
      for (int j = 0; j < prob_.segments[s].size; ++j) c_free_[fcol + j] = c_seg_[s][j];
      fcol += prob_.segments[s].size;
    }
  }

  void init_point() {
    states_.clear();
    for (const auto& seg : prob_.segments) {
      detail::SegState st;
      st.kind = seg.kind;
      st.size = seg.size;
      switch (seg.kind) {
        case SegmentKind::Free:
          st.x = Eigen::VectorXd::Zero(seg.size);
          break;
        case SegmentKind::NonNeg:
          st.x = Eigen::VectorXd::Ones(seg.size);
          st.z = Eigen::VectorXd::Ones(seg.size);
          break;
        case SegmentKind::Psd:
          st.X = Eigen::MatrixXd::Identity(seg.size, seg.size);
          st.Z = Eigen::MatrixXd::Identity(seg.size, seg.size);
          break;
      }
      states_.push_back(std::move(st));
    }
    y_ = Eigen::VectorXd::Zero(prob_.row_count());
    tau_ = 1.0;
    kappa_ = 1.0;
    best_merit_ = std::numeric_limits<double>::infinity();
    stall_ = 0;
  }

  // --- linear operators -----------------------------------------------

  /// A x over the conic and free segments (x taken from states).
  Eigen::VectorXd apply_A() const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(prob_.row_count());
    for (size_t s = 0; s < states_.size(); ++s) {
      const auto& sr = seg_rows_[s];
      const auto& st = states_[s];
      for (size_t k = 0; k < sr.row_index.size(); ++k) {
        double acc = 0.0;
        if (st.kind == SegmentKind::Psd) {
          acc = detail::dot_entries(st.X, sr.entries[k]);
        } else {
          for (const auto& e : sr.entries[k]) acc += e.v * st.x[e.p];
        }
        out[sr.row_index[k]] += acc;
      }
    }
    return out;
  }

  /// c'x over all segments.
  double dot_cx() const {
    double acc = 0.0;
    for (size_t s = 0; s < states_.size(); ++s) {
      const auto& st = states_[s];
      if (st.kind == SegmentKind::Psd) {
        const int d = st.size;
        int local = 0;
        for (int p = 0; p < d; ++p)
          for (int q = p; q < d; ++q, ++local) {
            double xv = (p == q) ? st.X(p, p) : detail::kSqrt2 * st.X(p, q);
            acc += c_seg_[s][local] * xv;
          }
      } else {
        acc += c_seg_[s].dot(st.x);
      }
    }
    return acc;
  }

  double dot_xz() const {
    double acc = 0.0;
    for (const auto& st : states_) {
      if (st.kind == SegmentKind::NonNeg) acc += st.x.dot(st.z);
      if (st.kind == SegmentKind::Psd) acc += (st.X.cwiseProduct(st.Z)).sum();
    }
    return acc;
  }

  /// A'y restricted to segment s, in internal (svec) coordinates for Psd.
  Eigen::MatrixXd aty_psd(size_t s, const Eigen::VectorXd& y) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(states_[s].size, states_[s].size);
    const auto& sr = seg_rows_[s];
    for (size_t k = 0; k < sr.row_index.size(); ++k) {
      double w = y[sr.row_index[k]];
      if (w == 0.0) continue;
      for (const auto& e : sr.entries[k]) {
        if (e.p == e.q) {
          out(e.p, e.p) += w * e.v;
        } else {
          out(e.p, e.q) += w * e.v / detail::kSqrt2;
          out(e.q, e.p) += w * e.v / detail::kSqrt2;
        }
      }
    }
    return out;
  }

  Eigen::VectorXd aty_vec(size_t s, const Eigen::VectorXd& y) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(states_[s].size);
    const auto& sr = seg_rows_[s];
    for (size_t k = 0; k < sr.row_index.size(); ++k) {
      double w = y[sr.row_index[k]];
      if (w == 0.0) continue;
      for (const auto& e : sr.entries[k]) out[e.p] += w * e.v;
    }
    return out;
  }

  Eigen::MatrixXd c_psd(size_t s) const { return smat_from_c(s); }

  Eigen::MatrixXd smat_from_c(size_t s) const {
    const int d = states_[s].size;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
    int local = 0;
    for (int p = 0; p < d; ++p)
      for (int q = p; q < d; ++q, ++local) {
        double v = c_seg_[s][local];
        if (p == q) {
          out(p, p) = v;
        } else {
          out(p, q) = v / detail::kSqrt2;
          out(q, p) = v / detail::kSqrt2;
        }
      }
    return out;
  }

  // --- residuals --------------------------------------------------------

  void compute_residuals() {
    rp_ = apply_A() - rhs() * tau_;
    // dual residual per segment: -A'y + c tau - z
    rd_ = Eigen::VectorXd::Zero(total_internal_dim());
    int pos = 0;
    for (size_t s = 0; s < states_.size(); ++s) {
      const auto& st = states_[s];
      if (st.kind == SegmentKind::Psd) {
        Eigen::MatrixXd r = -aty_psd(s, y_) + smat_from_c(s) * tau_ - st.Z;
        pos = store_svec(rd_, pos, r);
      } else {
        Eigen::VectorXd r = -aty_vec(s, y_) + c_seg_[s] * tau_;
        if (st.kind == SegmentKind::NonNeg) r -= st.z;
        rd_.segment(pos, st.x.size()) = r;
        pos += static_cast<int>(st.x.size());
      }
    }
    rg_ = rhs().dot(y_) - dot_cx() - kappa_;
    mu_ = (dot_xz() + tau_ * kappa_) / (nu_ + 1);
  }

  const Eigen::VectorXd& rhs() const { return prob_.rhs; }

  int total_internal_dim() const {
    int n = 0;
    for (const auto& seg : prob_.segments) n += seg.var_count();
    return n;
  }

  int store_svec(Eigen::VectorXd& out, int pos, const Eigen::MatrixXd& m) const {
    const int d = static_cast<int>(m.rows());
    for (int p = 0; p < d; ++p)
      for (int q = p; q < d; ++q) out[pos++] = (p == q) ? m(p, p) : detail::kSqrt2 * m(p, q);
    return pos;
  }

  // --- scaling and factorization ----------------------------------------

  bool scaling_update() {
    for (auto& st : states_) {
      if (st.kind == SegmentKind::NonNeg) {
        st.w2 = st.x.cwiseQuotient(st.z);
        st.lam = (st.x.cwiseProduct(st.z)).cwiseSqrt();
        if (!st.w2.allFinite() || st.w2.minCoeff() <= 0) return false;
      } else if (st.kind == SegmentKind::Psd) {
        Eigen::LLT<Eigen::MatrixXd> lx(st.X), lz(st.Z);
        if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
        Eigen::MatrixXd Lx = lx.matrixL();
        Eigen::MatrixXd Lz = lz.matrixL();
        Eigen::BDCSVD<Eigen::MatrixXd> svd(Lz.transpose() * Lx,
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd sigma = svd.singularValues();
        if (sigma.minCoeff() <= 0) return false;
        Eigen::VectorXd si = sigma.cwiseSqrt().cwiseInverse();
        Eigen::MatrixXd Rfac = Lx * svd.matrixV() * si.asDiagonal();
        st.Rinv = si.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
        st.Wmat = Rfac * Rfac.transpose();
        st.lam_psd = sigma;
      }
    }
    return true;
  }

  /// Forms the Schur complement M = A_c H^{-1} A_c' and factorizes the
  /// regularized augmented system.
  bool factorize() {
    const int m = prob_.row_count();
    M_.setZero(m, m);
    for (size_t s = 0; s < states_.size(); ++s) {
      const auto& st = states_[s];
      const auto& sr = seg_rows_[s];
      if (st.kind == SegmentKind::NonNeg) {
        // Rank-one accumulation per variable via column lists.
        std::vector<std::vector<std::pair<int, double>>> cols(st.size);
        for (size_t k = 0; k < sr.row_index.size(); ++k)
          for (const auto& e : sr.entries[k]) cols[e.p].emplace_back(sr.row_index[k], e.v);
        for (int t = 0; t < st.size; ++t) {
          double d = st.w2[t];
          for (auto [ri, vi] : cols[t])
            for (auto [rj, vj] : cols[t])
              if (rj >= ri) M_(ri, rj) += d * vi * vj;
        }
      } else if (st.kind == SegmentKind::Psd) {
        const int nloc = static_cast<int>(sr.row_index.size());
        Eigen::MatrixXd V(st.size, st.size);
        for (int k = 0; k < nloc; ++k) {
          wbw(st, sr.entries[k], V);
          int ri = sr.row_index[k];
          for (int l = 0; l < nloc; ++l) {
            int rj = sr.row_index[l];
            if (rj < ri) continue;
            M_(ri, rj) += detail::dot_entries(V, sr.entries[l]);
          }
        }
      }
    }
    M_ = M_.selfadjointView<Eigen::Upper>();

    double scale = std::max(1.0, M_.diagonal().cwiseAbs().maxCoeff());
    delta_ = 1e-10 * scale;
    M_.diagonal().array() += delta_;
    llt_m_.compute(M_);
    if (llt_m_.info() != Eigen::Success) {
      M_.diagonal().array() += 1e4 * delta_;
      delta_ *= 1e4;
      llt_m_.compute(M_);
      if (llt_m_.info() != Eigen::Success) return false;
    }
    if (n_free_ > 0) {
      Yf_ = llt_m_.solve(Af_);
      Eigen::MatrixXd S = Af_.transpose() * Yf_;
      S.diagonal().array() += delta_;
      llt_s_.compute(S);
      if (llt_s_.info() != Eigen::Success) return false;
    }
    return true;
  }

  /// W B W for a sparse symmetric B given by svec entries.
  void wbw(const detail::SegState& st, const std::vector<detail::SegEntry>& entries,
           Eigen::MatrixXd& out) const {
    out.setZero(st.size, st.size);
    for (const auto& e : entries) {
      if (e.p == e.q) {
        out.noalias() += e.v * st.Wmat.col(e.p) * st.Wmat.col(e.p).transpose();
      } else {
        double v = e.v / detail::kSqrt2;
        out.noalias() += v * st.Wmat.col(e.p) * st.Wmat.col(e.q).transpose();
        out.noalias() += v * st.Wmat.col(e.q) * st.Wmat.col(e.p).transpose();
      }
    }
  }

  /// Solves the augmented system [[M, Af],[Af', 0]] [u; v] = [r1; r2]
  /// through the regularized factorization, with one refinement round.
  void solve_augmented(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& u,
                       Eigen::VectorXd& v) const {
    auto solve_once = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b, Eigen::VectorXd& uu,
                          Eigen::VectorXd& vv) {
      Eigen::VectorXd t = llt_m_.solve(a);
      if (n_free_ > 0) {
        vv = llt_s_.solve(Af_.transpose() * t - b);
        uu = t - Yf_ * vv;
      } else {
        vv.resize(0);
        uu = t;
      }
    };
    solve_once(r1, r2, u, v);
    for (int round = 0; round < 2; ++round) {
      Eigen::VectorXd res1 = r1 - M_ * u;
      res1 += delta_ * u;  // remove the regularization's own contribution
      if (n_free_ > 0) res1 -= Af_ * v;
      Eigen::VectorXd res2 = (n_free_ > 0) ? (r2 - Af_.transpose() * u).eval() : Eigen::VectorXd();
      Eigen::VectorXd du, dv;
      solve_once(res1, res2, du, dv);
      u += du;
      if (n_free_ > 0) v += dv;
    }
  }

  // --- directions ---------------------------------------------------------

  /// Solves the Newton system for given residual targets. `target_tk` is the
  /// right-hand side of the linearized tau*kappa equation. When `corr` is
  /// non-null its scaled directions supply the Mehrotra corrector for the
  /// cone complementarity targets.
  bool solve_direction(const Eigen::VectorXd& Rp, const Eigen::VectorXd& Rd, double Rg,
                       double Rtk, const Dir* corr, Dir& dir) {
    const size_t nseg = states_.size();
    // Complementarity targets in scaled space: dv = lam^{-1} o d_target,
    // d_target = (sigma mu e - lam o lam - corrector), folded into W^{-1}dv.
    // For the affine pass the caller passes Rtk = -tau kappa and corr null,
    // and sigma mu e is absent from d_target by construction of Rtk's
    // companion targets below.
    std::vector<Eigen::VectorXd> dv_nn(nseg);
    std::vector<Eigen::MatrixXd> dv_psd(nseg);
    double sigma_mu = Rtk + tau_ * kappa_;  // recovers sigma*mu (+ corrector shift)
    if (corr) sigma_mu += corr->dtau * corr->dkappa;
    for (size_t s = 0; s < nseg; ++s) {
      auto& st = states_[s];
      if (st.kind == SegmentKind::NonNeg) {
        Eigen::VectorXd d_target =
            Eigen::VectorXd::Constant(st.size, sigma_mu) - st.lam.cwiseProduct(st.lam);
        if (corr) d_target -= corr_sx_nn_[s].cwiseProduct(corr_sz_nn_[s]);
        dv_nn[s] = d_target.cwiseQuotient(st.lam);
      } else if (st.kind == SegmentKind::Psd) {
        const int d = st.size;
        Eigen::MatrixXd d_target = Eigen::MatrixXd::Zero(d, d);
        d_target.diagonal() =
            Eigen::VectorXd::Constant(d, sigma_mu) - st.lam_psd.cwiseProduct(st.lam_psd);
        if (corr) {
          const Eigen::MatrixXd& sx = corr_sx_psd_[s];
          const Eigen::MatrixXd& sz = corr_sz_psd_[s];
          d_target -= 0.5 * (sx * sz + sz * sx);
        }
        // dv = lam^{-1} o d_target elementwise: 2/(lam_i + lam_j).
        dv_psd[s].resize(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            dv_psd[s](i, j) = 2.0 * d_target(i, j) / (st.lam_psd[i] + st.lam_psd[j]);
      }
    }

    // h0 = H^{-1}(Rd_c + W^{-1} dv); also accumulate A_c h0 and c_c'h0.
    Eigen::VectorXd Ach0 = Eigen::VectorXd::Zero(prob_.row_count());
    double c_h0 = 0.0;
    std::vector<Eigen::VectorXd> h0_nn(nseg);
    std::vector<Eigen::MatrixXd> h0_psd(nseg);
    // u_A = A_c H^{-1} c_c ; q = c_c' H^{-1} c_c
    Eigen::VectorXd uA = Eigen::VectorXd::Zero(prob_.row_count());
    double q = 0.0;
    int pos = 0;
    for (size_t s = 0; s < nseg; ++s) {
      auto& st = states_[s];
      const auto& sr = seg_rows_[s];
      if (st.kind == SegmentKind::Free) {
        pos += st.size;
        continue;
      }
      if (st.kind == SegmentKind::NonNeg) {
        Eigen::VectorXd rdc = Rd.segment(pos, st.size);
        pos += st.size;
        Eigen::VectorXd winv_dv = dv_nn[s].cwiseProduct(st.w2.cwiseSqrt().cwiseInverse());
        h0_nn[s] = st.w2.cwiseProduct(rdc + winv_dv);
        Eigen::VectorXd hc = st.w2.cwiseProduct(c_seg_[s]);
        for (size_t k = 0; k < sr.row_index.size(); ++k) {
          double acc0 = 0.0, accc = 0.0;
          for (const auto& e : sr.entries[k]) {
            acc0 += e.v * h0_nn[s][e.p];
            accc += e.v * hc[e.p];
          }
          Ach0[sr.row_index[k]] += acc0;
          uA[sr.row_index[k]] += accc;
        }
        c_h0 += c_seg_[s].dot(h0_nn[s]);
        q += c_seg_[s].dot(hc);
      } else {
        const int d = st.size;
        Eigen::MatrixXd rdc(d, d);
        // unpack svec slice
        {
          int p2 = pos;
          for (int p = 0; p < d; ++p)
            for (int qq = p; qq < d; ++qq) {
              double v = Rd[p2++];
              if (p == qq) {
                rdc(p, p) = v;
              } else {
                rdc(p, qq) = v / detail::kSqrt2;
                rdc(qq, p) = v / detail::kSqrt2;
              }
            }
          pos = p2;
        }
        // W^{-1} dv = R^{-T} dv R^{-1}
        Eigen::MatrixXd winv_dv = st.Rinv.transpose() * dv_psd[s] * st.Rinv;
        Eigen::MatrixXd h0 = st.Wmat * (rdc + winv_dv) * st.Wmat;
        h0_psd[s] = h0;
        Eigen::MatrixXd cmat = smat_from_c(s);
        Eigen::MatrixXd hc = st.Wmat * cmat * st.Wmat;
        for (size_t k = 0; k < sr.row_index.size(); ++k) {
          Ach0[sr.row_index[k]] += detail::dot_entries(h0, sr.entries[k]);
          uA[sr.row_index[k]] += detail::dot_entries(hc, sr.entries[k]);
        }
        c_h0 += (cmat.cwiseProduct(h0)).sum();
        q += (cmat.cwiseProduct(hc)).sum();
      }
    }

    // Free rows of the dual residual.
    Eigen::VectorXd Rdf = Eigen::VectorXd::Zero(n_free_);
    pos = 0;
    for (size_t s = 0; s < nseg; ++s) {
      int count = prob_.segments[s].var_count();
      if (states_[s].kind == SegmentKind::Free)
        Rdf.segment(free_col_of_seg_[s], count) = Rd.segment(pos, count);
      pos += count;
    }

    // Augmented solves for the tau column and the residual column.
    Eigen::VectorXd p1, q1, p2, q2;
    solve_augmented(uA + rhs(), c_free_, p1, q1);
    solve_augmented(Rp - Ach0, -Rdf, p2, q2);

    double denom = (rhs() - uA).dot(p1) + q + kappa_ / tau_;
    if (n_free_ > 0) denom -= c_free_.dot(q1);
    double numer = Rg - (rhs() - uA).dot(p2) + c_h0 + Rtk / tau_;
    if (n_free_ > 0) numer += c_free_.dot(q2);
    if (!std::isfinite(denom) || std::abs(denom) < 1e-300) return false;
    dir.dtau = numer / denom;
    dir.dy = p2 + dir.dtau * p1;
    if (n_free_ > 0) dir.dx_free = q2 + dir.dtau * q1;
    dir.dkappa = (Rtk - kappa_ * dir.dtau) / tau_;

    // Back-substitute segment directions.
    dir.dx_nn.assign(nseg, {});
    dir.dz_nn.assign(nseg, {});
    dir.dx_psd.assign(nseg, {});
    dir.dz_psd.assign(nseg, {});
    corr_sx_nn_.assign(nseg, {});
    corr_sz_nn_.assign(nseg, {});
    corr_sx_psd_.assign(nseg, {});
    corr_sz_psd_.assign(nseg, {});
    for (size_t s = 0; s < nseg; ++s) {
      auto& st = states_[s];
      const auto& sr = seg_rows_[s];
      if (st.kind == SegmentKind::Free) continue;
      if (st.kind == SegmentKind::NonNeg) {
        Eigen::VectorXd aty = aty_vec(s, dir.dy);
        dir.dx_nn[s] = h0_nn[s] + st.w2.cwiseProduct(aty) - st.w2.cwiseProduct(c_seg_[s]) * dir.dtau;
        Eigen::VectorXd w = st.w2.cwiseSqrt();
        Eigen::VectorXd sx = dir.dx_nn[s].cwiseQuotient(w);
        Eigen::VectorXd sz = dv_nn[s] - sx;
        dir.dz_nn[s] = sz.cwiseQuotient(w);
        corr_sx_nn_[s] = sx;
        corr_sz_nn_[s] = sz;
      } else {
        Eigen::MatrixXd aty = aty_psd(s, dir.dy);
        Eigen::MatrixXd dX =
            h0_psd[s] + st.Wmat * (aty - smat_from_c(s) * dir.dtau) * st.Wmat;
        dX = 0.5 * (dX + dX.transpose()).eval();
        dir.dx_psd[s] = dX;
        Eigen::MatrixXd sx = st.Rinv * dX * st.Rinv.transpose();
        sx = 0.5 * (sx + sx.transpose()).eval();
        Eigen::MatrixXd sz = dv_psd[s] - sx;
        Eigen::MatrixXd dZ = st.Rinv.transpose() * sz * st.Rinv;
        dir.dz_psd[s] = 0.5 * (dZ + dZ.transpose()).eval();
        corr_sx_psd_[s] = sx;
        corr_sz_psd_[s] = 0.5 * (sz + sz.transpose()).eval();
      }
    }
    return true;
  }

  double max_step(const Dir& dir) const {
    double alpha = std::numeric_limits<double>::infinity();
    auto ratio = [&](double v, double dv) {
      if (dv < 0) alpha = std::min(alpha, -v / dv);
    };
    ratio(tau_, dir.dtau);
    ratio(kappa_, dir.dkappa);
    for (size_t s = 0; s < states_.size(); ++s) {
      const auto& st = states_[s];
      if (st.kind == SegmentKind::NonNeg) {
        for (int i = 0; i < st.size; ++i) {
          ratio(st.x[i], dir.dx_nn[s][i]);
          ratio(st.z[i], dir.dz_nn[s][i]);
        }
      } else if (st.kind == SegmentKind::Psd) {
        alpha = std::min(alpha, psd_step(st.lam_psd, corr_scaled(st, dir.dx_psd[s], true)));
        alpha = std::min(alpha, psd_step(st.lam_psd, corr_scaled(st, dir.dz_psd[s], false)));
      }
    }
    return std::min(alpha, 1e10);
  }

  Eigen::MatrixXd corr_scaled(const detail::SegState& st, const Eigen::MatrixXd& d,
                              bool x_side) const {
    if (x_side) {
      Eigen::MatrixXd m = st.Rinv * d * st.Rinv.transpose();
      return 0.5 * (m + m.transpose());
    }
    // z side: R' dZ R = Wmat-scaled via Rinv relation. R = Wmat * Rinv'.
    Eigen::MatrixXd Rfac = st.Wmat * st.Rinv.transpose();
    Eigen::MatrixXd m = Rfac.transpose() * d * Rfac;
    return 0.5 * (m + m.transpose());
  }

  static double psd_step(const Eigen::VectorXd& lam, const Eigen::MatrixXd& scaled_dir) {
    const int d = static_cast<int>(lam.size());
    Eigen::VectorXd inv_sqrt = lam.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd m = inv_sqrt.asDiagonal() * scaled_dir * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                      Eigen::EigenvaluesOnly);
    double mn = es.eigenvalues().minCoeff();
    if (mn >= 0) return std::numeric_limits<double>::infinity();
    return -1.0 / mn;
  }

  /// Complementarity gap after a step of length alpha, relative to now.
  double predicted_gap(const Dir& dir, double alpha) const {
    double acc = (tau_ + alpha * dir.dtau) * (kappa_ + alpha * dir.dkappa);
    for (size_t s = 0; s < states_.size(); ++s) {
      const auto& st = states_[s];
      if (st.kind == SegmentKind::NonNeg) {
        acc += (st.x + alpha * dir.dx_nn[s]).dot(st.z + alpha * dir.dz_nn[s]);
      } else if (st.kind == SegmentKind::Psd) {
        acc += ((st.X + alpha * dir.dx_psd[s]).cwiseProduct(st.Z + alpha * dir.dz_psd[s])).sum();
      }
    }
    return acc / (dot_xz() + tau_ * kappa_);
  }

  void take_step(const Dir& dir, double alpha) {
    for (size_t s = 0; s < states_.size(); ++s) {
      auto& st = states_[s];
      if (st.kind == SegmentKind::Free) {
        st.x += alpha * dir.dx_free.segment(free_col_of_seg_[s], st.size);
      } else if (st.kind == SegmentKind::NonNeg) {
        st.x += alpha * dir.dx_nn[s];
        st.z += alpha * dir.dz_nn[s];
      } else {
        st.X += alpha * dir.dx_psd[s];
        st.Z += alpha * dir.dz_psd[s];
      }
    }
    y_ += alpha * dir.dy;
    tau_ += alpha * dir.dtau;
    kappa_ += alpha * dir.dkappa;
  }

  // --- termination --------------------------------------------------------

  /// Worst of the three convergence measures, each normalized by its
  /// tolerance; <= 1 means converged.
  double merit_score() const {
    const double bnorm = 1.0 + rhs().cwiseAbs().maxCoeff();
    double cnorm = 1.0;
    for (const auto& cs : c_seg_)
      if (cs.size() > 0) cnorm = std::max(cnorm, 1.0 + cs.cwiseAbs().maxCoeff());
    double pres = rp_.cwiseAbs().maxCoeff() / (tau_ * bnorm);
    double dres = rd_.cwiseAbs().maxCoeff() / (tau_ * cnorm);
    double pobj = dot_cx() / tau_;
    double dobj = rhs().dot(y_) / tau_;
    double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    return std::max({pres / opt_.feas_tol, dres / opt_.feas_tol, relgap / opt_.gap_tol});
  }

  /// Detects infeasibility or unboundedness: tau -> 0 with the homogeneous
  /// residuals vanishing means the original problem has no complementary
  /// solution and (y, z) or x is a certificate ray.
  bool check_certificates(SolveStatus& status) const {
    double by = rhs().dot(y_);
    double cx = dot_cx();
    double hres_p = rp_.cwiseAbs().maxCoeff();
    double hres_d = rd_.cwiseAbs().maxCoeff();
    if (tau_ <= 1e-9 * std::max(1.0, kappa_)) {
      if (by > 0 && hres_d <= 1e-7 * by) {
        status = SolveStatus::Infeasible;
        return true;
      }
      if (cx < 0 && hres_p <= 1e-7 * (-cx)) {
        status = SolveStatus::Unbounded;
        return true;
      }
    }
    return false;
  }

  void save_snapshot() {
    snap_states_ = states_;
    snap_y_ = y_;
    snap_tau_ = tau_;
    snap_kappa_ = kappa_;
  }

  void restore_snapshot() {
    states_ = snap_states_;
    y_ = snap_y_;
    tau_ = snap_tau_;
    kappa_ = snap_kappa_;
  }

  void finalize(ConicSolution& sol, SolveStatus fallback) {
    double scale = (fallback == SolveStatus::Optimal) ? tau_ : 1.0;
    if (fallback == SolveStatus::Infeasible || fallback == SolveStatus::Unbounded) scale = 1.0;
    sol.status = fallback;
    sol.x.resize(total_internal_dim());
    sol.z.resize(total_internal_dim());
    int pos = 0;
    for (size_t s = 0; s < states_.size(); ++s) {
      const auto& st = states_[s];
      if (st.kind == SegmentKind::Psd) {
        for (int p = 0; p < st.size; ++p)
          for (int q2 = p; q2 < st.size; ++q2) {
            sol.x[pos] = st.X(p, q2) / scale;
            sol.z[pos] = st.Z(p, q2) / scale;
            ++pos;
          }
      } else {
        for (int i = 0; i < st.size; ++i) {
          sol.x[pos] = st.x[i] / scale;
          sol.z[pos] = (st.kind == SegmentKind::NonNeg) ? st.z[i] / scale : 0.0;
          ++pos;
        }
      }
    }
    sol.y = y_ / scale;
    sol.primal_value = dot_cx() / tau_;
    sol.dual_value = rhs().dot(y_) / tau_;
    sol.primal_residual = rp_.cwiseAbs().maxCoeff() / tau_;
    sol.dual_residual = rd_.cwiseAbs().maxCoeff() / tau_;
    sol.gap = std::abs(sol.primal_value - sol.dual_value);
  }

  ConicProblem prob_;
  SolveOptions opt_;
  std::vector<detail::SegRows> seg_rows_;
  std::vector<int> seg_off_;
  std::vector<Eigen::VectorXd> c_seg_;
  std::vector<detail::SegState> states_;
  std::vector<int> free_col_of_seg_;
  Eigen::MatrixXd Af_, M_, Yf_;
  Eigen::VectorXd c_free_, y_, rp_, rd_;
  Eigen::LLT<Eigen::MatrixXd> llt_m_, llt_s_;
  double rg_ = 0, mu_ = 0, tau_ = 1, kappa_ = 1, delta_ = 0;
  int nu_ = 0, n_free_ = 0;
  double best_merit_ = std::numeric_limits<double>::infinity();
  int stall_ = 0;
  std::vector<detail::SegState> snap_states_;
  Eigen::VectorXd snap_y_;
  double snap_tau_ = 1, snap_kappa_ = 1;

  // Mehrotra corrector scratch (scaled affine directions).
  std::vector<Eigen::VectorXd> corr_sx_nn_, corr_sz_nn_;
  std::vector<Eigen::MatrixXd> corr_sx_psd_, corr_sz_psd_;
};

inline ConicSolution solve(const ConicProblem& problem, const SolveOptions& options = {}) {
  Solver solver(problem, options);
  return solver.run();
}

// --- SDPA sparse format ----------------------------------------------------
//
// The file stores the pair
//     (file-P)  min  d'u  s.t.  sum_t u_t F_t - F_0 in PSD/diag blocks
//     (file-D)  max  tr(F_0 Y)  s.t.  tr(F_t Y) = d_t,  Y in blocks.
// A ConicProblem maps onto (file-D): blocks are the problem's segments
// (nonnegative orthants as negative/diagonal block sizes), F_t encodes
// equality row t, d is the right-hand side and F_0 the negated objective.
// Free segments cannot be expressed in the format and are split into
// differences of nonnegative pairs before writing.

/// Rewrites each free segment as a NonNeg segment of twice the size holding
/// (positive part, negative part). The optimum is unchanged.
inline ConicProblem split_free_segments(const ConicProblem& p) {
  bool has_free = false;
  for (const auto& s : p.segments) has_free |= s.kind == SegmentKind::Free;
  if (!has_free) return p;

  ConicProblem out;
  std::vector<int> new_off(p.segments.size());
  int off = 0;
  for (size_t s = 0; s < p.segments.size(); ++s) {
    new_off[s] = off;
    Segment seg = p.segments[s];
    if (seg.kind == SegmentKind::Free) {
      seg.kind = SegmentKind::NonNeg;
      seg.size *= 2;
    }
    out.segments.push_back(seg);
    off += seg.var_count();
  }
  out.objective = Eigen::VectorXd::Zero(off);
  for (size_t s = 0; s < p.segments.size(); ++s) {
    int old_off = p.segment_offset(static_cast<int>(s));
    int count = p.segments[s].var_count();
    for (int i = 0; i < count; ++i) {
      double v = p.objective[old_off + i];
      if (p.segments[s].kind == SegmentKind::Free) {
        out.objective[new_off[s] + 2 * i] = v;
        out.objective[new_off[s] + 2 * i + 1] = -v;
      } else {
        out.objective[new_off[s] + i] = v;
      }
    }
  }
  out.rhs = p.rhs;
  for (const auto& row : p.rows) {
    SparseRow nr;
    for (auto [col, v] : row.entries) {
      size_t s = 0;
      int local = col;
      while (s + 1 < p.segments.size() && p.segment_offset(static_cast<int>(s) + 1) <= col) ++s;
      local = col - p.segment_offset(static_cast<int>(s));
      if (p.segments[s].kind == SegmentKind::Free) {
        nr.add(new_off[s] + 2 * local, v);
        nr.add(new_off[s] + 2 * local + 1, -v);
      } else {
        nr.add(new_off[s] + local, v);
      }
    }
    out.rows.push_back(std::move(nr));
  }
  return out;
}

inline void export_sdpa(const ConicProblem& problem, std::ostream& os) {
  ConicProblem p = split_free_segments(problem);
  p.validate();
  const int m = p.row_count();
  os << "* tesh conic problem (SDPA sparse format)\n";
  os << m << "\n";
  os << p.segments.size() << "\n";
  {
    std::ostringstream sizes;
    for (size_t s = 0; s < p.segments.size(); ++s) {
      if (s) sizes << " ";
      sizes << (p.segments[s].kind == SegmentKind::Psd ? p.segments[s].size : -p.segments[s].size);
    }
    os << sizes.str() << "\n";
  }
  char buf[64];
  {
    std::ostringstream line;
    for (int i = 0; i < m; ++i) {
      if (i) line << " ";
      std::snprintf(buf, sizeof buf, "%.17g", p.rhs[i]);
      line << buf;
    }
    os << line.str() << "\n";
  }
  // matno 0 holds F_0 = -objective; matno t>=1 holds equality row t-1.
  auto emit = [&](int matno, int col, double v) {
    size_t s = 0;
    while (s + 1 < p.segments.size() && p.segment_offset(static_cast<int>(s) + 1) <= col) ++s;
    int local = col - p.segment_offset(static_cast<int>(s));
    int i = 0, j = 0;
    double value = v;
    if (p.segments[s].kind == SegmentKind::Psd) {
      int d = p.segments[s].size, pp = 0, rem = local;
      while (rem >= d - pp) {
        rem -= d - pp;
        ++pp;
      }
      i = pp;
      j = pp + rem;
      if (i != j) value = v / 2.0;  // tr(F Y) doubles off-diagonal terms
    } else {
      i = j = local;
    }
    if (value == 0.0) return;
    std::snprintf(buf, sizeof buf, "%.17g", value);
    os << matno << " " << (s + 1) << " " << (i + 1) << " " << (j + 1) << " " << buf << "\n";
  };
  for (int col = 0; col < p.var_count(); ++col)
    if (p.objective[col] != 0.0) emit(0, col, -p.objective[col]);
  for (int t = 0; t < m; ++t)
    for (auto [col, v] : p.rows[t].entries) emit(t + 1, col, v);
}

inline void export_sdpa(const ConicProblem& problem, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("export_sdpa: cannot open " + path);
  export_sdpa(problem, os);
  if (!os.good()) throw std::runtime_error("export_sdpa: write failure on " + path);
}

inline ConicProblem import_sdpa(std::istream& is) {
  auto next_data_line = [&](std::string& line) {
    while (std::getline(is, line)) {
      size_t pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;
      if (line[pos] == '*' || line[pos] == '"') continue;
      return true;
    }
    return false;
  };
  auto tokenize = [](const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : line) {
      if (ch == ',' || ch == ' ' || ch == '\t' || ch == '(' || ch == ')' || ch == '{' ||
          ch == '}' || ch == '\r') {
        if (!cur.empty()) toks.push_back(std::move(cur)), cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) toks.push_back(std::move(cur));
    return toks;
  };

  std::string line;
  if (!next_data_line(line)) throw std::runtime_error("import_sdpa: missing constraint count");
  int m = std::stoi(tokenize(line).at(0));
  if (!next_data_line(line)) throw std::runtime_error("import_sdpa: missing block count");
  int nblocks = std::stoi(tokenize(line).at(0));
  if (!next_data_line(line)) throw std::runtime_error("import_sdpa: missing block sizes");
  auto sizes = tokenize(line);
  if (static_cast<int>(sizes.size()) < nblocks)
    throw std::runtime_error("import_sdpa: bad block size line");

  ConicProblem p;
  for (int b = 0; b < nblocks; ++b) {
    int sz = std::stoi(sizes[b]);
    Segment seg;
    if (sz < 0) {
      seg.kind = SegmentKind::NonNeg;
      seg.size = -sz;
    } else {
      seg.kind = SegmentKind::Psd;
      seg.size = sz;
    }
    p.segments.push_back(seg);
  }
  if (!next_data_line(line)) throw std::runtime_error("import_sdpa: missing objective line");
  auto cvals = tokenize(line);
  if (static_cast<int>(cvals.size()) < m) throw std::runtime_error("import_sdpa: bad objective line");
  p.rhs.resize(m);
  for (int i = 0; i < m; ++i) p.rhs[i] = std::stod(cvals[i]);
  p.objective = Eigen::VectorXd::Zero(p.var_count());
  p.rows.assign(m, {});

  while (next_data_line(line)) {
    auto toks = tokenize(line);
    if (toks.size() < 5) throw std::runtime_error("import_sdpa: bad entry line: " + line);
    int matno = std::stoi(toks[0]);
    int blkno = std::stoi(toks[1]) - 1;
    int i = std::stoi(toks[2]) - 1;
    int j = std::stoi(toks[3]) - 1;
    double v = std::stod(toks[4]);
    if (matno < 0 || matno > m) throw std::runtime_error("import_sdpa: matrix number out of range");
    if (blkno < 0 || blkno >= nblocks) throw std::runtime_error("import_sdpa: block out of range");
    const Segment& seg = p.segments[blkno];
    if (i > j) std::swap(i, j);
    if (j >= seg.size) throw std::runtime_error("import_sdpa: entry outside block");
    int col;
    double coef;
    if (seg.kind == SegmentKind::Psd) {
      col = p.segment_offset(blkno) + ConicProblem::psd_entry(seg.size, i, j);
      coef = (i == j) ? v : 2.0 * v;
    } else {
      if (i != j) throw std::runtime_error("import_sdpa: off-diagonal entry in diagonal block");
      col = p.segment_offset(blkno) + i;
      coef = v;
    }
    if (matno == 0) {
      p.objective[col] += -coef;
    } else {
      p.rows[matno - 1].add(col, coef);
    }
  }
  p.validate();
  return p;
}

inline ConicProblem import_sdpa(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("import_sdpa: cannot open " + path);
  return import_sdpa(is);
}

}  // namespace tesh::conic
