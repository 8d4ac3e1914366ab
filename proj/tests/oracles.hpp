/*
 Copyright 2026 The ilqra Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Test-only oracles written independently of the library code paths:
// a cubic reach-avoid evaluator, an affine LQR with drift, best responses,
// and random LQ problem generators.

#pragma once

#include "ilqra/random.hpp"
#include "ilqra/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <vector>

namespace ilqra::oracle {

// min over t >= s of max{l_t, max over s <= tau <= t of g_tau}, with the
// inner max recomputed from scratch for every t.
inline double naive_reach_avoid(const std::vector<double>& l,
                                const std::vector<double>& g, int s) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t t = s; t < l.size(); ++t) {
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t tau = s; tau <= t; ++tau) worst = std::max(worst, g[tau]);
    best = std::min(best, std::max(l[t], worst));
  }
  return best;
}

// Single-player LQ problem with drift:
//   x' = A_t x + B_t u + c_t,  cost sum 0.5 x'Q x + q'x + 0.5 u'R u + r'u.
// Policy u = -K x - k.
struct Lqr {
  std::vector<Mat> K;
  std::vector<Vec> k;
  std::vector<Mat> P;  // value Hessians, t = 0..T
  std::vector<Vec> p;
};

inline Lqr solve_lqr(const std::vector<Mat>& A, const std::vector<Mat>& B,
                     const std::vector<Vec>& c, const std::vector<Mat>& Q,
                     const std::vector<Vec>& q, const std::vector<Mat>& R,
                     const std::vector<Vec>& r) {
  const size_t T = A.size();
  Lqr out;
  out.K.resize(T);
  out.k.resize(T);
  out.P.resize(T + 1);
  out.p.resize(T + 1);
  out.P[T] = Q[T];
  out.p[T] = q[T];
  for (size_t s = T; s-- > 0;) {
    const Mat& P = out.P[s + 1];
    const Vec& p = out.p[s + 1];
    const Mat H = R[s] + B[s].transpose() * P * B[s];
    const Eigen::FullPivLU<Mat> lu(H);
    out.K[s] = lu.solve(B[s].transpose() * P * A[s]);
    out.k[s] = lu.solve(B[s].transpose() * (P * c[s] + p) + r[s]);
    const Mat Acl = A[s] - B[s] * out.K[s];
    const Vec ccl = c[s] - B[s] * out.k[s];
    // Joseph-style closed-loop form.
    out.P[s] = Q[s] + out.K[s].transpose() * R[s] * out.K[s] +
               Acl.transpose() * P * Acl;
    out.p[s] = q[s] + out.K[s].transpose() * (R[s] * out.k[s] - r[s]) +
               Acl.transpose() * (P * ccl + p);
  }
  return out;
}

// Player i's best response when every other player follows (K^j, k^j).
inline Lqr best_response(const LqApprox& lq,
                         const PerPlayer<TimeSeries<Mat>>& K,
                         const PerPlayer<TimeSeries<Vec>>& k, int i) {
  const int T = lq.horizon();
  const int n = lq.state_dim();
  std::vector<Mat> A(T), B(T);
  std::vector<Vec> c(T);
  for (int t = 0; t < T; ++t) {
    A[t] = lq.A[t];
    c[t] = Vec::Zero(n);
    for (int j = 0; j < lq.num_players(); ++j) {
      if (j == i) continue;
      A[t] -= lq.B[j][t] * K[j][t];
      c[t] -= lq.B[j][t] * k[j][t];
    }
    B[t] = lq.B[i][t];
  }
  return solve_lqr(A, B, c, lq.Q[i], lq.q[i], lq.R[i], lq.r[i]);
}

inline Mat random_psd(Rng& rng, int n, double shift) {
  const Mat M = rng.matrix(n, n);
  return M.transpose() * M + shift * Mat::Identity(n, n);
}

// Random LQ game with PSD state costs and PD control costs.
inline LqApprox random_game(Rng& rng, int T, int n,
                            const std::vector<int>& m) {
  LqApprox lq = LqApprox::zeros(T, n, m);
  const int N = static_cast<int>(m.size());
  for (int t = 0; t < T; ++t) {
    lq.A[t] = Mat::Identity(n, n) + 0.3 * rng.matrix(n, n);
    for (int i = 0; i < N; ++i) {
      lq.B[i][t] = rng.matrix(n, m[i]);
      lq.R[i][t] = random_psd(rng, m[i], 1.0);
      lq.r[i][t] = rng.vector(m[i]);
    }
  }
  for (int t = 0; t <= T; ++t) {
    for (int i = 0; i < N; ++i) {
      lq.Q[i][t] = random_psd(rng, n, 0.0) * 0.5;
      lq.q[i][t] = rng.vector(n);
    }
  }
  return lq;
}

}  // namespace ilqra::oracle
