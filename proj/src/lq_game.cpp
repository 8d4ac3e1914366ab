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

#include "ilqra/lq_game.hpp"

#include <Eigen/LU>

#include <algorithm>

namespace ilqra {

RiccatiStep riccati_step(const Mat& A, const PerPlayer<Mat>& B,
                         const PerPlayer<ValuePair>& next,
                         const PerPlayer<Mat>& Q, const PerPlayer<Vec>& q,
                         const PerPlayer<Mat>& R, const PerPlayer<Vec>& r,
                         int time) {
  const int num_players = static_cast<int>(B.size());
  const int n = static_cast<int>(A.rows());

  std::vector<int> offset(num_players + 1, 0);
  for (int i = 0; i < num_players; ++i)
    offset[i + 1] = offset[i] + static_cast<int>(B[i].cols());
  const int total = offset.back();

  // S [K; k] = Y, one block row per player.
  Mat S(total, total);
  Mat Y(total, n + 1);
  for (int i = 0; i < num_players; ++i) {
    const int mi = static_cast<int>(B[i].cols());
    const Mat BtZ = B[i].transpose() * next[i].Z;
    for (int j = 0; j < num_players; ++j) {
      S.block(offset[i], offset[j], mi, B[j].cols()) = BtZ * B[j];
    }
    S.block(offset[i], offset[i], mi, mi) += R[i];
    Y.block(offset[i], 0, mi, n) = BtZ * A;
    Y.block(offset[i], n, mi, 1) = B[i].transpose() * next[i].z + r[i];
  }

  Eigen::FullPivLU<Mat> lu(S);
  if (!lu.isInvertible()) {
    throw SingularGameError(
        time, "coupled Riccati system is singular at time step " +
                  std::to_string(time));
  }
  const Mat X = lu.solve(Y);
  if (!X.allFinite()) {
    throw SingularGameError(time, "coupled Riccati solve produced non-finite "
                                  "gains at time step " +
                                      std::to_string(time));
  }

  RiccatiStep out;
  Mat F = A;
  Vec beta = Vec::Zero(n);
  for (int i = 0; i < num_players; ++i) {
    const int mi = static_cast<int>(B[i].cols());
    out.K.push_back(X.block(offset[i], 0, mi, n));
    out.k.push_back(X.block(offset[i], n, mi, 1));
    F -= B[i] * out.K.back();
    beta -= B[i] * out.k.back();
  }

  for (int i = 0; i < num_players; ++i) {
    const Mat& K = out.K[i];
    const Vec& k = out.k[i];
    ValuePair v;
    v.Z = F.transpose() * next[i].Z * F + K.transpose() * R[i] * K + Q[i];
    v.Z = 0.5 * (v.Z + v.Z.transpose());
    v.z = F.transpose() * (next[i].z + next[i].Z * beta) +
          K.transpose() * (R[i] * k - r[i]) + q[i];
    out.value.push_back(std::move(v));
  }
  return out;
}

namespace {

LqSolution solve(const LqApprox& lq, const PerPlayer<CriticalSet>* critical) {
  const int T = lq.horizon();
  const int N = lq.num_players();

  // is_critical[i][t]
  std::vector<std::vector<char>> is_critical;
  if (critical) {
    if (static_cast<int>(critical->size()) != N)
      throw DimensionError("critical sets must be given for every player");
    for (int i = 0; i < N; ++i) {
      std::vector<char> flags(T + 1, 0);
      for (const auto& c : (*critical)[i]) {
        if (c.time < 0 || c.time > T)
          throw std::out_of_range("critical time outside the horizon");
        flags[c.time] = 1;
      }
      is_critical.push_back(std::move(flags));
    }
  }

  LqSolution sol;
  sol.K.assign(N, TimeSeries<Mat>(T));
  sol.k.assign(N, TimeSeries<Vec>(T));
  sol.V.assign(N, TimeSeries<ValuePair>(T + 1));
  for (int i = 0; i < N; ++i) {
    sol.V[i][T] = {lq.Q[i][T], lq.q[i][T]};
  }

  PerPlayer<ValuePair> next(N);
  PerPlayer<Mat> B(N), Q(N), R(N);
  PerPlayer<Vec> q(N), r(N);
  for (int t = T - 1; t >= 0; --t) {
    for (int i = 0; i < N; ++i) {
      next[i] = sol.V[i][t + 1];
      B[i] = lq.B[i][t];
      Q[i] = lq.Q[i][t];
      q[i] = lq.q[i][t];
      R[i] = lq.R[i][t];
      r[i] = lq.r[i][t];
    }
    RiccatiStep step = riccati_step(lq.A[t], B, next, Q, q, R, r, t);
    for (int i = 0; i < N; ++i) {
      sol.K[i][t] = std::move(step.K[i]);
      sol.k[i][t] = std::move(step.k[i]);
      if (critical && is_critical[i][t]) {
        sol.V[i][t] = {lq.Q[i][t], lq.q[i][t]};
      } else {
        sol.V[i][t] = std::move(step.value[i]);
      }
    }
  }
  return sol;
}

}  // namespace

LqSolution solve_standard(const LqApprox& lq) { return solve(lq, nullptr); }

LqSolution solve_time_consistent(const LqApprox& lq,
                                 const PerPlayer<CriticalSet>& critical) {
  return solve(lq, &critical);
}

double lq_player_cost(const LqApprox& lq, const PerPlayer<TimeSeries<Mat>>& K,
                      const PerPlayer<TimeSeries<Vec>>& k, const Vec& dx0,
                      int player) {
  const int T = lq.horizon();
  const int N = lq.num_players();
  Vec x = dx0;
  double cost = 0.0;
  for (int t = 0; t < T; ++t) {
    Vec next = lq.A[t] * x;
    for (int j = 0; j < N; ++j) {
      const Vec u = -K[j][t] * x - k[j][t];
      next += lq.B[j][t] * u;
      if (j == player) {
        cost += 0.5 * u.dot(lq.R[j][t] * u) + lq.r[j][t].dot(u);
      }
    }
    cost += 0.5 * x.dot(lq.Q[player][t] * x) + lq.q[player][t].dot(x);
    x = next;
  }
  cost += 0.5 * x.dot(lq.Q[player][T] * x) + lq.q[player][T].dot(x);
  return cost;
}

}  // namespace ilqra
