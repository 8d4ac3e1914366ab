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

///////////////////////////////////////////////////////////////////////////////
//
// Finite-horizon N-player LQ feedback Nash solvers (Basar & Olsder,
// Cor. 6.1), in deviation coordinates
//
//   dx_{t+1} = A_t dx_t + sum_j B^j_t du^j_t,
//   du^i_t   = -K^i_t dx_t - k^i_t,
//
// with player i paying 0.5 dx'Q dx + q'dx + 0.5 du^i'R du^i + r'du^i per
// stage. Each player's cost-to-go is 0.5 dx'Z dx + z'dx.
//
// At every step the gains of all players are found together from the
// stacked first-order conditions
//
//   (R^i + B^i'Z^i B^i) K^i + B^i'Z^i sum_{j!=i} B^j K^j = B^i'Z^i A
//   (R^i + B^i'Z^i B^i) k^i + B^i'Z^i sum_{j!=i} B^j k^j = B^i'z^i + r^i
//
// which is one dense (sum m_i) x (sum m_i) solve.
//
///////////////////////////////////////////////////////////////////////////////

#pragma once

#include "ilqra/types.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ilqra {

struct ValuePair {
  Mat Z;
  Vec z;
};

struct RiccatiStep {
  PerPlayer<Mat> K;
  PerPlayer<Vec> k;
  // Closed-loop value update with the stage costs passed in.
  PerPlayer<ValuePair> value;
};

class SingularGameError : public std::runtime_error {
 public:
  SingularGameError(int time, const std::string& what)
      : std::runtime_error(what), time_(time) {}
  int time() const { return time_; }

 private:
  int time_;
};

// One backward step of the coupled Riccati recursion. `time` is only used to
// label a SingularGameError.
RiccatiStep riccati_step(const Mat& A, const PerPlayer<Mat>& B,
                         const PerPlayer<ValuePair>& next,
                         const PerPlayer<Mat>& Q, const PerPlayer<Vec>& q,
                         const PerPlayer<Mat>& R, const PerPlayer<Vec>& r,
                         int time = -1);

struct LqSolution {
  PerPlayer<TimeSeries<Mat>> K;        // t = 0..T-1
  PerPlayer<TimeSeries<Vec>> k;        // t = 0..T-1
  PerPlayer<TimeSeries<ValuePair>> V;  // t = 0..T
};

// Standard time-additive solve; terminal value is (Q_T, q_T).
LqSolution solve_standard(const LqApprox& lq);

// Time-consistent solve: the gains at each step come from the same coupled
// Riccati step, but a player's value is reset to (Q^i_t, q^i_t) at each of
// its critical times instead of being propagated, so later critical times
// stop influencing earlier decisions. The terminal value is (Q_T, q_T).
LqSolution solve_time_consistent(const LqApprox& lq,
                                 const PerPlayer<CriticalSet>& critical);

// Exact cost of player i for a closed-loop rollout of the deviation system
// from dx0 under the given gains; includes the terminal term.
double lq_player_cost(const LqApprox& lq, const PerPlayer<TimeSeries<Mat>>& K,
                      const PerPlayer<TimeSeries<Vec>>& k, const Vec& dx0,
                      int player);

}  // namespace ilqra
