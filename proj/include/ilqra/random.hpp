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

#pragma once

#include "ilqra/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace ilqra {

// Portable seeded randomness: std::mt19937_64 (its output sequence is fixed
// by the C++ standard) with our own conversion to doubles, since the
// standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (one value per call).
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Uniform in the closed ball of the given radius.
  Vec in_ball(int dim, double radius) {
    Vec d(dim);
    for (int k = 0; k < dim; ++k) d[k] = normal();
    const double norm = d.norm();
    if (norm == 0.0) return Vec::Zero(dim);
    const double r = radius * std::pow(uniform(), 1.0 / dim);
    return d * (r / norm);
  }

  Mat matrix(int rows, int cols, double lo = -1.0, double hi = 1.0) {
    Mat m(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) m(r, c) = uniform(lo, hi);
    return m;
  }

  Vec vector(int dim, double lo = -1.0, double hi = 1.0) {
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = uniform(lo, hi);
    return v;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ilqra
