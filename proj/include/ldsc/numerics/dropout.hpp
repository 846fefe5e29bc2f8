// Copyright 2026 The ldsc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

#include "ldsc/errors.hpp"
#include "ldsc/numerics/matrix.hpp"
#include "ldsc/numerics/rng.hpp"

namespace ldsc {

// Inverted dropout: entries are 0 with probability p_drop, otherwise
// 1 / (1 - p_drop), so the expected mask is all ones.
inline Matrix dropout_mask(Rng& rng, std::size_t rows, std::size_t cols,
                           double p_drop = 0.5) {
  if (p_drop < 0.0 || p_drop >= 1.0) {
    throw ConfigError("dropout probability must lie in [0, 1)");
  }
  Matrix mask(rows, cols, 1.0);
  if (p_drop == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - p_drop);
  for (double& v : mask.data()) v = rng.bernoulli(p_drop) ? 0.0 : keep_scale;
  return mask;
}

inline Vec dropout_vec(Rng& rng, std::size_t n, double p_drop) {
  const Matrix m = dropout_mask(rng, n, 1, p_drop);
  return Vec(m.data().begin(), m.data().end());
}

}  // namespace ldsc
