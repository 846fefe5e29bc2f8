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

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ldsc/numerics/parameter.hpp"

namespace ldsc {

// Central-difference gradient of loss_fn with respect to every coordinate of
// every parameter. Each coordinate is restored bit-exactly after probing.
inline std::vector<Matrix> finite_diff_grad(
    const std::function<double()>& loss_fn, const ParameterList& params,
    double h = 1e-5) {
  std::vector<Matrix> grads;
  grads.reserve(params.size());
  for (Parameter* p : params) {
    Matrix g(p->rows(), p->cols());
    auto value = p->value.data();
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double saved = value[i];
      value[i] = saved + h;
      const double up = loss_fn();
      value[i] = saved - h;
      const double down = loss_fn();
      value[i] = saved;
      g[i] = (up - down) / (2.0 * h);
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

// |a - n| / max(1, |n|), maximized over all coordinates.
inline double max_relative_error(const Matrix& analytic, const Matrix& numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::max(1.0, std::abs(numeric[i]));
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
  }
  return worst;
}

}  // namespace ldsc
