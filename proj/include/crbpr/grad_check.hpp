// Copyright 2026 The crbpr Authors
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
#include <random>
#include <span>
#include <string>

#include "crbpr/param.hpp"

namespace crbpr {

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::string worst_param;
  Eigen::Index worst_coord = -1;
  double analytic = 0.0;
  double central = 0.0;
};

// Central-difference check of the gradients currently staged in `params`.
// loss_fn re-evaluates the loss at the current parameter values and must be
// deterministic and side-effect-free. Each parameter coordinate is perturbed
// by +-step; coords_per_param > 0 samples that many coordinates per
// parameter (seeded), otherwise all coordinates are checked. The relative
// error is |analytic - central| / max(|central|, floor).
template <class S>
GradCheckResult finite_diff_check(std::span<Param<S>* const> params,
                                  const std::function<double()>& loss_fn,
                                  double step, int coords_per_param = 0,
                                  std::uint64_t seed = 0,
                                  double floor = 1e-8) {
  GradCheckResult res;
  std::mt19937_64 rng(seed);
  for (Param<S>* p : params) {
    const Eigen::Index n = p->value.size();
    std::vector<Eigen::Index> coords;
    if (coords_per_param > 0 && Eigen::Index(coords_per_param) < n) {
      std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
      for (int c = 0; c < coords_per_param; ++c) coords.push_back(pick(rng));
    } else {
      coords.resize(std::size_t(n));
      for (Eigen::Index j = 0; j < n; ++j) coords[std::size_t(j)] = j;
    }
    for (Eigen::Index j : coords) {
      const S saved = p->value(j);
      p->value(j) = S(double(saved) + step);
      const double lp = loss_fn();
      p->value(j) = S(double(saved) - step);
      const double lm = loss_fn();
      p->value(j) = saved;
      const double central = (lp - lm) / (2.0 * step);
      const double analytic = double(p->grad(j));
      const double rel =
          std::abs(analytic - central) / std::max(std::abs(central), floor);
      if (rel > res.max_rel_err) {
        res.max_rel_err = rel;
        res.worst_param = p->name;
        res.worst_coord = j;
        res.analytic = analytic;
        res.central = central;
      }
    }
  }
  return res;
}

}  // namespace crbpr
