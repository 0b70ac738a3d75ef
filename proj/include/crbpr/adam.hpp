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

#include <cmath>
#include <span>
#include <vector>

#include "crbpr/param.hpp"

namespace crbpr {

// Bias-corrected Adam. Moment buffers are allocated on first use and are
// positionally aligned with the parameter list passed to every step call;
// the list must not change between steps.
template <class S>
struct AdamState {
  std::vector<MatX<S>> first_moment;
  std::vector<MatX<S>> second_moment;
  long step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
};

// One update from the gradients currently staged in the params. Gradients
// are left untouched; the caller zeroes them.
template <class S>
void adam_step(std::span<Param<S>* const> params, AdamState<S>& state,
               double learning_rate) {
  if (state.first_moment.empty()) {
    for (const Param<S>* p : params) {
      state.first_moment.push_back(MatX<S>::Zero(p->value.rows(), p->value.cols()));
      state.second_moment.push_back(MatX<S>::Zero(p->value.rows(), p->value.cols()));
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw DimensionError("adam_step: state tracks a different parameter list");
  }
  state.step_count += 1;
  const double b1 = state.beta1, b2 = state.beta2;
  const double corr1 = 1.0 - std::pow(b1, double(state.step_count));
  const double corr2 = 1.0 - std::pow(b2, double(state.step_count));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Param<S>& p = *params[i];
    MatX<S>& m = state.first_moment[i];
    MatX<S>& v = state.second_moment[i];
    for (Eigen::Index j = 0; j < p.value.size(); ++j) {
      const double g = double(p.grad(j));
      const double mj = b1 * double(m(j)) + (1.0 - b1) * g;
      const double vj = b2 * double(v(j)) + (1.0 - b2) * g * g;
      m(j) = S(mj);
      v(j) = S(vj);
      const double mhat = mj / corr1;
      const double vhat = vj / corr2;
      const double upd = learning_rate * mhat / (std::sqrt(vhat) + state.eps_adam);
      const double next = double(p.value(j)) - upd;
      if (!std::isfinite(next)) {
        throw NumericError("adam_step: non-finite update in parameter " + p.name);
      }
      p.value(j) = S(next);
    }
  }
}

}  // namespace crbpr
