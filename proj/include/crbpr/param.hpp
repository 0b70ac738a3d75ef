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

#include <string>
#include <utility>

#include "crbpr/types.hpp"

namespace crbpr {

// A named learnable tensor and its gradient buffer of identical shape.
template <class S>
struct Param {
  std::string name;
  MatX<S> value;
  MatX<S> grad;

  Param() = default;
  Param(std::string n, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(n)),
        value(MatX<S>::Zero(rows, cols)),
        grad(MatX<S>::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }

  void check_grad_finite() const {
    if (!grad.allFinite()) {
      throw NumericError("non-finite gradient in parameter " + name);
    }
  }
};

}  // namespace crbpr
