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

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace crbpr {

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using MatXi = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
using VecXi = Eigen::Matrix<int, Eigen::Dynamic, 1>;

// Denominator floor of the batch feature scaling.
inline constexpr double kNormEps = 1e-12;

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape mismatch between operands; message names the offending shapes.
struct DimensionError : Error {
  using Error::Error;
};

// NaN/Inf encountered where a finite value is required.
struct NumericError : Error {
  using Error::Error;
};

// Malformed or inconsistent input data; message names the row/id.
struct LoadError : Error {
  using Error::Error;
};

// Bad configuration or argument values.
struct ConfigError : Error {
  using Error::Error;
};

// Unknown user/product id passed to a lookup.
struct LookupError : Error {
  using Error::Error;
};

// splitmix64 step; used to derive independent seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(base ^ mix_seed(stream));
}

}  // namespace crbpr
