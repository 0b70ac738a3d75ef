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
#include <limits>
#include <span>
#include <sstream>

#include "crbpr/types.hpp"

namespace crbpr {

// Logistic function, overflow-safe. Output clamped into the open (0,1) so
// downstream logs and the output-range invariant hold even at saturation.
template <class S>
inline S sigmoid(S x) {
  S y;
  if (x >= S(0)) {
    y = S(1) / (S(1) + std::exp(-x));
  } else {
    const S e = std::exp(x);
    y = e / (S(1) + e);
  }
  const S lo = std::numeric_limits<S>::min();
  const S hi = S(1) - std::numeric_limits<S>::epsilon() / S(2);
  return y < lo ? lo : (y > hi ? hi : y);
}

// log(1 + exp(x)) without overflow; equals -ln(sigmoid(-x)).
template <class S>
inline S softplus(S x) {
  if (x > S(0)) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Matrix product with 64-bit accumulation, truncated back to S.
template <class S>
MatX<S> matmul64(const MatX<S>& a, const MatX<S>& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream os;
    os << "matmul64: inner dimensions differ, " << a.rows() << "x" << a.cols()
       << " * " << b.rows() << "x" << b.cols();
    throw DimensionError(os.str());
  }
  if constexpr (std::is_same_v<S, double>) {
    return a * b;
  } else {
    MatX<double> r = a.template cast<double>() * b.template cast<double>();
    return r.cast<S>();
  }
}

// Per-pair column dot products: out[j] = a.col(j) . b.col(j), 64-bit sums.
template <class S>
VecX<S> colwise_dot64(const MatX<S>& a, const MatX<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << "colwise_dot64: shapes differ, " << a.rows() << "x" << a.cols()
       << " vs " << b.rows() << "x" << b.cols();
    throw DimensionError(os.str());
  }
  VecX<S> out(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      acc += double(a(i, j)) * double(b(i, j));
    }
    out[j] = S(acc);
  }
  return out;
}

// L2 norm of every row, accumulated in 64-bit.
template <class S>
VecX<S> row_norms64(const MatX<S>& v) {
  VecX<S> out(v.rows());
  for (Eigen::Index m = 0; m < v.rows(); ++m) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < v.cols(); ++n) {
      acc += double(v(m, n)) * double(v(m, n));
    }
    out[m] = S(std::sqrt(acc));
  }
  return out;
}

// One affine layer followed by the logistic activation:
// out(:,j) = sigmoid(W x(:,j) + b). Shapes: x d_in x l, W d_out x d_in,
// b d_out. Throws DimensionError naming the offending shapes.
template <class S>
MatX<S> affine_sigmoid(const MatX<S>& x, const MatX<S>& w, const VecX<S>& b) {
  if (w.cols() != x.rows() || b.size() != w.rows()) {
    std::ostringstream os;
    os << "affine_sigmoid: W is " << w.rows() << "x" << w.cols() << ", b has "
       << b.size() << " entries, x is " << x.rows() << "x" << x.cols();
    throw DimensionError(os.str());
  }
  MatX<S> z = matmul64(w, x);
  z.colwise() += b;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    z(j) = sigmoid(z(j));
  }
  return z;
}

// Batch feature scaling: each row (one feature dimension across the batch)
// is divided by max(row L2 norm, eps). Zero rows pass through unchanged.
template <class S>
MatX<S> feature_scale(const MatX<S>& v, S eps = S(kNormEps)) {
  const VecX<S> norms = row_norms64(v);
  MatX<S> out(v.rows(), v.cols());
  for (Eigen::Index m = 0; m < v.rows(); ++m) {
    const S denom = norms[m] > eps ? norms[m] : eps;
    out.row(m) = v.row(m) / denom;
  }
  return out;
}

// Scaling against externally fixed per-row denominators (corpus mode).
// The denominators are treated as constants.
template <class S>
MatX<S> feature_scale_fixed(const MatX<S>& v, const VecX<S>& norms,
                            S eps = S(kNormEps)) {
  if (norms.size() != v.rows()) {
    std::ostringstream os;
    os << "feature_scale_fixed: " << norms.size() << " norms for " << v.rows()
       << " rows";
    throw DimensionError(os.str());
  }
  MatX<S> out(v.rows(), v.cols());
  for (Eigen::Index m = 0; m < v.rows(); ++m) {
    const S denom = norms[m] > eps ? norms[m] : eps;
    out.row(m) = v.row(m) / denom;
  }
  return out;
}

// Reverse-mode rule of feature_scale. dy is the upstream gradient w.r.t.
// the scaled output, v the forward input, norms its row_norms64. On the
// saturated branch (norm <= eps) the denominator is the constant eps.
template <class S>
MatX<S> feature_scale_backward(const MatX<S>& dy, const MatX<S>& v,
                               const VecX<S>& norms, S eps = S(kNormEps)) {
  MatX<S> dv(v.rows(), v.cols());
  for (Eigen::Index m = 0; m < v.rows(); ++m) {
    const S n = norms[m];
    if (n > eps) {
      double proj = 0.0;
      for (Eigen::Index j = 0; j < v.cols(); ++j) {
        proj += double(dy(m, j)) * double(v(m, j));
      }
      const double n3 = double(n) * double(n) * double(n);
      for (Eigen::Index j = 0; j < v.cols(); ++j) {
        dv(m, j) = S(double(dy(m, j)) / double(n) - double(v(m, j)) * proj / n3);
      }
    } else {
      dv.row(m) = dy.row(m) / eps;
    }
  }
  return dv;
}

// Columns of `table` selected by index, in order.
template <class S>
MatX<S> gather_cols(const MatX<S>& table, std::span<const int> idx) {
  MatX<S> out(table.rows(), Eigen::Index(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.col(Eigen::Index(j)) = table.col(idx[j]);
  }
  return out;
}

template <class S>
bool all_finite(const MatX<S>& m) {
  return m.allFinite();
}

}  // namespace crbpr
