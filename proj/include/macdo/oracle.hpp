/*
 * Copyright 2026 The macdo-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Exact reference implementations the simulator is checked against.

#pragma once

#include "macdo/common.hpp"
#include "macdo/tensor.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>

namespace macdo::oracle {

/// Largest |I*W| term for sign+4-bit inputs and 4-bit weights.
inline constexpr std::int64_t kMaxTerm = 15 * 8;
/// K for which a signed 32-bit accumulator can never overflow.
inline constexpr std::int64_t kInt32SafeK = std::numeric_limits<std::int32_t>::max() / kMaxTerm;

template <typename DA, typename DB>
void check_inner(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.cols() != b.rows())
    throw ShapeError("inner dimensions differ: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

/// Row-by-column integer product with 64-bit accumulation.
template <typename DA, typename DB>
WideMatrix gemm_exact(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  check_inner(a, b);
  return a.template cast<std::int64_t>() * b.template cast<std::int64_t>();
}

/// Same product as a sum of rank-1 column x row outer products.
template <typename DA, typename DB>
WideMatrix gemm_outer(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  check_inner(a, b);
  WideMatrix out = WideMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index k = 0; k < a.cols(); ++k)
    out.noalias() += a.col(k).template cast<std::int64_t>() * b.row(k).template cast<std::int64_t>();
  return out;
}

/// Direct nested-loop convolution of one image [C, H, W] with filters
/// [M, C, k, k]; returns [M, Ho, Wo].
Tensor<std::int64_t> conv_exact(const ConvLayerSpec& layer, const IntTensor& activations, const IntTensor& filters);

/// sum_k (I_k + i_m)(W_k + w_c) in extended precision.
long double mismatch_closed_form(std::span<const int> inputs, std::span<const int> weights, long double i_m,
                                 long double w_c);

}  // namespace macdo::oracle
