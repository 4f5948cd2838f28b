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

// Small dense N-d tensors (row-major) and the convolution layer shape they
// feed. Used for activations [N, C, H, W], filters [M, C, k, k] and outputs.

#pragma once

#include "macdo/common.hpp"

#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace macdo {

template <typename T>
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s, T fill = T{})
      : shape(std::move(s)), data(element_count(shape), fill) {}

  static std::size_t element_count(const std::vector<std::size_t>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
  }

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }

  template <typename... Idx>
  std::size_t offset(Idx... idx) const {
    const std::size_t ids[] = {static_cast<std::size_t>(idx)...};
    std::size_t off = 0;
    for (std::size_t d = 0; d < sizeof...(Idx); ++d) off = off * shape[d] + ids[d];
    return off;
  }

  template <typename... Idx>
  T& operator()(Idx... idx) { return data[offset(idx...)]; }
  template <typename... Idx>
  const T& operator()(Idx... idx) const { return data[offset(idx...)]; }
};

using IntTensor = Tensor<std::int32_t>;
using RealTensor = Tensor<double>;

struct ConvLayerSpec {
  int in_channels = 1;
  int height = 1;
  int width = 1;
  int kernel = 1;
  int out_channels = 1;
  int stride = 1;
  int padding = 0;

  int out_height() const { return (height + 2 * padding - kernel) / stride + 1; }
  int out_width() const { return (width + 2 * padding - kernel) / stride + 1; }
  int reduction() const { return in_channels * kernel * kernel; }
  int output_pixels() const { return out_height() * out_width(); }

  void validate() const {
    if (in_channels <= 0 || height <= 0 || width <= 0 || kernel <= 0 || out_channels <= 0 || stride <= 0 ||
        padding < 0)
      throw ShapeError("convolution layer fields must be positive (padding non-negative)");
    if (height + 2 * padding < kernel || width + 2 * padding < kernel)
      throw ShapeError("kernel larger than the padded input");
  }
};

}  // namespace macdo
