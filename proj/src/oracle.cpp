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

#include "macdo/oracle.hpp"

namespace macdo::oracle {

Tensor<std::int64_t> conv_exact(const ConvLayerSpec& layer, const IntTensor& activations, const IntTensor& filters) {
  layer.validate();
  const std::vector<std::size_t> act_shape = {static_cast<std::size_t>(layer.in_channels),
                                              static_cast<std::size_t>(layer.height),
                                              static_cast<std::size_t>(layer.width)};
  const std::vector<std::size_t> filt_shape = {
      static_cast<std::size_t>(layer.out_channels), static_cast<std::size_t>(layer.in_channels),
      static_cast<std::size_t>(layer.kernel), static_cast<std::size_t>(layer.kernel)};
  if (activations.shape != act_shape) throw ShapeError("activations do not match the layer shape [C, H, W]");
  if (filters.shape != filt_shape) throw ShapeError("filters do not match the layer shape [M, C, k, k]");

  const int ho = layer.out_height();
  const int wo = layer.out_width();
  Tensor<std::int64_t> out({static_cast<std::size_t>(layer.out_channels), static_cast<std::size_t>(ho),
                            static_cast<std::size_t>(wo)});
  for (int m = 0; m < layer.out_channels; ++m) {
    for (int oy = 0; oy < ho; ++oy) {
      for (int ox = 0; ox < wo; ++ox) {
        std::int64_t acc = 0;
        for (int c = 0; c < layer.in_channels; ++c) {
          for (int ky = 0; ky < layer.kernel; ++ky) {
            for (int kx = 0; kx < layer.kernel; ++kx) {
              const int y = oy * layer.stride + ky - layer.padding;
              const int x = ox * layer.stride + kx - layer.padding;
              if (y < 0 || y >= layer.height || x < 0 || x >= layer.width) continue;
              acc += static_cast<std::int64_t>(activations(c, y, x)) * filters(m, c, ky, kx);
            }
          }
        }
        out(m, oy, ox) = acc;
      }
    }
  }
  return out;
}

long double mismatch_closed_form(std::span<const int> inputs, std::span<const int> weights, long double i_m,
                                 long double w_c) {
  if (inputs.size() != weights.size()) throw ShapeError("input and weight sequences differ in length");
  long double acc = 0.0L;
  for (std::size_t k = 0; k < inputs.size(); ++k) acc += (inputs[k] + i_m) * (weights[k] + w_c);
  return acc;
}

}  // namespace macdo::oracle
