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

// Per-tensor symmetric quantization and the affine dequantizer fitted to
// ADC readouts.

#pragma once

#include "macdo/common.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace macdo {

struct QuantSpec {
  int bits = 4;
  double scale = 1.0;           // <= 0 means derive from max |x|
  bool symmetric = true;
  bool sign_magnitude = false;  // inputs carry an extra sign bit

  int qmax() const { return sign_magnitude ? (1 << bits) - 1 : (1 << (bits - 1)) - 1; }
  int qmin() const { return sign_magnitude ? -qmax() : -(1 << (bits - 1)); }
  /// Offset 2^(N-1) that maps signed codes onto non-negative bank units.
  int weight_shift() const { return 1 << (bits - 1); }

  void validate() const;
  /// Spec with scale set to max|x| / qmax when scale <= 0.
  QuantSpec resolved(std::span<const double> values) const;

  std::int32_t quantize(double x) const;
  double dequantize(std::int32_t q) const { return static_cast<double>(q) * scale; }
  std::vector<std::int32_t> quantize(std::span<const double> xs) const;
};

/// y ~= gain * x + offset.
struct AffineMap {
  double gain = 1.0;
  double offset = 0.0;

  double operator()(double x) const { return gain * x + offset; }
};

/// Least-squares fit of targets against samples.
AffineMap fit_affine(std::span<const double> samples, std::span<const double> targets);

}  // namespace macdo
