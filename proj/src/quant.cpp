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

#include "macdo/quant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace macdo {

void QuantSpec::validate() const {
  if (bits < 1 || bits > 16) throw ConfigError("quantization bits must be in [1, 16], got " + std::to_string(bits));
  if (!symmetric) throw ConfigError("only per-tensor symmetric quantization is supported");
  if (!std::isfinite(scale)) throw ConfigError("quantization scale must be finite");
}

QuantSpec QuantSpec::resolved(std::span<const double> values) const {
  QuantSpec out = *this;
  if (scale > 0.0) return out;
  double max_abs = 0.0;
  for (double v : values) max_abs = std::max(max_abs, std::abs(v));
  out.scale = max_abs > 0.0 ? max_abs / qmax() : 1.0;
  return out;
}

std::int32_t QuantSpec::quantize(double x) const {
  if (!(scale > 0.0)) throw ConfigError("quantize() needs a resolved positive scale");
  const double q = std::nearbyint(x / scale);
  return static_cast<std::int32_t>(std::clamp(q, static_cast<double>(qmin()), static_cast<double>(qmax())));
}

std::vector<std::int32_t> QuantSpec::quantize(std::span<const double> xs) const {
  std::vector<std::int32_t> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(quantize(x));
  return out;
}

AffineMap fit_affine(std::span<const double> samples, std::span<const double> targets) {
  if (samples.size() != targets.size()) throw ShapeError("affine fit needs paired samples");
  if (samples.size() < 2) throw RangeError("affine fit needs at least two samples");
  Eigen::MatrixXd design(static_cast<Eigen::Index>(samples.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = samples[i];
    design(static_cast<Eigen::Index>(i), 1) = 1.0;
    rhs(static_cast<Eigen::Index>(i)) = targets[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 2) throw RangeError("affine fit is degenerate: samples are constant");
  const Eigen::Vector2d coef = qr.solve(rhs);
  return {coef(0), coef(1)};
}

}  // namespace macdo
