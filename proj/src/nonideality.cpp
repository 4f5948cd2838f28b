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

#include "macdo/nonideality.hpp"

#include <iomanip>
#include <ostream>
#include <random>

namespace macdo {

void MismatchSpec::validate() const {
  if (!(sigma_im >= 0.0)) throw ConfigError("sigma_im must be non-negative");
  if (centroid_replicas != 1 && centroid_replicas != 4)
    throw ConfigError("centroid_replicas must be 1 or 4, got " + std::to_string(centroid_replicas));
}

RealMatrix sample_mismatch(int rows, int cols, const MismatchSpec& spec) {
  spec.validate();
  if (rows < 0 || cols < 0) throw ShapeError("negative grid size");
  RealMatrix grid(rows, cols);
  const int k = spec.centroid_replicas;

  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double random = 0.0;
      if (spec.sigma_im > 0.0) {
        const auto stream = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
                            static_cast<std::uint64_t>(j);
        std::mt19937_64 gen(mix_seed(spec.seed, stream));
        std::normal_distribution<double> dist(0.0, spec.sigma_im);
        for (int r = 0; r < k; ++r) random += dist(gen);
        random /= k;
      }

      double drift = 0.0;
      if (k == 1) {
        drift = spec.gradient_x * j + spec.gradient_y * i;
      } else {
        const int xs[2] = {j, 2 * cols - 1 - j};
        const int ys[2] = {i, 2 * rows - 1 - i};
        for (int x : xs)
          for (int y : ys) drift += spec.gradient_x * x + spec.gradient_y * y;
        drift /= 4.0;
      }
      grid(i, j) = random + drift;
    }
  }
  return grid;
}

void write_grid_csv(std::ostream& os, const RealMatrix& grid) {
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.cols(); ++j) os << (j ? "," : "") << grid(i, j);
    os << '\n';
  }
}

}  // namespace macdo
