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

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace macdo {

/// Row-major dense grid, the layout used for every R x C array quantity.
template <typename Scalar>
using Grid = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Grid<std::int32_t>;
using WideMatrix = Grid<std::int64_t>;
using RealMatrix = Grid<double>;
using IntVector = Vec<std::int32_t>;

struct ArrayDims {
  int rows = 16;
  int cols = 16;

  long cells() const { return static_cast<long>(rows) * cols; }
  friend bool operator==(const ArrayDims&, const ArrayDims&) = default;
};

// Error hierarchy. The CLI maps these onto exit codes.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Requested accumulation depth exceeds what one precharge can hold.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A cell ran out of voltage headroom or accumulation budget.
class HeadroomError : public Error {
 public:
  HeadroomError(const std::string& what, int row = -1, int col = -1)
      : Error(what), row_(row), col_(col) {}

  HeadroomError at(int row, int col) const {
    return HeadroomError(std::string(what()) + " at cell (" + std::to_string(row) + ", " +
                             std::to_string(col) + ")",
                         row, col);
  }

  int row() const { return row_; }
  int col() const { return col_; }

 private:
  int row_;
  int col_;
};

/// splitmix64 finalizer; derives independent per-cell / per-tile seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace macdo
