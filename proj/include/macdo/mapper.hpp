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

// Lowers convolutions to matrix products (im2col: one row per output pixel,
// one column per output channel) and tiles the product onto an R x C array
// in output-stationary fashion. K longer than one precharge can hold is split
// into sub-tiles whose partial sums are added digitally.

#pragma once

#include "macdo/array.hpp"
#include "macdo/common.hpp"
#include "macdo/correction.hpp"
#include "macdo/metrics.hpp"
#include "macdo/quant.hpp"
#include "macdo/tensor.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace macdo {

struct ConvMatrices {
  IntMatrix inputs;    // output pixels x (C * k * k)
  IntMatrix weights;   // (C * k * k) x M
  std::vector<int> rows_per_image;
};

/// One image: activations [C, H, W], filters [M, C, k, k].
ConvMatrices conv_to_matrices(const ConvLayerSpec& layer, const IntTensor& activations, const IntTensor& filters);

/// Batch: activations [N, C, H, W]; image n owns rows_per_image[n]
/// consecutive rows of `inputs`.
ConvMatrices conv_batch_to_matrices(const ConvLayerSpec& layer, const IntTensor& activations,
                                    const IntTensor& filters);

/// Inverse of the row/column layout: [N, M, Ho, Wo] from a product matrix.
RealTensor matrix_to_conv_output(const ConvLayerSpec& layer, const RealMatrix& product, int images);

struct Tile {
  int row0 = 0;
  int rows = 0;
  int col0 = 0;
  int cols = 0;
  int k0 = 0;
  int k = 0;
  int image = -1;  // -1 when the tile spans several images

  std::int64_t macs() const { return static_cast<std::int64_t>(rows) * cols * k; }
};

struct ScheduleOptions {
  bool pack_images = false;
  int k_budget = 200;
  std::vector<int> rows_per_image;  // empty: one segment
};

struct TiledSchedule {
  ArrayDims dims;
  int total_rows = 0;
  int total_k = 0;
  int total_cols = 0;
  int k_budget = 0;
  bool packed = false;
  std::vector<Tile> tiles;

  std::int64_t mac_count() const;
  std::int64_t offered_cell_cycles() const;
  /// Used cell-cycles over offered cell-cycles.
  double utilization() const;
  /// Mean over tiles of occupied cells / R*C.
  double utilization_per_tile() const;
  double column_utilization() const;
  double row_utilization() const;
};

TiledSchedule tile_schedule(int rows, int k, int cols, ArrayDims dims, const ScheduleOptions& options = {});

inline TiledSchedule tile_schedule(const IntMatrix& inputs, const IntMatrix& weights, ArrayDims dims,
                                   const ScheduleOptions& options = {}) {
  if (inputs.cols() != weights.rows()) throw ShapeError("inner dimensions of the product differ");
  return tile_schedule(static_cast<int>(inputs.rows()), static_cast<int>(inputs.cols()),
                       static_cast<int>(weights.cols()), dims, options);
}

enum class ReadoutPath { kAnalog, kAdc };

struct ExecuteOptions {
  CorrectionMode correction = CorrectionMode::kNone;
  ReadoutPath readout = ReadoutPath::kAnalog;
  const CalibrationConstants* constants = nullptr;  // required unless kNone
  std::optional<AffineMap> dequant;                 // ADC code -> value units
  std::uint64_t seed = 0;
};

struct Execution {
  RealMatrix output;   // value units, rows x cols of the full product
  RunReport report;
};

/// Runs every tile on `array`, corrects and reassembles the product.
Execution execute_schedule(const TiledSchedule& schedule, const IntMatrix& inputs, const IntMatrix& weights,
                           MacArray& array, const ExecuteOptions& options);

}  // namespace macdo
