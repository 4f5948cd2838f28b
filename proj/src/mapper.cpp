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

#include "macdo/mapper.hpp"

#include <algorithm>
#include <string>

namespace macdo {

namespace {

void check_conv_shapes(const ConvLayerSpec& layer, const IntTensor& activations, const IntTensor& filters,
                       bool batched) {
  layer.validate();
  std::vector<std::size_t> want = {static_cast<std::size_t>(layer.in_channels), static_cast<std::size_t>(layer.height),
                                   static_cast<std::size_t>(layer.width)};
  if (batched) {
    if (activations.rank() != 4) throw ShapeError("batched activations must be [N, C, H, W]");
    want.insert(want.begin(), activations.shape[0]);
  }
  if (activations.shape != want) throw ShapeError("activations do not match the layer shape");
  const std::vector<std::size_t> filt = {static_cast<std::size_t>(layer.out_channels),
                                         static_cast<std::size_t>(layer.in_channels),
                                         static_cast<std::size_t>(layer.kernel), static_cast<std::size_t>(layer.kernel)};
  if (filters.shape != filt) throw ShapeError("filters do not match the layer shape [M, C, k, k]");
}

IntMatrix filters_to_matrix(const ConvLayerSpec& layer, const IntTensor& filters) {
  IntMatrix w(layer.reduction(), layer.out_channels);
  for (int m = 0; m < layer.out_channels; ++m)
    for (int c = 0; c < layer.in_channels; ++c)
      for (int ky = 0; ky < layer.kernel; ++ky)
        for (int kx = 0; kx < layer.kernel; ++kx)
          w((c * layer.kernel + ky) * layer.kernel + kx, m) = filters(m, c, ky, kx);
  return w;
}

// im2col of image `n` (n < 0: unbatched tensor) into rows [row0, row0 + pixels).
void im2col_into(const ConvLayerSpec& layer, const IntTensor& act, int n, IntMatrix& out, int row0) {
  const int wo = layer.out_width();
  for (int oy = 0; oy < layer.out_height(); ++oy) {
    for (int ox = 0; ox < wo; ++ox) {
      const int r = row0 + oy * wo + ox;
      for (int c = 0; c < layer.in_channels; ++c) {
        for (int ky = 0; ky < layer.kernel; ++ky) {
          for (int kx = 0; kx < layer.kernel; ++kx) {
            const int y = oy * layer.stride + ky - layer.padding;
            const int x = ox * layer.stride + kx - layer.padding;
            std::int32_t v = 0;
            if (y >= 0 && y < layer.height && x >= 0 && x < layer.width) v = n < 0 ? act(c, y, x) : act(n, c, y, x);
            out(r, (c * layer.kernel + ky) * layer.kernel + kx) = v;
          }
        }
      }
    }
  }
}

}  // namespace

ConvMatrices conv_to_matrices(const ConvLayerSpec& layer, const IntTensor& activations, const IntTensor& filters) {
  check_conv_shapes(layer, activations, filters, false);
  ConvMatrices m;
  m.inputs.resize(layer.output_pixels(), layer.reduction());
  im2col_into(layer, activations, -1, m.inputs, 0);
  m.weights = filters_to_matrix(layer, filters);
  m.rows_per_image = {layer.output_pixels()};
  return m;
}

ConvMatrices conv_batch_to_matrices(const ConvLayerSpec& layer, const IntTensor& activations,
                                    const IntTensor& filters) {
  check_conv_shapes(layer, activations, filters, true);
  const int images = static_cast<int>(activations.shape[0]);
  ConvMatrices m;
  m.inputs.resize(static_cast<Eigen::Index>(images) * layer.output_pixels(), layer.reduction());
  for (int n = 0; n < images; ++n) im2col_into(layer, activations, n, m.inputs, n * layer.output_pixels());
  m.weights = filters_to_matrix(layer, filters);
  m.rows_per_image.assign(static_cast<std::size_t>(images), layer.output_pixels());
  return m;
}

RealTensor matrix_to_conv_output(const ConvLayerSpec& layer, const RealMatrix& product, int images) {
  const int pixels = layer.output_pixels();
  if (product.rows() != static_cast<Eigen::Index>(images) * pixels || product.cols() != layer.out_channels)
    throw ShapeError("product matrix does not match the layer output");
  RealTensor out({static_cast<std::size_t>(images), static_cast<std::size_t>(layer.out_channels),
                  static_cast<std::size_t>(layer.out_height()), static_cast<std::size_t>(layer.out_width())});
  const int wo = layer.out_width();
  for (int n = 0; n < images; ++n)
    for (int m = 0; m < layer.out_channels; ++m)
      for (int p = 0; p < pixels; ++p) out(n, m, p / wo, p % wo) = product(n * pixels + p, m);
  return out;
}

std::int64_t TiledSchedule::mac_count() const {
  std::int64_t n = 0;
  for (const Tile& t : tiles) n += t.macs();
  return n;
}

std::int64_t TiledSchedule::offered_cell_cycles() const {
  std::int64_t n = 0;
  for (const Tile& t : tiles) n += dims.cells() * t.k;
  return n;
}

double TiledSchedule::utilization() const {
  const std::int64_t offered = offered_cell_cycles();
  return offered ? static_cast<double>(mac_count()) / static_cast<double>(offered) : 0.0;
}

double TiledSchedule::utilization_per_tile() const {
  if (tiles.empty()) return 0.0;
  double sum = 0.0;
  for (const Tile& t : tiles) sum += static_cast<double>(t.rows) * t.cols / static_cast<double>(dims.cells());
  return sum / static_cast<double>(tiles.size());
}

double TiledSchedule::column_utilization() const {
  std::int64_t used = 0;
  std::int64_t offered = 0;
  for (const Tile& t : tiles) {
    used += static_cast<std::int64_t>(t.cols) * t.k;
    offered += static_cast<std::int64_t>(dims.cols) * t.k;
  }
  return offered ? static_cast<double>(used) / static_cast<double>(offered) : 0.0;
}

double TiledSchedule::row_utilization() const {
  std::int64_t used = 0;
  std::int64_t offered = 0;
  for (const Tile& t : tiles) {
    used += static_cast<std::int64_t>(t.rows) * t.k;
    offered += static_cast<std::int64_t>(dims.rows) * t.k;
  }
  return offered ? static_cast<double>(used) / static_cast<double>(offered) : 0.0;
}

TiledSchedule tile_schedule(int rows, int k, int cols, ArrayDims dims, const ScheduleOptions& options) {
  if (rows < 0 || k < 0 || cols < 0) throw ShapeError("negative product dimensions");
  if (dims.rows <= 0 || dims.cols <= 0) throw ShapeError("array dimensions must be positive");
  if (options.k_budget < 1) throw BudgetError("accumulation budget must be at least one cycle");

  TiledSchedule s;
  s.dims = dims;
  s.total_rows = rows;
  s.total_k = k;
  s.total_cols = cols;
  s.k_budget = options.k_budget;
  s.packed = options.pack_images;
  if (rows == 0 || k == 0 || cols == 0) return s;

  // Row segments: one per image unless packing lets tiles cross images.
  struct Segment {
    int begin;
    int count;
    int image;
  };
  std::vector<Segment> segments;
  if (options.pack_images || options.rows_per_image.empty()) {
    segments.push_back({0, rows, options.rows_per_image.size() == 1 ? 0 : -1});
  } else {
    int at = 0;
    for (std::size_t n = 0; n < options.rows_per_image.size(); ++n) {
      segments.push_back({at, options.rows_per_image[n], static_cast<int>(n)});
      at += options.rows_per_image[n];
    }
    if (at != rows) throw ShapeError("rows_per_image does not add up to the input row count");
  }

  // Balanced K chunks: 300 at budget 200 becomes 150 + 150.
  const int chunks = (k + options.k_budget - 1) / options.k_budget;
  std::vector<std::pair<int, int>> k_ranges;
  for (int c = 0, at = 0; c < chunks; ++c) {
    const int len = k / chunks + (c < k % chunks ? 1 : 0);
    k_ranges.emplace_back(at, len);
    at += len;
  }

  for (const Segment& seg : segments) {
    for (int r = 0; r < seg.count; r += dims.rows) {
      const int tile_rows = std::min(dims.rows, seg.count - r);
      int image = seg.image;
      if (image < 0 && !options.rows_per_image.empty()) {
        // Packed tile: record the image only if it stays inside one.
        int at = 0;
        for (std::size_t n = 0; n < options.rows_per_image.size(); ++n) {
          if (seg.begin + r >= at && seg.begin + r + tile_rows <= at + options.rows_per_image[n]) {
            image = static_cast<int>(n);
            break;
          }
          at += options.rows_per_image[n];
        }
      }
      for (int c = 0; c < cols; c += dims.cols) {
        const int tile_cols = std::min(dims.cols, cols - c);
        for (const auto& [k0, klen] : k_ranges)
          s.tiles.push_back({seg.begin + r, tile_rows, c, tile_cols, k0, klen, image});
      }
    }
  }
  return s;
}

Execution execute_schedule(const TiledSchedule& schedule, const IntMatrix& inputs, const IntMatrix& weights,
                           MacArray& array, const ExecuteOptions& options) {
  if (inputs.rows() != schedule.total_rows || inputs.cols() != schedule.total_k ||
      weights.rows() != schedule.total_k || weights.cols() != schedule.total_cols)
    throw ShapeError("operands do not match the schedule");
  if (!(array.dims() == schedule.dims)) throw ShapeError("array dimensions differ from the schedule's");
  if (options.correction != CorrectionMode::kNone && options.constants == nullptr)
    throw CalibrationError("correction mode '" + std::string(to_string(options.correction)) +
                           "' needs calibration constants");

  const DeviceParams& p = array.params();
  const bool chop = options.correction == CorrectionMode::kDigitalChop;
  const CalibrationConstants fallback = CalibrationConstants::nominal(array.dims(), p);
  const CalibrationConstants& consts = options.constants ? *options.constants : fallback;

  Execution run;
  run.output = RealMatrix::Zero(schedule.total_rows, schedule.total_cols);
  EnergyLedger events;
  std::int64_t tile_index = 0;
  for (const Tile& t : schedule.tiles) {
    const IntMatrix in = inputs.block(t.row0, t.k0, t.rows, t.k);
    const IntMatrix w = weights.block(t.k0, t.col0, t.k, t.cols);
    TileResult tile = run_gemm_tile(array, in, w, {chop, mix_seed(options.seed, static_cast<std::uint64_t>(tile_index))});
    ++tile_index;

    RealMatrix raw(t.rows, t.cols);
    if (options.readout == ReadoutPath::kAnalog) {
      raw = tile.analog / p.value_unit();
    } else {
      for (int i = 0; i < t.rows; ++i) {
        for (int j = 0; j < t.cols; ++j) {
          const int code = tile.readout.codes(i, j);
          raw(i, j) = options.dequant ? (*options.dequant)(code) : adc_reconstruct(code, p) / p.value_unit();
        }
      }
    }
    run.output.block(t.row0, t.col0, t.rows, t.cols) +=
        correct_tile(raw, tile.input_sums, tile.weight_sums, t.k, options.correction, consts, p.weight_shift());
    run.report.saturation_count += tile.readout.saturations;
    events += tile.events;
  }

  run.report.mac_ops = schedule.mac_count();
  run.report.tiles = static_cast<std::int64_t>(schedule.tiles.size());
  run.report.utilization = schedule.utilization();
  run.report.utilization_per_tile = schedule.utilization_per_tile();
  run.report.column_utilization = schedule.column_utilization();
  finalize_report(run.report, events, p);
  return run;
}

}  // namespace macdo
