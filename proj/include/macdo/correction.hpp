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

// Offset cancellation. Every cell accumulates sum (I + I_m)(W + W_c), where
// I_m is the cell's input-referred offset and W_c = W_o + 2^(N-1) is the
// column's weight offset. Two ways to recover sum I*W:
//
//   digital:  sum OUT - I_m*sum W - W_c*sum I - K*I_m*W_c
//   chopping: run every cycle again with (-I, -W); then
//             (sum OUT + OUT' - 2K*I_m*W_c) / 2
//
// All quantities here are in value units (volts / value_unit()).

#pragma once

#include "macdo/array.hpp"
#include "macdo/common.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace macdo {

enum class CorrectionMode { kNone, kDigital, kDigitalChop };

std::string_view to_string(CorrectionMode m);
CorrectionMode parse_correction_mode(std::string_view s);

struct CalibrationConstants {
  RealMatrix i_m;        // per cell
  Vec<double> w_c;       // per column
  RealMatrix im_wc;      // per cell, I_m * W_c for one cycle
  int k_cal = 0;

  int rows() const { return static_cast<int>(i_m.rows()); }
  int cols() const { return static_cast<int>(i_m.cols()); }

  /// Constants of an array with no mismatch: I_m = 0, W_c = W_o + 2^(N-1).
  static CalibrationConstants nominal(ArrayDims dims, const DeviceParams& p);
};

struct CalibrationOptions {
  int k_cal = 64;
  std::uint64_t seed = 0;
};

/// Runs the '1'/'0' calibration tiles on `array` and solves for the
/// offsets. Tile A drives I = 0 with W = 1, tile B drives I = 1 with W = 0,
/// each for k_cal cycles; pre-ADC values are used.
template <typename Scalar>
CalibrationConstants calibrate(BasicMacArray<Scalar>& array, const CalibrationOptions& options = {});

/// Scalar digital correction for one cell.
inline double digital_correct(double raw_sum, std::int64_t sum_inputs, std::int64_t sum_weights, double i_m,
                              double w_c, int k) {
  return raw_sum - i_m * static_cast<double>(sum_weights) - w_c * static_cast<double>(sum_inputs) -
         static_cast<double>(k) * i_m * w_c;
}

/// Chopped pair for one cell, given the normal and negated accumulations.
inline double chop_correct(double out_normal, double out_negated, double i_m, double w_c, int k) {
  return (out_normal + out_negated - 2.0 * static_cast<double>(k) * i_m * w_c) / 2.0;
}

/// Chopped pair when both halves accumulated into the same cell.
inline double chop_correct(double out_sum, double im_wc, int k) {
  return (out_sum - 2.0 * static_cast<double>(k) * im_wc) / 2.0;
}

/// Removes only the digitally added weight shift: raw - 2^(N-1) * sum I.
inline double shift_correct(double raw_sum, std::int64_t sum_inputs, int shift) {
  return raw_sum - static_cast<double>(shift) * static_cast<double>(sum_inputs);
}

/// Applies `mode` to a tile's values (value units). The tile's active
/// region starts at cell (0, 0) of the calibrated array.
RealMatrix correct_tile(const RealMatrix& raw, const IntVector& input_sums, const IntVector& weight_sums, int k,
                        CorrectionMode mode, const CalibrationConstants& consts, int shift);

extern template CalibrationConstants calibrate<double>(BasicMacArray<double>&, const CalibrationOptions&);
extern template CalibrationConstants calibrate<long double>(BasicMacArray<long double>&,
                                                            const CalibrationOptions&);

}  // namespace macdo
