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

#include "macdo/correction.hpp"

#include "macdo/nonideality.hpp"

#include <cmath>

namespace macdo {

std::string_view to_string(CorrectionMode m) {
  switch (m) {
    case CorrectionMode::kNone: return "none";
    case CorrectionMode::kDigital: return "digital";
    case CorrectionMode::kDigitalChop: return "digital+chop";
  }
  return "none";
}

CorrectionMode parse_correction_mode(std::string_view s) {
  if (s == "none") return CorrectionMode::kNone;
  if (s == "digital") return CorrectionMode::kDigital;
  if (s == "digital+chop" || s == "chop") return CorrectionMode::kDigitalChop;
  throw ConfigError("unknown correction mode '" + std::string(s) + "' (none, digital, digital+chop)");
}

CalibrationConstants CalibrationConstants::nominal(ArrayDims dims, const DeviceParams& p) {
  CalibrationConstants c;
  c.i_m = RealMatrix::Zero(dims.rows, dims.cols);
  c.w_c = Vec<double>::Constant(dims.cols, effective_weight_offset(p));
  c.im_wc = RealMatrix::Zero(dims.rows, dims.cols);
  return c;
}

template <typename Scalar>
CalibrationConstants calibrate(BasicMacArray<Scalar>& array, const CalibrationOptions& options) {
  const int k = options.k_cal;
  if (k <= 0) throw CalibrationError("calibration system is singular: K_cal must be positive, got " + std::to_string(k));
  const int R = array.rows();
  const int C = array.cols();
  const double unit = array.params().value_unit();

  const TileResult zero_inputs =
      run_gemm_tile(array, IntMatrix::Zero(R, k), IntMatrix::Ones(k, C), {false, mix_seed(options.seed, 0)});
  const TileResult zero_weights =
      run_gemm_tile(array, IntMatrix::Ones(R, k), IntMatrix::Zero(k, C), {false, mix_seed(options.seed, 1)});

  // Per cycle: a = I_m (1 + W_c), b = (1 + I_m) W_c.
  const RealMatrix a = zero_inputs.analog / (unit * k);
  const RealMatrix b = zero_weights.analog / (unit * k);

  RealMatrix w_cell(R, C);
  for (int i = 0; i < R; ++i) {
    for (int j = 0; j < C; ++j) {
      // b - a = W_c - I_m, so I_m^2 + (1 + d) I_m - a = 0.
      const double d = b(i, j) - a(i, j);
      const double disc = (1.0 + d) * (1.0 + d) + 4.0 * a(i, j);
      if (!(disc >= 0.0) || !(1.0 + d + std::sqrt(disc) != 0.0))
        throw CalibrationError("no real offset solution for cell (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      const double x = 2.0 * a(i, j) / ((1.0 + d) + std::sqrt(disc));
      w_cell(i, j) = x + d;
    }
  }

  CalibrationConstants c;
  c.k_cal = k;
  c.w_c = w_cell.colwise().mean().transpose();
  c.i_m.resize(R, C);
  for (int j = 0; j < C; ++j) {
    if (std::abs(1.0 + c.w_c(j)) < 1e-12)
      throw CalibrationError("calibration system is singular for column " + std::to_string(j));
    c.i_m.col(j) = a.col(j) / (1.0 + c.w_c(j));
  }
  c.im_wc = c.i_m.array().rowwise() * c.w_c.transpose().array();
  return c;
}

RealMatrix correct_tile(const RealMatrix& raw, const IntVector& input_sums, const IntVector& weight_sums, int k,
                        CorrectionMode mode, const CalibrationConstants& consts, int shift) {
  const auto rows = raw.rows();
  const auto cols = raw.cols();
  if (input_sums.size() != rows || weight_sums.size() != cols)
    throw ShapeError("digital sums do not match the tile shape");
  RealMatrix out(rows, cols);
  if (mode == CorrectionMode::kNone) {
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = shift_correct(raw(i, j), input_sums(i), shift);
    return out;
  }
  if (consts.rows() < rows || consts.cols() < cols)
    throw ShapeError("calibration constants do not cover the tile");
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = mode == CorrectionMode::kDigital
                      ? digital_correct(raw(i, j), input_sums(i), weight_sums(j), consts.i_m(i, j), consts.w_c(j), k)
                      : chop_correct(raw(i, j), consts.im_wc(i, j), k);
    }
  }
  return out;
}

template CalibrationConstants calibrate<double>(BasicMacArray<double>&, const CalibrationOptions&);
template CalibrationConstants calibrate<long double>(BasicMacArray<long double>&, const CalibrationOptions&);

}  // namespace macdo
