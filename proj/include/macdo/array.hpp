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

// R x C grid of cells run in lockstep. Each cycle broadcasts one input code
// per row (through the DAC) and one weight per column (through that column's
// tail bank), so the grid accumulates one outer product per cycle.

#pragma once

#include "macdo/common.hpp"
#include "macdo/device.hpp"
#include "macdo/metrics.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace macdo {

struct Readout {
  IntMatrix codes;
  std::int64_t saturations = 0;
};

template <typename Scalar = double>
class BasicMacArray {
 public:
  using CellType = CellState<Scalar>;

  explicit BasicMacArray(ArrayDims dims = {}, DeviceParams params = {});
  BasicMacArray(ArrayDims dims, DeviceParams params, RealMatrix mismatch);

  ArrayDims dims() const { return dims_; }
  int rows() const { return dims_.rows; }
  int cols() const { return dims_.cols; }
  const DeviceParams& params() const { return params_; }

  /// Input-referred offset per cell, volts.
  const RealMatrix& mismatch() const { return mismatch_; }
  void set_mismatch(RealMatrix mismatch);

  void precharge();

  /// One lockstep cycle with signed weights W in [-shift, tail_units - shift];
  /// each column bank gets W + 2^(N-1) units.
  void outer_product_cycle(std::span<const int> inputs, std::span<const int> weights);

  /// One lockstep cycle with explicit enabled-unit counts per column.
  void drive_cycle(std::span<const int> inputs, std::span<const int> units);

  /// Perturbs every cell with its own seed-derived stream.
  void apply_noise(std::uint64_t seed);

  /// Row-wise two-phase sample (v_q, then v_qn) and ADC conversion.
  /// Leaves the cells untouched.
  Readout readout();

  CellType cell(int row, int col) const { return {v_q_(row, col), v_qn_(row, col), mac_count_(row, col)}; }
  const Grid<int>& mac_counts() const { return mac_count_; }
  const std::vector<WeightBankState>& col_banks() const { return banks_; }

  /// v_qn - v_q per cell, volts.
  Grid<Scalar> differential() const { return v_qn_ - v_q_; }
  /// Differential divided by the I*W value unit.
  RealMatrix values() const;

  const EnergyLedger& ledger() const { return ledger_; }
  void reset_ledger() { ledger_ = {}; }

 private:
  void check_inputs(std::span<const int> inputs) const;

  ArrayDims dims_;
  DeviceParams params_;
  Grid<Scalar> v_q_;
  Grid<Scalar> v_qn_;
  Grid<int> mac_count_;
  std::vector<WeightBankState> banks_;
  RealMatrix mismatch_;
  EnergyLedger ledger_;
};

using MacArray = BasicMacArray<double>;

struct TileOptions {
  bool chop = false;                 // follow every cycle with its negated twin
  std::uint64_t noise_seed = 0;
};

struct TileResult {
  Readout readout;
  RealMatrix analog;                 // pre-ADC differential volts, active region
  IntVector input_sums;              // sum of I over K, per active row
  IntVector weight_sums;             // sum of W over K, per active column
  int k = 0;
  EnergyLedger events;
};

/// Precharge, K outer-product cycles (2K when chopping), noise, readout.
/// `inputs` is rows' x K with rows' <= R, `weights` is K x cols' with
/// cols' <= C; the rest of the grid is masked (input 0, zero tail units).
template <typename Scalar>
TileResult run_gemm_tile(BasicMacArray<Scalar>& array, const IntMatrix& inputs, const IntMatrix& weights,
                         const TileOptions& options = {});

/// Largest K a single tile can accumulate.
inline int tile_k_budget(const DeviceParams& p, bool chop) { return chop ? p.max_mac_ops / 2 : p.max_mac_ops; }

extern template class BasicMacArray<double>;
extern template class BasicMacArray<long double>;
extern template TileResult run_gemm_tile<double>(BasicMacArray<double>&, const IntMatrix&, const IntMatrix&,
                                                 const TileOptions&);
extern template TileResult run_gemm_tile<long double>(BasicMacArray<long double>&, const IntMatrix&,
                                                      const IntMatrix&, const TileOptions&);

}  // namespace macdo
