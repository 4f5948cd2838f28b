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

// Energy, power and throughput accounting. One MAC counts as two operations
// (multiply + accumulate) everywhere in this library.

#pragma once

#include "macdo/common.hpp"
#include "macdo/device.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace macdo {

enum class Block { kArray = 0, kRowController, kRDac, kColController, kAdc };
inline constexpr std::size_t kNumBlocks = 5;
inline constexpr std::array<Block, kNumBlocks> kAllBlocks = {
    Block::kArray, Block::kRowController, Block::kRDac, Block::kColController, Block::kAdc};

/// How a block's power grows with array size.
enum class ScalingClass { kPerCell, kPerRow, kPerColumn };

std::string_view block_name(Block b);
ScalingClass scaling_class(Block b);

/// Joules (or watts) per block.
struct EnergyBreakdown {
  std::array<double, kNumBlocks> by_block{};

  double& operator[](Block b) { return by_block[static_cast<std::size_t>(b)]; }
  double operator[](Block b) const { return by_block[static_cast<std::size_t>(b)]; }
  double total() const;

  EnergyBreakdown& operator+=(const EnergyBreakdown& o);
};

/// Raw event counts. Convert to joules with `energy_ledger`.
struct EnergyLedger {
  std::int64_t cell_cycles = 0;     // every cell in the array, every MAC cycle
  std::int64_t row_cycles = 0;
  std::int64_t col_cycles = 0;
  std::int64_t conversions = 0;
  std::int64_t precharged_cells = 0;
  std::int64_t cycles = 0;

  EnergyLedger& operator+=(const EnergyLedger& o);
  friend bool operator==(const EnergyLedger&, const EnergyLedger&) = default;
};

EnergyBreakdown energy_ledger(const EnergyLedger& events, const DeviceParams& p);

struct RunReport {
  std::int64_t mac_ops = 0;          // useful (logical) MACs
  std::int64_t cycles = 0;           // physical MAC cycles
  std::int64_t adc_conversions = 0;
  std::int64_t tiles = 0;
  EnergyBreakdown energy;            // joules
  EnergyBreakdown power;             // watts, time-averaged
  double avg_power = 0.0;
  double throughput = 0.0;           // ops/s
  double efficiency = 0.0;           // ops/J
  double utilization = 0.0;          // used cell-cycles / offered cell-cycles
  double utilization_per_tile = 0.0; // mean of per-tile occupancy
  double column_utilization = 0.0;
  std::int64_t saturation_count = 0;
  double inference_time = 0.0;       // seconds
};

/// Ops per watt. Throws RangeError for non-positive power.
double efficiency(double throughput_ops, double power_watts);

/// Fill energy/power/throughput/efficiency from counted events.
void finalize_report(RunReport& report, const EnergyLedger& events, const DeviceParams& p);

struct PowerFractions {
  std::array<double, kNumBlocks> by_block{};

  double operator[](Block b) const { return by_block[static_cast<std::size_t>(b)]; }
  double& operator[](Block b) { return by_block[static_cast<std::size_t>(b)]; }

  /// Fraction vector fitted so a 16x16 -> 256x512 scale-up multiplies total
  /// power by 329.4 under the linear per-block model.
  static PowerFractions fitted_c3();
  static PowerFractions from_power(const EnergyBreakdown& power);
  void validate() const;
};

/// Linear scale-up: throughput by cell count, each block's power by its
/// class ratio (cells, rows or columns).
RunReport scale_estimate(const RunReport& base, ArrayDims base_dims, ArrayDims target_dims,
                         const PowerFractions& fractions);

/// Peak throughput of a fully utilized array.
inline double peak_throughput(ArrayDims dims, double f_clk) {
  return 2.0 * static_cast<double>(dims.cells()) * f_clk;
}

}  // namespace macdo
