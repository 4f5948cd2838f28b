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

#include "macdo/metrics.hpp"

#include <cmath>
#include <numeric>

namespace macdo {

std::string_view block_name(Block b) {
  switch (b) {
    case Block::kArray: return "array";
    case Block::kRowController: return "row_controller";
    case Block::kRDac: return "r_dac";
    case Block::kColController: return "col_controller";
    case Block::kAdc: return "adc";
  }
  return "unknown";
}

ScalingClass scaling_class(Block b) {
  switch (b) {
    case Block::kArray: return ScalingClass::kPerCell;
    case Block::kRowController:
    case Block::kRDac: return ScalingClass::kPerRow;
    case Block::kColController:
    case Block::kAdc: return ScalingClass::kPerColumn;
  }
  return ScalingClass::kPerCell;
}

double EnergyBreakdown::total() const { return std::accumulate(by_block.begin(), by_block.end(), 0.0); }

EnergyBreakdown& EnergyBreakdown::operator+=(const EnergyBreakdown& o) {
  for (std::size_t i = 0; i < kNumBlocks; ++i) by_block[i] += o.by_block[i];
  return *this;
}

EnergyLedger& EnergyLedger::operator+=(const EnergyLedger& o) {
  cell_cycles += o.cell_cycles;
  row_cycles += o.row_cycles;
  col_cycles += o.col_cycles;
  conversions += o.conversions;
  precharged_cells += o.precharged_cells;
  cycles += o.cycles;
  return *this;
}

EnergyBreakdown energy_ledger(const EnergyLedger& events, const DeviceParams& p) {
  EnergyBreakdown e;
  e[Block::kArray] = static_cast<double>(events.cell_cycles) * p.e_mac +
                     static_cast<double>(events.precharged_cells) * p.e_precharge;
  e[Block::kRowController] = static_cast<double>(events.row_cycles) * p.e_row_ctrl;
  e[Block::kRDac] = static_cast<double>(events.row_cycles) * p.e_rdac;
  e[Block::kColController] = static_cast<double>(events.col_cycles) * p.e_col_ctrl;
  e[Block::kAdc] = static_cast<double>(events.conversions) * p.e_adc;
  return e;
}

double efficiency(double throughput_ops, double power_watts) {
  if (!(power_watts > 0.0))
    throw RangeError("efficiency needs positive power, got " + std::to_string(power_watts) + " W");
  return throughput_ops / power_watts;
}

void finalize_report(RunReport& report, const EnergyLedger& events, const DeviceParams& p) {
  report.cycles = events.cycles;
  report.adc_conversions = events.conversions;
  report.energy = energy_ledger(events, p);
  report.inference_time = static_cast<double>(events.cycles) / p.f_clk;
  report.power = {};
  report.avg_power = 0.0;
  report.throughput = 0.0;
  report.efficiency = 0.0;
  if (report.inference_time > 0.0) {
    for (std::size_t i = 0; i < kNumBlocks; ++i)
      report.power.by_block[i] = report.energy.by_block[i] / report.inference_time;
    report.avg_power = report.energy.total() / report.inference_time;
    report.throughput = 2.0 * static_cast<double>(report.mac_ops) / report.inference_time;
    if (report.avg_power > 0.0) report.efficiency = efficiency(report.throughput, report.avg_power);
  }
}

PowerFractions PowerFractions::fitted_c3() {
  PowerFractions f;
  f[Block::kArray] = 0.625;
  f[Block::kRowController] = 0.05;
  f[Block::kRDac] = 0.1125;
  f[Block::kColController] = 0.03;
  f[Block::kAdc] = 0.1825;
  return f;
}

PowerFractions PowerFractions::from_power(const EnergyBreakdown& power) {
  const double total = power.total();
  if (!(total > 0.0)) throw RangeError("cannot derive power fractions from zero total power");
  PowerFractions f;
  for (std::size_t i = 0; i < kNumBlocks; ++i) f.by_block[i] = power.by_block[i] / total;
  return f;
}

void PowerFractions::validate() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumBlocks; ++i) {
    const double v = by_block[i];
    if (!(v >= 0.0 && v <= 1.0))
      throw ConfigError("power fraction for " + std::string(block_name(kAllBlocks[i])) + " outside [0, 1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("power fractions sum to " + std::to_string(sum) + ", not 1");
}

RunReport scale_estimate(const RunReport& base, ArrayDims base_dims, ArrayDims target_dims,
                         const PowerFractions& fractions) {
  fractions.validate();
  if (base_dims.rows <= 0 || base_dims.cols <= 0 || target_dims.rows <= 0 || target_dims.cols <= 0)
    throw ShapeError("array dimensions must be positive");

  const double cell_ratio = static_cast<double>(target_dims.cells()) / static_cast<double>(base_dims.cells());
  const double row_ratio = static_cast<double>(target_dims.rows) / base_dims.rows;
  const double col_ratio = static_cast<double>(target_dims.cols) / base_dims.cols;

  RunReport out = base;
  out.throughput = base.throughput * cell_ratio;
  out.mac_ops = static_cast<std::int64_t>(std::llround(static_cast<double>(base.mac_ops) * cell_ratio));
  out.adc_conversions =
      static_cast<std::int64_t>(std::llround(static_cast<double>(base.adc_conversions) * cell_ratio));
  out.avg_power = 0.0;
  for (Block b : kAllBlocks) {
    double ratio = cell_ratio;
    if (scaling_class(b) == ScalingClass::kPerRow) ratio = row_ratio;
    if (scaling_class(b) == ScalingClass::kPerColumn) ratio = col_ratio;
    out.power[b] = base.avg_power * fractions[b] * ratio;
    out.energy[b] = out.power[b] * base.inference_time;
    out.avg_power += out.power[b];
  }
  out.efficiency = out.avg_power > 0.0 ? efficiency(out.throughput, out.avg_power) : 0.0;
  return out;
}

}  // namespace macdo
