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

#include "macdo/array.hpp"

#include <vector>

namespace macdo {

template <typename Scalar>
BasicMacArray<Scalar>::BasicMacArray(ArrayDims dims, DeviceParams params)
    : BasicMacArray(dims, std::move(params), RealMatrix::Zero(dims.rows, dims.cols)) {}

template <typename Scalar>
BasicMacArray<Scalar>::BasicMacArray(ArrayDims dims, DeviceParams params, RealMatrix mismatch)
    : dims_(dims), params_(std::move(params)) {
  if (dims_.rows <= 0 || dims_.cols <= 0)
    throw ShapeError("array dimensions must be positive, got " + std::to_string(dims_.rows) + "x" +
                     std::to_string(dims_.cols));
  params_.validate();
  v_q_ = Grid<Scalar>::Constant(dims_.rows, dims_.cols, static_cast<Scalar>(params_.v_dd));
  v_qn_ = v_q_;
  mac_count_ = Grid<int>::Zero(dims_.rows, dims_.cols);
  banks_.assign(static_cast<std::size_t>(dims_.cols), make_bank(0, params_));
  set_mismatch(std::move(mismatch));
}

template <typename Scalar>
void BasicMacArray<Scalar>::set_mismatch(RealMatrix mismatch) {
  if (mismatch.rows() != dims_.rows || mismatch.cols() != dims_.cols)
    throw ShapeError("mismatch grid is " + std::to_string(mismatch.rows()) + "x" +
                     std::to_string(mismatch.cols()) + ", array is " + std::to_string(dims_.rows) + "x" +
                     std::to_string(dims_.cols));
  mismatch_ = std::move(mismatch);
}

template <typename Scalar>
void BasicMacArray<Scalar>::precharge() {
  v_q_.setConstant(static_cast<Scalar>(params_.v_dd));
  v_qn_.setConstant(static_cast<Scalar>(params_.v_dd));
  mac_count_.setZero();
  for (auto& bank : banks_) bank = make_bank(0, params_);
  ledger_.precharged_cells += dims_.cells();
}

template <typename Scalar>
void BasicMacArray<Scalar>::check_inputs(std::span<const int> inputs) const {
  if (static_cast<long>(inputs.size()) != dims_.rows)
    throw ShapeError("expected " + std::to_string(dims_.rows) + " row inputs, got " +
                     std::to_string(inputs.size()));
}

template <typename Scalar>
void BasicMacArray<Scalar>::outer_product_cycle(std::span<const int> inputs, std::span<const int> weights) {
  if (static_cast<long>(weights.size()) != dims_.cols)
    throw ShapeError("expected " + std::to_string(dims_.cols) + " column weights, got " +
                     std::to_string(weights.size()));
  std::vector<int> units(weights.size());
  const int shift = params_.weight_shift();
  for (std::size_t j = 0; j < weights.size(); ++j) {
    units[j] = weights[j] + shift;
    if (units[j] < 0 || units[j] > params_.tail_units)
      throw RangeError("weight code " + std::to_string(weights[j]) + " needs " + std::to_string(units[j]) +
                       " tail units; bank has 0.." + std::to_string(params_.tail_units));
  }
  drive_cycle(inputs, units);
}

template <typename Scalar>
void BasicMacArray<Scalar>::drive_cycle(std::span<const int> inputs, std::span<const int> units) {
  check_inputs(inputs);
  if (static_cast<long>(units.size()) != dims_.cols)
    throw ShapeError("expected " + std::to_string(dims_.cols) + " column unit codes, got " +
                     std::to_string(units.size()));

  std::vector<WeightBankState> banks(units.size());
  for (std::size_t j = 0; j < units.size(); ++j) {
    if (units[j] < 0 || units[j] > params_.tail_units)
      throw RangeError("tail unit count " + std::to_string(units[j]) + " outside [0, " +
                       std::to_string(params_.tail_units) + "]");
    banks[j] = make_bank(units[j], params_);
  }
  std::vector<Scalar> v_row(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) v_row[i] = dac_convert<Scalar>(inputs[i], params_);

  // Commit only after every cell succeeded.
  Grid<Scalar> next_q(dims_.rows, dims_.cols);
  Grid<Scalar> next_qn(dims_.rows, dims_.cols);
  for (int i = 0; i < dims_.rows; ++i) {
    for (int j = 0; j < dims_.cols; ++j) {
      const Scalar v_in = v_row[static_cast<std::size_t>(i)] + static_cast<Scalar>(mismatch_(i, j));
      CellType next;
      try {
        next = mac_step<Scalar>(cell(i, j), v_in, banks[static_cast<std::size_t>(j)], params_);
      } catch (const HeadroomError& e) {
        throw e.at(i, j);
      }
      next_q(i, j) = next.v_q;
      next_qn(i, j) = next.v_qn;
    }
  }
  v_q_.swap(next_q);
  v_qn_.swap(next_qn);
  mac_count_.array() += 1;
  banks_ = std::move(banks);

  ledger_.cycles += 1;
  ledger_.cell_cycles += dims_.cells();
  ledger_.row_cycles += dims_.rows;
  ledger_.col_cycles += dims_.cols;
}

template <typename Scalar>
void BasicMacArray<Scalar>::apply_noise(std::uint64_t seed) {
  if (params_.sigma_cell_noise <= 0.0) return;
  for (int i = 0; i < dims_.rows; ++i) {
    for (int j = 0; j < dims_.cols; ++j) {
      const auto stream = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(dims_.cols) +
                          static_cast<std::uint64_t>(j);
      const CellType noisy = macdo::apply_noise<Scalar>(cell(i, j), params_, mix_seed(seed, stream));
      v_q_(i, j) = noisy.v_q;
      v_qn_(i, j) = noisy.v_qn;
    }
  }
}

template <typename Scalar>
Readout BasicMacArray<Scalar>::readout() {
  Readout out;
  out.codes.resize(dims_.rows, dims_.cols);
  for (int i = 0; i < dims_.rows; ++i) {
    // Phase 1 holds the v_q row on C_a, phase 2 the v_qn row on C_b.
    const Vec<double> held_q = v_q_.row(i).transpose().template cast<double>();
    const Vec<double> held_qn = v_qn_.row(i).transpose().template cast<double>();
    for (int j = 0; j < dims_.cols; ++j) {
      const AdcSample s = adc_sample(held_qn(j) - held_q(j), params_);
      out.codes(i, j) = s.code;
      out.saturations += s.saturated ? 1 : 0;
    }
  }
  ledger_.conversions += dims_.cells();
  return out;
}

template <typename Scalar>
RealMatrix BasicMacArray<Scalar>::values() const {
  return (differential().template cast<double>().array() / params_.value_unit()).matrix();
}

namespace {

EnergyLedger ledger_delta(const EnergyLedger& after, const EnergyLedger& before) {
  EnergyLedger d;
  d.cell_cycles = after.cell_cycles - before.cell_cycles;
  d.row_cycles = after.row_cycles - before.row_cycles;
  d.col_cycles = after.col_cycles - before.col_cycles;
  d.conversions = after.conversions - before.conversions;
  d.precharged_cells = after.precharged_cells - before.precharged_cells;
  d.cycles = after.cycles - before.cycles;
  return d;
}

}  // namespace

template <typename Scalar>
TileResult run_gemm_tile(BasicMacArray<Scalar>& array, const IntMatrix& inputs, const IntMatrix& weights,
                         const TileOptions& options) {
  const int R = array.rows();
  const int C = array.cols();
  const auto active_rows = static_cast<int>(inputs.rows());
  const auto active_cols = static_cast<int>(weights.cols());
  const auto k = static_cast<int>(inputs.cols());
  if (weights.rows() != k)
    throw ShapeError("inner dimensions differ: inputs have K=" + std::to_string(k) + ", weights have K=" +
                     std::to_string(weights.rows()));
  if (active_rows > R || active_cols > C)
    throw ShapeError("tile " + std::to_string(active_rows) + "x" + std::to_string(active_cols) +
                     " does not fit a " + std::to_string(R) + "x" + std::to_string(C) + " array");

  const DeviceParams& p = array.params();
  const int physical = options.chop ? 2 * k : k;
  if (physical > p.max_mac_ops)
    throw BudgetError("tile needs " + std::to_string(physical) + " MAC cycles but one precharge holds " +
                      std::to_string(p.max_mac_ops) + "; split K into smaller tiles");

  const EnergyLedger before = array.ledger();
  const int shift = p.weight_shift();
  array.precharge();

  std::vector<int> in(static_cast<std::size_t>(R), 0);
  std::vector<int> units(static_cast<std::size_t>(C), 0);
  for (int step = 0; step < k; ++step) {
    for (int i = 0; i < active_rows; ++i) in[static_cast<std::size_t>(i)] = inputs(i, step);
    for (int j = 0; j < active_cols; ++j) {
      const int u = weights(step, j) + shift;
      if (u < 0 || u > p.tail_units)
        throw RangeError("weight code " + std::to_string(weights(step, j)) + " outside the bank range");
      units[static_cast<std::size_t>(j)] = u;
    }
    array.drive_cycle(in, units);
    if (options.chop) {
      for (int i = 0; i < active_rows; ++i) in[static_cast<std::size_t>(i)] = -inputs(i, step);
      for (int j = 0; j < active_cols; ++j) {
        const int u = -weights(step, j) + shift;
        if (u > p.tail_units)
          throw RangeError("weight code " + std::to_string(weights(step, j)) +
                           " cannot be negated: chopping needs " + std::to_string(u) + " tail units");
        units[static_cast<std::size_t>(j)] = u;
      }
      array.drive_cycle(in, units);
    }
  }
  array.apply_noise(options.noise_seed);

  TileResult result;
  result.readout = array.readout();
  result.analog = array.differential().topLeftCorner(active_rows, active_cols).template cast<double>();
  result.input_sums = inputs.rowwise().sum();
  result.weight_sums = weights.colwise().sum().transpose();
  result.k = k;
  result.events = ledger_delta(array.ledger(), before);
  return result;
}

template class BasicMacArray<double>;
template class BasicMacArray<long double>;
template TileResult run_gemm_tile<double>(BasicMacArray<double>&, const IntMatrix&, const IntMatrix&,
                                          const TileOptions&);
template TileResult run_gemm_tile<long double>(BasicMacArray<long double>&, const IntMatrix&, const IntMatrix&,
                                               const TileOptions&);

}  // namespace macdo
