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

// Behavioral models of the analog blocks around one charge-steering cell:
// the input DAC, the cell pair itself, the thermometer-coded tail capacitor
// bank that sets the gain, and the differential readout ADC.
//
// The cell is a pair of precharged capacitors (v_q, v_qn). Each MAC phase
// discharges both nodes; the differential input steers the discharge so that
// V_out = v_qn - v_q grows by v_in * A_v with A_v = 2 * C_T / C_D.

#pragma once

#include "macdo/common.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace macdo {

struct DeviceParams {
  double c_d = 100e-15;            // cell capacitor
  double c_unit = 8e-15;           // one tail unit capacitor
  int tail_units = 15;             // thermometer units per column bank
  double c_par = 2e-15;            // bit-line + bank parasitic
  double v_dd = 1.2;
  double f_clk = 12.5e6;
  double v_lsb = 37.5e-6;          // differential DAC step per input code
  double sigma_cell_noise = 264.3e-6;
  double v_floor = 0.2;
  double cm_droop_per_unit = 0.267e-3;
  int max_mac_ops = 200;
  int adc_bits = 6;
  double adc_fullscale = 0.3;      // +/- differential
  double e_mac = 10.6e-15;         // per cell-MAC
  double e_adc = 0.89e-12;         // per conversion
  double e_precharge = 0.0;        // per cell per precharge
  double e_row_ctrl = 0.155556e-15;  // per row per cycle
  double e_rdac = 0.155556e-15;      // per row per cycle
  double e_col_ctrl = 0.155556e-15;  // per column per cycle
  double gain_compression = 0.0;   // 1/V; per-step gain factor 1 - k*|V_out|
  std::vector<double> tail_unit_caps;  // optional nonuniform unit sizes

  /// Throws ConfigError on any hard constraint violation.
  void validate() const;
  /// Soft findings (e.g. unit capacitor outside the 6.8-9.6 fF design range).
  std::vector<std::string> warnings() const;

  /// 2^(N-1) shift applied to signed weight codes before the bank.
  int weight_shift() const { return (tail_units + 1) / 2; }
  int max_input_code() const { return 15; }
  double unit_gain() const { return 2.0 * c_unit / c_d; }
  /// Volts of differential output per unit of I*W.
  double value_unit() const { return v_lsb * unit_gain(); }
  double adc_lsb() const { return 2.0 * adc_fullscale / static_cast<double>(1L << adc_bits); }

  /// Defaults with every non-ideality switched off (no parasitic, no noise).
  static DeviceParams ideal();
};

template <typename Scalar = double>
struct CellState {
  Scalar v_q{};
  Scalar v_qn{};
  int mac_count = 0;

  Scalar v_out() const { return v_qn - v_q; }
};

struct WeightBankState {
  int enabled_units = 0;
  double effective_c_t = 0.0;
};

/// Bank with `units` thermometer units switched on.
WeightBankState make_bank(int units, const DeviceParams& p);

inline double effective_tail_capacitance(int units, const DeviceParams& p) {
  if (p.tail_unit_caps.empty()) return units * p.c_unit + p.c_par;
  double c = p.c_par;
  for (int i = 0; i < units; ++i) c += p.tail_unit_caps[static_cast<std::size_t>(i)];
  return c;
}

/// Sign + magnitude input code to differential volts. |code| <= 15.
template <typename Scalar = double>
Scalar dac_convert(int code, const DeviceParams& p) {
  if (code < -p.max_input_code() || code > p.max_input_code())
    throw RangeError("input code " + std::to_string(code) + " outside [-15, 15]");
  const Scalar magnitude = static_cast<Scalar>(code < 0 ? -code : code) * static_cast<Scalar>(p.v_lsb);
  return code < 0 ? -magnitude : magnitude;
}

template <typename Scalar = double>
Scalar compute_gain(const WeightBankState& bank, const DeviceParams& p) {
  return Scalar(2) * static_cast<Scalar>(bank.effective_c_t) / static_cast<Scalar>(p.c_d);
}

template <typename Scalar = double>
CellState<Scalar> precharge(const CellState<Scalar>&, const DeviceParams& p) {
  return {static_cast<Scalar>(p.v_dd), static_cast<Scalar>(p.v_dd), 0};
}

template <typename Scalar = double>
CellState<Scalar> precharge(const DeviceParams& p) {
  return {static_cast<Scalar>(p.v_dd), static_cast<Scalar>(p.v_dd), 0};
}

/// One MAC phase + standby on a single cell.
template <typename Scalar = double>
CellState<Scalar> mac_step(const CellState<Scalar>& cell, Scalar v_in, const WeightBankState& bank,
                           const DeviceParams& p) {
  using std::abs;
  Scalar gain = compute_gain<Scalar>(bank, p);
  if (p.gain_compression != 0.0) {
    Scalar g = Scalar(1) - static_cast<Scalar>(p.gain_compression) * abs(cell.v_out());
    gain *= g < Scalar(0) ? Scalar(0) : g;
  }
  const Scalar delta = v_in * gain;
  const Scalar droop = static_cast<Scalar>(bank.effective_c_t / p.c_unit * p.cm_droop_per_unit);
  const Scalar half = delta / Scalar(2);
  const Scalar vdd = static_cast<Scalar>(p.v_dd);

  CellState<Scalar> next;
  next.v_q = cell.v_q - droop - half;
  next.v_qn = cell.v_qn - droop + half;
  // Discharge only; a node never charges above the supply.
  if (next.v_q > vdd) next.v_q = vdd;
  if (next.v_qn > vdd) next.v_qn = vdd;
  next.mac_count = cell.mac_count + 1;

  if (next.mac_count > p.max_mac_ops)
    throw HeadroomError("accumulation budget of " + std::to_string(p.max_mac_ops) +
                        " MACs exceeded");
  const Scalar floor = static_cast<Scalar>(p.v_floor);
  if (next.v_q < floor || next.v_qn < floor)
    throw HeadroomError("cell voltage fell below the " + std::to_string(p.v_floor) + " V floor");
  return next;
}

struct AdcSample {
  int code = 0;
  bool saturated = false;
};

/// Mid-rise saturating quantizer over [-fullscale, +fullscale].
AdcSample adc_sample(double v_diff, const DeviceParams& p);

inline int adc_read(double v_diff, const DeviceParams& p) { return adc_sample(v_diff, p).code; }

/// Center of the code's quantization interval, in volts.
inline double adc_reconstruct(int code, const DeviceParams& p) {
  return (static_cast<double>(code) + 0.5) * p.adc_lsb();
}

/// Independent Gaussian perturbation on both nodes, deterministic per seed.
template <typename Scalar = double>
CellState<Scalar> apply_noise(const CellState<Scalar>& cell, const DeviceParams& p, std::uint64_t seed) {
  if (p.sigma_cell_noise <= 0.0) return cell;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, p.sigma_cell_noise);
  CellState<Scalar> out = cell;
  out.v_q += static_cast<Scalar>(dist(gen));
  out.v_qn += static_cast<Scalar>(dist(gen));
  return out;
}

}  // namespace macdo
