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

#include "macdo/device.hpp"

#include <cmath>

namespace macdo {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw ConfigError(std::string(name) + " must be non-negative, got " + std::to_string(v));
}

}  // namespace

void DeviceParams::validate() const {
  require_positive(c_d, "c_d");
  require_positive(c_unit, "c_unit");
  require_non_negative(c_par, "c_par");
  require_positive(v_dd, "v_dd");
  require_positive(f_clk, "f_clk");
  require_positive(v_lsb, "v_lsb");
  require_non_negative(sigma_cell_noise, "sigma_cell_noise");
  require_positive(v_floor, "v_floor");
  require_non_negative(cm_droop_per_unit, "cm_droop_per_unit");
  require_positive(adc_fullscale, "adc_fullscale");
  require_non_negative(e_mac, "e_mac");
  require_non_negative(e_adc, "e_adc");
  require_non_negative(e_precharge, "e_precharge");
  require_non_negative(e_row_ctrl, "e_row_ctrl");
  require_non_negative(e_rdac, "e_rdac");
  require_non_negative(e_col_ctrl, "e_col_ctrl");
  require_non_negative(gain_compression, "gain_compression");
  if (tail_units < 1) throw ConfigError("tail_units must be >= 1");
  if (max_mac_ops < 1) throw ConfigError("max_mac_ops must be >= 1");
  if (adc_bits < 1 || adc_bits > 30) throw ConfigError("adc_bits must be in [1, 30]");
  if (v_floor >= v_dd) throw ConfigError("v_floor must be below v_dd");
  if (!tail_unit_caps.empty()) {
    if (static_cast<int>(tail_unit_caps.size()) != tail_units)
      throw ConfigError("tail_unit_caps has " + std::to_string(tail_unit_caps.size()) + " entries, expected " +
                        std::to_string(tail_units));
    for (double c : tail_unit_caps) require_positive(c, "tail_unit_caps[]");
  }
}

std::vector<std::string> DeviceParams::warnings() const {
  std::vector<std::string> out;
  auto check = [&](double c) {
    if (c < 6.8e-15 || c > 9.6e-15)
      out.push_back("tail unit capacitance " + std::to_string(c * 1e15) +
                    " fF is outside the 6.8-9.6 fF design range");
  };
  if (tail_unit_caps.empty()) {
    check(c_unit);
  } else {
    for (double c : tail_unit_caps) check(c);
  }
  return out;
}

DeviceParams DeviceParams::ideal() {
  DeviceParams p;
  p.c_par = 0.0;
  p.sigma_cell_noise = 0.0;
  return p;
}

WeightBankState make_bank(int units, const DeviceParams& p) {
  if (units < 0 || units > p.tail_units)
    throw RangeError("tail unit count " + std::to_string(units) + " outside [0, " + std::to_string(p.tail_units) +
                     "]");
  return {units, effective_tail_capacitance(units, p)};
}

AdcSample adc_sample(double v_diff, const DeviceParams& p) {
  const long top = (1L << (p.adc_bits - 1)) - 1;
  const long bottom = -(1L << (p.adc_bits - 1));
  if (std::isnan(v_diff)) throw RangeError("ADC input is NaN");
  const double level = std::floor(v_diff / p.adc_lsb());
  if (level > static_cast<double>(top)) return {static_cast<int>(top), true};
  if (level < static_cast<double>(bottom)) return {static_cast<int>(bottom), true};
  return {static_cast<int>(level), false};
}

}  // namespace macdo
