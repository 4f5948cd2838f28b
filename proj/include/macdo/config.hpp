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

// Experiment configuration shared by every command. One JSON document,
// every section optional; unknown keys are rejected.

#pragma once

#include "macdo/correction.hpp"
#include "macdo/device.hpp"
#include "macdo/mapper.hpp"
#include "macdo/metrics.hpp"
#include "macdo/nonideality.hpp"
#include "macdo/quant.hpp"
#include "macdo/serialize.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace macdo {

struct GemmShape {
  int rows = 16;
  int k = 16;
  int cols = 16;
  std::uint64_t data_seed = 1;  // operands drawn when no tensor files are given
};

struct ExperimentConfig {
  DeviceParams device;
  MismatchSpec mismatch;
  int quant_bits = 4;
  double input_scale = 1.0;     // <= 0: max-abs
  double weight_scale = 1.0;
  ArrayDims array;
  CorrectionMode correction = CorrectionMode::kNone;
  ReadoutPath readout = ReadoutPath::kAnalog;
  bool pack_images = false;
  int k_budget = 0;             // 0: largest the device allows
  int calibration_cycles = 64;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  GemmShape gemm;
  PowerFractions power_fractions = PowerFractions::fitted_c3();
  std::string dequant = "nominal";  // or "affine"
  int dequant_fit_images = 4;
  int surface_accumulations = 50;

  /// Throws ConfigError when the sections disagree with each other.
  void validate() const;

  QuantSpec input_quant() const { return {quant_bits, input_scale, true, true}; }
  QuantSpec weight_quant() const { return {quant_bits, weight_scale, true, false}; }
  bool chop() const { return correction == CorrectionMode::kDigitalChop; }
  /// k_budget, or the device limit (halved when chopping) when unset.
  int effective_k_budget() const;
};

void to_json(Json& j, const ExperimentConfig& c);
void from_json(const Json& j, ExperimentConfig& c);

std::string_view to_string(ReadoutPath r);
ReadoutPath parse_readout_path(std::string_view s);

/// Applies "path=value" to `j`. The path is dotted (device.c_par) or a JSON
/// pointer (/device/c_par); the value is parsed as JSON, falling back to a
/// plain string.
void apply_override(Json& j, const std::string& assignment);

/// Defaults, then the file (if any), then overrides, then validation.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace macdo
