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

#include "macdo/config.hpp"

#include "macdo/array.hpp"

namespace macdo {

std::string_view to_string(ReadoutPath r) { return r == ReadoutPath::kAdc ? "adc" : "analog"; }

ReadoutPath parse_readout_path(std::string_view s) {
  if (s == "analog") return ReadoutPath::kAnalog;
  if (s == "adc") return ReadoutPath::kAdc;
  throw ConfigError("unknown readout path '" + std::string(s) + "' (analog, adc)");
}

int ExperimentConfig::effective_k_budget() const { return k_budget > 0 ? k_budget : tile_k_budget(device, chop()); }

void ExperimentConfig::validate() const {
  device.validate();
  mismatch.validate();
  power_fractions.validate();
  if (array.rows <= 0 || array.cols <= 0) throw ConfigError("array rows and cols must be positive");
  if (quant_bits < 1 || quant_bits > 4)
    throw ConfigError("quant.bits must be in [1, 4]; the input DAC takes sign + 4-bit magnitude");
  const int half = 1 << (quant_bits - 1);
  if (half > device.weight_shift() || half - 1 + device.weight_shift() > device.tail_units)
    throw ConfigError(std::to_string(quant_bits) + "-bit weights do not fit a " + std::to_string(device.tail_units) +
                      "-unit tail bank");
  if (k_budget < 0) throw ConfigError("schedule.k_budget must be >= 0");
  const int limit = tile_k_budget(device, chop());
  if (k_budget > limit) {
    if (chop())
      throw ConfigError("schedule.k_budget " + std::to_string(k_budget) + " is too large for digital+chop: each tile runs 2K = " +
                        std::to_string(2 * k_budget) + " cycles but one precharge holds " +
                        std::to_string(device.max_mac_ops));
    throw ConfigError("schedule.k_budget " + std::to_string(k_budget) + " exceeds max_mac_ops " +
                      std::to_string(device.max_mac_ops));
  }
  if (calibration_cycles < 1 || calibration_cycles > device.max_mac_ops)
    throw ConfigError("calibration_cycles must be in [1, max_mac_ops]");
  if (dequant != "nominal" && dequant != "affine") throw ConfigError("dequant must be 'nominal' or 'affine'");
  if (dequant_fit_images < 1) throw ConfigError("dequant_fit_images must be >= 1");
  if (surface_accumulations < 1 || surface_accumulations > device.max_mac_ops)
    throw ConfigError("surface.accumulations must be in [1, max_mac_ops]");
  if (gemm.rows < 0 || gemm.k < 0 || gemm.cols < 0) throw ConfigError("gemm dimensions must be non-negative");
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

void to_json(Json& j, const ExperimentConfig& c) {
  j = Json{{"device", c.device},
           {"mismatch", c.mismatch},
           {"quant", {{"bits", c.quant_bits}, {"input_scale", c.input_scale}, {"weight_scale", c.weight_scale}}},
           {"array", {{"rows", c.array.rows}, {"cols", c.array.cols}}},
           {"correction", std::string(to_string(c.correction))},
           {"readout", std::string(to_string(c.readout))},
           {"schedule", {{"pack_images", c.pack_images}, {"k_budget", c.k_budget}}},
           {"calibration_cycles", c.calibration_cycles},
           {"seed", c.seed},
           {"out_dir", c.out_dir},
           {"gemm", {{"rows", c.gemm.rows}, {"k", c.gemm.k}, {"cols", c.gemm.cols}, {"data_seed", c.gemm.data_seed}}},
           {"power_fractions", c.power_fractions},
           {"dequant", c.dequant},
           {"dequant_fit_images", c.dequant_fit_images},
           {"surface", {{"accumulations", c.surface_accumulations}}}};
}

namespace {

template <typename T>
void read(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

void from_json(const Json& j, ExperimentConfig& c) {
  reject_unknown_keys(j,
                      {"device", "mismatch", "quant", "array", "correction", "readout", "schedule", "calibration_cycles",
                       "seed", "out_dir", "gemm", "power_fractions", "dequant", "dequant_fit_images", "surface"},
                      "config");
  if (j.contains("device")) c.device = j.at("device").get<DeviceParams>();
  if (j.contains("mismatch")) c.mismatch = j.at("mismatch").get<MismatchSpec>();
  if (j.contains("power_fractions")) c.power_fractions = j.at("power_fractions").get<PowerFractions>();
  if (j.contains("quant")) {
    const Json& q = j.at("quant");
    reject_unknown_keys(q, {"bits", "input_scale", "weight_scale"}, "quant");
    read(q, "bits", c.quant_bits);
    read(q, "input_scale", c.input_scale);
    read(q, "weight_scale", c.weight_scale);
  }
  if (j.contains("array")) {
    const Json& a = j.at("array");
    reject_unknown_keys(a, {"rows", "cols"}, "array");
    read(a, "rows", c.array.rows);
    read(a, "cols", c.array.cols);
  }
  if (j.contains("schedule")) {
    const Json& s = j.at("schedule");
    reject_unknown_keys(s, {"pack_images", "k_budget"}, "schedule");
    read(s, "pack_images", c.pack_images);
    read(s, "k_budget", c.k_budget);
  }
  if (j.contains("gemm")) {
    const Json& g = j.at("gemm");
    reject_unknown_keys(g, {"rows", "k", "cols", "data_seed"}, "gemm");
    read(g, "rows", c.gemm.rows);
    read(g, "k", c.gemm.k);
    read(g, "cols", c.gemm.cols);
    read(g, "data_seed", c.gemm.data_seed);
  }
  if (j.contains("surface")) {
    const Json& s = j.at("surface");
    reject_unknown_keys(s, {"accumulations"}, "surface");
    read(s, "accumulations", c.surface_accumulations);
  }
  std::string mode;
  read(j, "correction", mode);
  if (!mode.empty()) c.correction = parse_correction_mode(mode);
  std::string path;
  read(j, "readout", path);
  if (!path.empty()) c.readout = parse_readout_path(path);
  read(j, "calibration_cycles", c.calibration_cycles);
  read(j, "seed", c.seed);
  read(j, "out_dir", c.out_dir);
  read(j, "dequant", c.dequant);
  read(j, "dequant_fit_images", c.dequant_fit_images);
}

void apply_override(Json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  if (key.front() != '/') {
    for (char& ch : key)
      if (ch == '.') ch = '/';
    key.insert(key.begin(), '/');
  }
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  try {
    j[Json::json_pointer(key)] = value;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot apply override '" + assignment + "': " + e.what());
  }
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  Json j = ExperimentConfig{};
  if (!path.empty()) {
    const Json file = read_json_file(path);
    if (!file.is_object()) throw ConfigError(path + " must hold a JSON object");
    reject_unknown_keys(file,
                        {"device", "mismatch", "quant", "array", "correction", "readout", "schedule",
                         "calibration_cycles", "seed", "out_dir", "gemm", "power_fractions", "dequant",
                         "dequant_fit_images", "surface"},
                        "config");
    j.merge_patch(file);
  }
  for (const std::string& o : overrides) apply_override(j, o);
  ExperimentConfig c = j.get<ExperimentConfig>();
  c.validate();
  return c;
}

}  // namespace macdo
