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

// JSON forms of the library's types, plus the tensor file format
// {"dtype": "int32" | "float64", "shape": [...], "data": [row-major values]}.
// Readers reject unknown keys.

#pragma once

#include "macdo/correction.hpp"
#include "macdo/device.hpp"
#include "macdo/mapper.hpp"
#include "macdo/metrics.hpp"
#include "macdo/nonideality.hpp"
#include "macdo/quant.hpp"
#include "macdo/tensor.hpp"

#include <json.hpp>

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

namespace macdo {

using Json = nlohmann::json;

/// Throws ConfigError naming the first key of `j` not in `allowed`.
void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where);

void to_json(Json& j, const DeviceParams& p);
void from_json(const Json& j, DeviceParams& p);

void to_json(Json& j, const MismatchSpec& s);
void from_json(const Json& j, MismatchSpec& s);

void to_json(Json& j, const ConvLayerSpec& l);
void from_json(const Json& j, ConvLayerSpec& l);

void to_json(Json& j, const CalibrationConstants& c);
void from_json(const Json& j, CalibrationConstants& c);

void to_json(Json& j, const PowerFractions& f);
void from_json(const Json& j, PowerFractions& f);

void to_json(Json& j, const RunReport& r);
void to_json(Json& j, const TiledSchedule& s);

/// Single header line plus one value line.
std::string report_csv(const RunReport& r);

struct TensorFile {
  std::string dtype = "int32";
  std::vector<std::size_t> shape;
  std::vector<double> data;

  IntTensor as_int() const;
  RealTensor as_real() const;
  IntMatrix as_int_matrix() const;
};

TensorFile parse_tensor(const Json& j);
TensorFile read_tensor_file(const std::filesystem::path& path);
Json tensor_json(const IntTensor& t);
Json tensor_json(const RealTensor& t);
Json matrix_json(const RealMatrix& m);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; identical input gives identical bytes.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace macdo
