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

#include "macdo/serialize.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace macdo {

void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
  }
}

namespace {

template <typename T>
void get_if(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

void to_json(Json& j, const DeviceParams& p) {
  j = Json{{"c_d", p.c_d},
           {"c_unit", p.c_unit},
           {"tail_units", p.tail_units},
           {"c_par", p.c_par},
           {"v_dd", p.v_dd},
           {"f_clk", p.f_clk},
           {"v_lsb", p.v_lsb},
           {"sigma_cell_noise", p.sigma_cell_noise},
           {"v_floor", p.v_floor},
           {"cm_droop_per_unit", p.cm_droop_per_unit},
           {"max_mac_ops", p.max_mac_ops},
           {"adc_bits", p.adc_bits},
           {"adc_fullscale", p.adc_fullscale},
           {"e_mac", p.e_mac},
           {"e_adc", p.e_adc},
           {"e_precharge", p.e_precharge},
           {"e_row_ctrl", p.e_row_ctrl},
           {"e_rdac", p.e_rdac},
           {"e_col_ctrl", p.e_col_ctrl},
           {"gain_compression", p.gain_compression}};
  if (!p.tail_unit_caps.empty()) j["tail_unit_caps"] = p.tail_unit_caps;
}

void from_json(const Json& j, DeviceParams& p) {
  reject_unknown_keys(j,
                      {"c_d", "c_unit", "tail_units", "c_par", "v_dd", "f_clk", "v_lsb", "sigma_cell_noise", "v_floor",
                       "cm_droop_per_unit", "max_mac_ops", "adc_bits", "adc_fullscale", "e_mac", "e_adc",
                       "e_precharge", "e_row_ctrl", "e_rdac", "e_col_ctrl", "gain_compression", "tail_unit_caps"},
                      "device parameters");
  get_if(j, "c_d", p.c_d);
  get_if(j, "c_unit", p.c_unit);
  get_if(j, "tail_units", p.tail_units);
  get_if(j, "c_par", p.c_par);
  get_if(j, "v_dd", p.v_dd);
  get_if(j, "f_clk", p.f_clk);
  get_if(j, "v_lsb", p.v_lsb);
  get_if(j, "sigma_cell_noise", p.sigma_cell_noise);
  get_if(j, "v_floor", p.v_floor);
  get_if(j, "cm_droop_per_unit", p.cm_droop_per_unit);
  get_if(j, "max_mac_ops", p.max_mac_ops);
  get_if(j, "adc_bits", p.adc_bits);
  get_if(j, "adc_fullscale", p.adc_fullscale);
  get_if(j, "e_mac", p.e_mac);
  get_if(j, "e_adc", p.e_adc);
  get_if(j, "e_precharge", p.e_precharge);
  get_if(j, "e_row_ctrl", p.e_row_ctrl);
  get_if(j, "e_rdac", p.e_rdac);
  get_if(j, "e_col_ctrl", p.e_col_ctrl);
  get_if(j, "gain_compression", p.gain_compression);
  get_if(j, "tail_unit_caps", p.tail_unit_caps);
  p.validate();
}

void to_json(Json& j, const MismatchSpec& s) {
  j = Json{{"sigma_im", s.sigma_im},
           {"centroid_replicas", s.centroid_replicas},
           {"gradient_x", s.gradient_x},
           {"gradient_y", s.gradient_y},
           {"seed", s.seed}};
}

void from_json(const Json& j, MismatchSpec& s) {
  reject_unknown_keys(j, {"sigma_im", "centroid_replicas", "gradient_x", "gradient_y", "seed"}, "mismatch");
  get_if(j, "sigma_im", s.sigma_im);
  get_if(j, "centroid_replicas", s.centroid_replicas);
  get_if(j, "gradient_x", s.gradient_x);
  get_if(j, "gradient_y", s.gradient_y);
  get_if(j, "seed", s.seed);
  s.validate();
}

void to_json(Json& j, const ConvLayerSpec& l) {
  j = Json{{"in_channels", l.in_channels}, {"height", l.height},   {"width", l.width},   {"kernel", l.kernel},
           {"out_channels", l.out_channels}, {"stride", l.stride}, {"padding", l.padding}};
}

void from_json(const Json& j, ConvLayerSpec& l) {
  reject_unknown_keys(j, {"in_channels", "height", "width", "kernel", "out_channels", "stride", "padding"},
                      "layer spec");
  get_if(j, "in_channels", l.in_channels);
  get_if(j, "height", l.height);
  get_if(j, "width", l.width);
  get_if(j, "kernel", l.kernel);
  get_if(j, "out_channels", l.out_channels);
  get_if(j, "stride", l.stride);
  get_if(j, "padding", l.padding);
  try {
    l.validate();
  } catch (const ShapeError& e) {
    throw ConfigError(e.what());
  }
}

void to_json(Json& j, const CalibrationConstants& c) {
  Json im = Json::array();
  Json prod = Json::array();
  for (Eigen::Index i = 0; i < c.i_m.rows(); ++i) {
    Json row = Json::array();
    Json prow = Json::array();
    for (Eigen::Index k = 0; k < c.i_m.cols(); ++k) {
      row.push_back(c.i_m(i, k));
      prow.push_back(c.im_wc(i, k));
    }
    im.push_back(row);
    prod.push_back(prow);
  }
  j = Json{{"k_cal", c.k_cal},
           {"rows", c.i_m.rows()},
           {"cols", c.i_m.cols()},
           {"i_m", im},
           {"w_c", std::vector<double>(c.w_c.data(), c.w_c.data() + c.w_c.size())},
           {"im_wc", prod}};
}

void from_json(const Json& j, CalibrationConstants& c) {
  reject_unknown_keys(j, {"k_cal", "rows", "cols", "i_m", "w_c", "im_wc"}, "calibration constants");
  try {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    c.k_cal = j.value("k_cal", 0);
    const auto w = j.at("w_c").get<std::vector<double>>();
    if (static_cast<int>(w.size()) != cols) throw ConfigError("w_c length differs from cols");
    c.w_c = Eigen::Map<const Vec<double>>(w.data(), cols);
    c.i_m.resize(rows, cols);
    const auto& im = j.at("i_m");
    if (static_cast<int>(im.size()) != rows) throw ConfigError("i_m row count differs from rows");
    for (int i = 0; i < rows; ++i) {
      const auto r = im.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
      if (static_cast<int>(r.size()) != cols) throw ConfigError("i_m row length differs from cols");
      for (int k = 0; k < cols; ++k) c.i_m(i, k) = r[static_cast<std::size_t>(k)];
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed calibration constants: ") + e.what());
  }
  c.im_wc = c.i_m.array().rowwise() * c.w_c.transpose().array();
}

void to_json(Json& j, const PowerFractions& f) {
  j = Json::object();
  for (Block b : kAllBlocks) j[std::string(block_name(b))] = f[b];
}

void from_json(const Json& j, PowerFractions& f) {
  reject_unknown_keys(j, {"array", "row_controller", "r_dac", "col_controller", "adc"}, "power fractions");
  for (Block b : kAllBlocks) get_if(j, std::string(block_name(b)).c_str(), f[b]);
  f.validate();
}

void to_json(Json& j, const RunReport& r) {
  Json energy = Json::object();
  Json power = Json::object();
  for (Block b : kAllBlocks) {
    energy[std::string(block_name(b))] = r.energy[b];
    power[std::string(block_name(b))] = r.power[b];
  }
  j = Json{{"mac_ops", r.mac_ops},
           {"cycles", r.cycles},
           {"adc_conversions", r.adc_conversions},
           {"tiles", r.tiles},
           {"energy_breakdown_j", energy},
           {"energy_total_j", r.energy.total()},
           {"power_breakdown_w", power},
           {"avg_power_w", r.avg_power},
           {"throughput_ops", r.throughput},
           {"efficiency_ops_per_w", r.efficiency},
           {"utilization", r.utilization},
           {"utilization_per_tile", r.utilization_per_tile},
           {"column_utilization", r.column_utilization},
           {"saturation_count", r.saturation_count},
           {"inference_time_s", r.inference_time}};
}

void to_json(Json& j, const TiledSchedule& s) {
  Json tiles = Json::array();
  for (const Tile& t : s.tiles)
    tiles.push_back(Json{{"row0", t.row0}, {"rows", t.rows}, {"col0", t.col0}, {"cols", t.cols},
                         {"k0", t.k0},     {"k", t.k},       {"image", t.image}});
  j = Json{{"array", {{"rows", s.dims.rows}, {"cols", s.dims.cols}}},
           {"total_rows", s.total_rows},
           {"total_k", s.total_k},
           {"total_cols", s.total_cols},
           {"k_budget", s.k_budget},
           {"packed", s.packed},
           {"mac_count", s.mac_count()},
           {"utilization", s.utilization()},
           {"utilization_per_tile", s.utilization_per_tile()},
           {"column_utilization", s.column_utilization()},
           {"row_utilization", s.row_utilization()},
           {"tiles", tiles}};
}

std::string report_csv(const RunReport& r) {
  std::ostringstream head;
  std::ostringstream vals;
  auto col = [&](std::string_view name, const std::string& v) {
    if (head.tellp() > 0) {
      head << ',';
      vals << ',';
    }
    head << name;
    vals << v;
  };
  col("mac_ops", std::to_string(r.mac_ops));
  col("cycles", std::to_string(r.cycles));
  col("adc_conversions", std::to_string(r.adc_conversions));
  col("tiles", std::to_string(r.tiles));
  for (Block b : kAllBlocks) col("energy_" + std::string(block_name(b)) + "_j", number(r.energy[b]));
  col("energy_total_j", number(r.energy.total()));
  col("avg_power_w", number(r.avg_power));
  col("throughput_ops", number(r.throughput));
  col("efficiency_ops_per_w", number(r.efficiency));
  col("utilization", number(r.utilization));
  col("utilization_per_tile", number(r.utilization_per_tile));
  col("column_utilization", number(r.column_utilization));
  col("saturation_count", std::to_string(r.saturation_count));
  col("inference_time_s", number(r.inference_time));
  return head.str() + "\n" + vals.str() + "\n";
}

IntTensor TensorFile::as_int() const {
  IntTensor t;
  t.shape = shape;
  t.data.reserve(data.size());
  for (double v : data) {
    if (v != std::floor(v) || v < std::numeric_limits<std::int32_t>::min() ||
        v > std::numeric_limits<std::int32_t>::max())
      throw IoError("tensor value " + number(v) + " is not an int32");
    t.data.push_back(static_cast<std::int32_t>(v));
  }
  return t;
}

RealTensor TensorFile::as_real() const {
  RealTensor t;
  t.shape = shape;
  t.data = data;
  return t;
}

IntMatrix TensorFile::as_int_matrix() const {
  if (shape.size() != 2) throw IoError("expected a rank-2 tensor, got rank " + std::to_string(shape.size()));
  const IntTensor t = as_int();
  IntMatrix m(static_cast<Eigen::Index>(shape[0]), static_cast<Eigen::Index>(shape[1]));
  for (std::size_t i = 0; i < shape[0]; ++i)
    for (std::size_t k = 0; k < shape[1]; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = t(i, k);
  return m;
}

TensorFile parse_tensor(const Json& j) {
  try {
    reject_unknown_keys(j, {"dtype", "shape", "data"}, "tensor file");
  } catch (const ConfigError& e) {
    throw IoError(e.what());
  }
  TensorFile t;
  try {
    t.dtype = j.at("dtype").get<std::string>();
    t.shape = j.at("shape").get<std::vector<std::size_t>>();
    t.data = j.at("data").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed tensor: ") + e.what());
  }
  if (t.dtype != "int32" && t.dtype != "float64") throw IoError("tensor dtype must be int32 or float64");
  if (Tensor<double>::element_count(t.shape) != t.data.size())
    throw IoError("tensor shape holds " + std::to_string(Tensor<double>::element_count(t.shape)) +
                  " elements but data has " + std::to_string(t.data.size()));
  if (t.dtype == "int32") (void)t.as_int();
  return t;
}

TensorFile read_tensor_file(const std::filesystem::path& path) { return parse_tensor(read_json_file(path)); }

Json tensor_json(const IntTensor& t) { return Json{{"dtype", "int32"}, {"shape", t.shape}, {"data", t.data}}; }

Json tensor_json(const RealTensor& t) { return Json{{"dtype", "float64"}, {"shape", t.shape}, {"data", t.data}}; }

Json matrix_json(const RealMatrix& m) {
  RealTensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) t(i, k) = m(i, k);
  return tensor_json(t);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace macdo
