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

#include "macdo/commands.hpp"

#include "macdo/oracle.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace macdo {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

struct Operand {
  IntMatrix codes;
  double scale = 1.0;
};

// int32 files are taken as codes; float64 files are quantized.
Operand to_codes(const TensorFile& t, const QuantSpec& spec) {
  Operand op;
  if (t.dtype == "int32") {
    op.codes = t.as_int_matrix();
    return op;
  }
  if (t.shape.size() != 2) throw IoError("expected a rank-2 tensor");
  const QuantSpec q = spec.resolved(t.data);
  op.scale = q.scale;
  op.codes.resize(static_cast<Eigen::Index>(t.shape[0]), static_cast<Eigen::Index>(t.shape[1]));
  for (std::size_t i = 0; i < t.data.size(); ++i) op.codes.data()[i] = q.quantize(t.data[i]);
  return op;
}

std::vector<std::int32_t> tensor_codes(const TensorFile& t, const QuantSpec& spec, double& scale) {
  if (t.dtype == "int32") {
    scale = 1.0;
    return t.as_int().data;
  }
  const QuantSpec q = spec.resolved(t.data);
  scale = q.scale;
  return q.quantize(t.data);
}

void check_range(const IntMatrix& m, int lo, int hi, const char* what) {
  if (m.size() == 0) return;
  if (m.minCoeff() < lo || m.maxCoeff() > hi)
    throw RangeError(std::string(what) + " codes must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "], found [" + std::to_string(m.minCoeff()) + ", " + std::to_string(m.maxCoeff()) + "]");
}

// Chopping negates weights, so the most negative code has no twin.
int weight_floor(const ExperimentConfig& c) {
  const QuantSpec w = c.weight_quant();
  return c.chop() ? -w.qmax() : w.qmin();
}

void check_operands(const ExperimentConfig& c, const IntMatrix& inputs, const IntMatrix& weights) {
  const QuantSpec in = c.input_quant();
  check_range(inputs, in.qmin(), in.qmax(), "input");
  check_range(weights, weight_floor(c), c.weight_quant().qmax(), "weight");
}

Json run_header(const char* command, const ExperimentConfig& c) {
  return Json{{"command", command},
              {"correction", std::string(to_string(c.correction))},
              {"readout", std::string(to_string(c.readout))},
              {"seed", c.seed},
              {"array", {{"rows", c.array.rows}, {"cols", c.array.cols}}},
              {"warnings", c.device.warnings()}};
}

ExecuteOptions execute_options(const ExperimentConfig& c, const CalibrationConstants& consts) {
  ExecuteOptions o;
  o.correction = c.correction;
  o.readout = c.readout;
  o.constants = &consts;
  o.seed = mix_seed(c.seed, 0x7E11E5);
  return o;
}

}  // namespace

ErrorStats error_stats(const RealMatrix& simulated, const RealMatrix& exact) {
  if (simulated.rows() != exact.rows() || simulated.cols() != exact.cols())
    throw ShapeError("error statistics need matching shapes");
  ErrorStats s;
  s.elements = exact.size();
  if (s.elements == 0) return s;
  const RealMatrix diff = simulated - exact;
  s.max_abs = diff.cwiseAbs().maxCoeff();
  s.mean_abs = diff.cwiseAbs().mean();
  s.rms = std::sqrt(diff.squaredNorm() / static_cast<double>(s.elements));
  const double ref = exact.norm();
  s.relative = ref > 0.0 ? diff.norm() / ref : 0.0;
  return s;
}

void to_json(Json& j, const ErrorStats& s) {
  j = Json{{"max_abs", s.max_abs},
           {"mean_abs", s.mean_abs},
           {"rms", s.rms},
           {"relative", s.relative},
           {"elements", s.elements}};
}

IntMatrix random_codes(int rows, int cols, int lo, int hi, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(gen);
  return m;
}

MacArray build_array(const ExperimentConfig& config, ArrayDims dims) {
  const MismatchSpec& s = config.mismatch;
  if (s.sigma_im == 0.0 && s.gradient_x == 0.0 && s.gradient_y == 0.0) return MacArray(dims, config.device);
  MismatchSpec seeded = s;
  seeded.seed = mix_seed(s.seed, config.seed);
  return MacArray(dims, config.device, sample_mismatch(dims.rows, dims.cols, seeded));
}

CalibrationConstants obtain_constants(const ExperimentConfig& config, MacArray& array,
                                      const std::optional<fs::path>& path) {
  if (path) {
    const CalibrationConstants c = read_json_file(*path).get<CalibrationConstants>();
    if (c.rows() != array.rows() || c.cols() != array.cols())
      throw ConfigError("calibration file is for a " + std::to_string(c.rows()) + "x" + std::to_string(c.cols()) +
                        " array, config has " + std::to_string(array.rows()) + "x" + std::to_string(array.cols()));
    return c;
  }
  if (config.correction == CorrectionMode::kNone) return CalibrationConstants::nominal(array.dims(), config.device);
  return calibrate(array, {config.calibration_cycles, mix_seed(config.seed, 0xCA11B)});
}

Json cmd_gemm(const ExperimentConfig& config, const GemmFiles& files) {
  if (files.a.has_value() != files.b.has_value()) throw ConfigError("gemm needs both --a and --b, or neither");
  Operand a;
  Operand b;
  if (files.a) {
    a = to_codes(read_tensor_file(*files.a), config.input_quant());
    b = to_codes(read_tensor_file(*files.b), config.weight_quant());
  } else {
    const GemmShape& g = config.gemm;
    const QuantSpec in = config.input_quant();
    a.codes = random_codes(g.rows, g.k, in.qmin(), in.qmax(), mix_seed(g.data_seed, 0xA));
    b.codes = random_codes(g.k, g.cols, weight_floor(config), config.weight_quant().qmax(), mix_seed(g.data_seed, 0xB));
  }
  if (a.codes.cols() != b.codes.rows())
    throw ShapeError("inner dimensions differ: A is " + std::to_string(a.codes.rows()) + "x" +
                     std::to_string(a.codes.cols()) + ", B is " + std::to_string(b.codes.rows()) + "x" +
                     std::to_string(b.codes.cols()));
  check_operands(config, a.codes, b.codes);

  const TiledSchedule schedule =
      tile_schedule(a.codes, b.codes, config.array, {false, config.effective_k_budget(), {}});
  MacArray array = build_array(config, config.array);
  const CalibrationConstants consts = obtain_constants(config, array, files.calibration);
  const Execution run = execute_schedule(schedule, a.codes, b.codes, array, execute_options(config, consts));

  const RealMatrix exact = oracle::gemm_exact(a.codes, b.codes).cast<double>();
  const ErrorStats err = error_stats(run.output, exact);

  const fs::path out(config.out_dir);
  write_json_file(out / "output.json", matrix_json(run.output * (a.scale * b.scale)));
  Json report = run_header("gemm", config);
  report["shape"] = {{"rows", a.codes.rows()}, {"k", a.codes.cols()}, {"cols", b.codes.cols()}};
  report["scales"] = {{"input", a.scale}, {"weight", b.scale}};
  report["report"] = run.report;
  report["error_vs_oracle"] = err;
  write_json_file(out / "report.json", report);
  write_text_file(out / "report.csv", report_csv(run.report));
  return Json{{"command", "gemm"}, {"out_dir", config.out_dir}, {"error_vs_oracle", err}};
}

Json cmd_conv(const ExperimentConfig& config, const ConvFiles& files) {
  const ConvLayerSpec layer = read_json_file(files.layer).get<ConvLayerSpec>();
  const TensorFile act_file = read_tensor_file(files.activations);
  const TensorFile filt_file = read_tensor_file(files.filters);

  IntTensor activations;
  activations.shape = act_file.shape;
  if (activations.shape.size() == 3) activations.shape.insert(activations.shape.begin(), 1);
  double s_in = 1.0;
  double s_w = 1.0;
  activations.data = tensor_codes(act_file, config.input_quant(), s_in);
  IntTensor filters;
  filters.shape = filt_file.shape;
  filters.data = tensor_codes(filt_file, config.weight_quant(), s_w);

  const ConvMatrices m = conv_batch_to_matrices(layer, activations, filters);
  check_operands(config, m.inputs, m.weights);
  const int images = static_cast<int>(activations.shape[0]);

  const TiledSchedule schedule =
      tile_schedule(m.inputs, m.weights, config.array, {config.pack_images, config.effective_k_budget(), m.rows_per_image});
  MacArray array = build_array(config, config.array);
  const CalibrationConstants consts = obtain_constants(config, array, files.calibration);
  Execution run = execute_schedule(schedule, m.inputs, m.weights, array, execute_options(config, consts));

  // Reference from the direct convolution, one image at a time.
  const int pixels = layer.output_pixels();
  RealMatrix exact(m.inputs.rows(), layer.out_channels);
  const std::size_t image_size = activations.size() / static_cast<std::size_t>(std::max(images, 1));
  for (int n = 0; n < images; ++n) {
    IntTensor one({activations.shape[1], activations.shape[2], activations.shape[3]});
    std::copy_n(activations.data.begin() + static_cast<std::ptrdiff_t>(n * image_size), image_size, one.data.begin());
    const auto ref = oracle::conv_exact(layer, one, filters);
    for (int c = 0; c < layer.out_channels; ++c)
      for (int p = 0; p < pixels; ++p)
        exact(n * pixels + p, c) = static_cast<double>(ref(c, p / layer.out_width(), p % layer.out_width()));
  }

  Json dequant{{"mode", config.dequant}};
  if (config.dequant == "affine" && run.output.size() > 0) {
    const int fit_rows = std::min(images, config.dequant_fit_images) * pixels;
    const RealMatrix xs = run.output.topRows(fit_rows);
    const RealMatrix ys = exact.topRows(fit_rows);
    const AffineMap map = fit_affine({xs.data(), static_cast<std::size_t>(xs.size())},
                                     {ys.data(), static_cast<std::size_t>(ys.size())});
    run.output = (run.output.array() * map.gain + map.offset).matrix();
    dequant["gain"] = map.gain;
    dequant["offset"] = map.offset;
    dequant["fit_images"] = std::min(images, config.dequant_fit_images);
  }
  const ErrorStats err = error_stats(run.output, exact);

  const fs::path out(config.out_dir);
  write_json_file(out / "output.json", tensor_json(matrix_to_conv_output(layer, run.output * (s_in * s_w), images)));
  Json report = run_header("conv", config);
  report["layer"] = layer;
  report["images"] = images;
  report["pack_images"] = config.pack_images;
  report["scales"] = {{"input", s_in}, {"weight", s_w}};
  report["dequant"] = dequant;
  report["report"] = run.report;
  report["schedule"] = {{"tiles", schedule.tiles.size()},
                        {"k_budget", schedule.k_budget},
                        {"utilization", schedule.utilization()},
                        {"utilization_per_tile", schedule.utilization_per_tile()},
                        {"column_utilization", schedule.column_utilization()},
                        {"row_utilization", schedule.row_utilization()}};
  report["error_vs_oracle"] = err;
  write_json_file(out / "report.json", report);
  write_text_file(out / "report.csv", report_csv(run.report));
  write_json_file(out / "schedule.json", schedule);
  return Json{{"command", "conv"},
              {"out_dir", config.out_dir},
              {"utilization", schedule.utilization()},
              {"column_utilization", schedule.column_utilization()},
              {"error_vs_oracle", err}};
}

Json cmd_mult_surface(const ExperimentConfig& config) {
  constexpr int kCodes = 16;
  const DeviceParams& p = config.device;
  const int steps = config.surface_accumulations;
  MacArray array = build_array(config, {kCodes, kCodes});

  std::vector<int> inputs(kCodes);
  std::vector<int> units(kCodes);
  for (int i = 0; i < kCodes; ++i) {
    inputs[static_cast<std::size_t>(i)] = std::min(i, p.max_input_code());
    units[static_cast<std::size_t>(i)] = std::min(i, p.tail_units);
  }
  const int top = kCodes - 1;
  const int trace_row = top;
  const double mv = 1e3;

  std::ostringstream trace;
  trace << "step,units,input,v_out_mv,ideal_mv,drift_mv\n";
  array.precharge();
  for (int step = 1; step <= steps; ++step) {
    array.drive_cycle(inputs, units);
    for (int col : {0, top}) {
      const int in = inputs[static_cast<std::size_t>(trace_row)];
      const int n = units[static_cast<std::size_t>(col)];
      const double v = static_cast<double>(array.differential()(trace_row, col)) * mv;
      const double ideal = static_cast<double>(in) * n * step * p.value_unit() * mv;
      trace << step << ',' << n << ',' << in << ',' << num(v) << ',' << num(ideal) << ',' << num(v - ideal) << '\n';
    }
  }
  array.apply_noise(mix_seed(config.seed, 0x5AF));
  const Readout codes = array.readout();
  const RealMatrix diff = array.differential();

  std::ostringstream surface;
  surface << "input,units,ideal_mv,simulated_mv,abs_error_mv,rel_error_pct,adc_code\n";
  double max_abs = 0.0;
  double max_rel = 0.0;
  for (int i = 0; i < kCodes; ++i) {
    for (int j = 0; j < kCodes; ++j) {
      const int in = inputs[static_cast<std::size_t>(i)];
      const int n = units[static_cast<std::size_t>(j)];
      const double ideal = static_cast<double>(in) * n * steps * p.value_unit() * mv;
      const double sim = diff(i, j) * mv;
      const double abs_err = sim - ideal;
      max_abs = std::max(max_abs, std::abs(abs_err));
      surface << in << ',' << n << ',' << num(ideal) << ',' << num(sim) << ',' << num(abs_err) << ',';
      if (ideal != 0.0) {
        const double rel = abs_err / ideal * 100.0;
        max_rel = std::max(max_rel, std::abs(rel));
        surface << num(rel);
      }
      surface << ',' << codes.codes(i, j) << '\n';
    }
  }

  const fs::path out(config.out_dir);
  write_text_file(out / "surface.csv", surface.str());
  write_text_file(out / "trace.csv", trace.str());
  const Json summary{{"command", "mult-surface"},
                     {"accumulations", steps},
                     {"max_abs_error_mv", max_abs},
                     {"max_rel_error_pct", max_rel},
                     {"zero_weight_drift_mv", diff(trace_row, 0) * mv},
                     {"adc_saturations", codes.saturations},
                     {"seed", config.seed}};
  write_json_file(out / "surface.json", summary);
  return summary;
}

SweepAxis parse_sweep_axis(std::string_view s) {
  if (s == "sigma_im") return SweepAxis::kSigmaIm;
  if (s == "f_clk") return SweepAxis::kFClk;
  if (s == "dims" || s == "array_dims") return SweepAxis::kDims;
  if (s == "seed") return SweepAxis::kSeed;
  throw ConfigError("unknown sweep axis '" + std::string(s) + "' (sigma_im, f_clk, dims, seed)");
}

namespace {

ArrayDims parse_dims(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    const int r = std::stoi(s.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(s);
    const std::string rest = s.substr(x + 1);
    const int c = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    return {r, c};
  } catch (const std::logic_error&) {
    throw ConfigError("array dims must look like 16x16, got '" + s + "'");
  }
}

double parse_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("sweep value '" + s + "' is not a number");
  }
}

}  // namespace

Json cmd_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<std::string>& values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  static constexpr const char* kAxisNames[] = {"sigma_im", "f_clk", "dims", "seed"};

  std::ostringstream csv;
  csv << "axis,value,rows,cols,f_clk,sigma_im,seed,mac_ops,cycles,tiles,throughput_ops,peak_throughput_ops,"
         "avg_power_w,efficiency_ops_per_w,max_abs_error,rel_error,exact_checksum\n";
  Json points = Json::array();
  for (const std::string& v : values) {
    ExperimentConfig c = config;
    switch (axis) {
      case SweepAxis::kSigmaIm: c.mismatch.sigma_im = parse_number(v); break;
      case SweepAxis::kFClk: c.device.f_clk = parse_number(v); break;
      case SweepAxis::kDims: c.array = parse_dims(v); break;
      case SweepAxis::kSeed: {
        const double s = parse_number(v);
        if (s < 0 || s != std::floor(s)) throw ConfigError("seed values must be non-negative integers");
        c.seed = static_cast<std::uint64_t>(s);
        break;
      }
    }
    c.validate();

    const GemmShape& g = c.gemm;
    const QuantSpec in = c.input_quant();
    const IntMatrix a = random_codes(g.rows, g.k, in.qmin(), in.qmax(), mix_seed(g.data_seed, 0xA));
    const IntMatrix b = random_codes(g.k, g.cols, weight_floor(c), c.weight_quant().qmax(), mix_seed(g.data_seed, 0xB));
    const TiledSchedule schedule = tile_schedule(a, b, c.array, {false, c.effective_k_budget(), {}});
    MacArray array = build_array(c, c.array);
    const CalibrationConstants consts = obtain_constants(c, array, std::nullopt);
    const Execution run = execute_schedule(schedule, a, b, array, execute_options(c, consts));
    const WideMatrix exact = oracle::gemm_exact(a, b);
    const ErrorStats err = error_stats(run.output, exact.cast<double>());
    const double peak = peak_throughput(c.array, c.device.f_clk);

    csv << kAxisNames[static_cast<int>(axis)] << ',' << v << ',' << c.array.rows << ',' << c.array.cols << ','
        << num(c.device.f_clk) << ',' << num(c.mismatch.sigma_im) << ',' << c.seed << ',' << run.report.mac_ops << ','
        << run.report.cycles << ',' << run.report.tiles << ',' << num(run.report.throughput) << ',' << num(peak) << ','
        << num(run.report.avg_power) << ',' << num(run.report.efficiency) << ',' << num(err.max_abs) << ','
        << num(err.relative) << ',' << exact.sum() << '\n';
    points.push_back(Json{{"value", v}, {"throughput_ops", run.report.throughput}, {"rel_error", err.relative}});
  }
  write_text_file(fs::path(config.out_dir) / "sweep.csv", csv.str());
  return Json{{"command", "sweep"}, {"axis", kAxisNames[static_cast<int>(axis)]}, {"points", points}};
}

Json cmd_calibrate(const ExperimentConfig& config) {
  MacArray array = build_array(config, config.array);
  const CalibrationConstants consts = calibrate(array, {config.calibration_cycles, mix_seed(config.seed, 0xCA11B)});
  const RealMatrix injected = array.mismatch() / config.device.v_lsb;
  const double w_c = effective_weight_offset(config.device);

  const fs::path out(config.out_dir);
  write_json_file(out / "calibration.json", consts);
  std::ostringstream grid;
  write_grid_csv(grid, injected);
  write_text_file(out / "mismatch.csv", grid.str());
  return Json{{"command", "calibrate"},
              {"k_cal", consts.k_cal},
              {"max_i_m_error", (consts.i_m - injected).cwiseAbs().maxCoeff()},
              {"max_w_c_error", (consts.w_c.array() - w_c).abs().maxCoeff()}};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const HeadroomError*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 3;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return 3;
  return 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Behavioral simulator for a charge-steering compute-in-memory MAC array", "macdo"};
  app.require_subcommand(1);

  struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> correction;
  };
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--set", common.sets, "Override one config key, e.g. device.c_par=1e-15");
    sub->add_option("--seed", common.seed, "Master seed");
    sub->add_option("--out-dir", common.out_dir, "Directory for reports");
    sub->add_option("--correction", common.correction, "none | digital | digital+chop");
  };

  GemmFiles gemm_files;
  std::string a_path;
  std::string b_path;
  std::string gemm_cal;
  CLI::App* gemm = app.add_subcommand("gemm", "Tiled matrix product on the simulated array");
  add_common(gemm);
  gemm->add_option("--a", a_path, "Input codes, rows x K tensor file");
  gemm->add_option("--b", b_path, "Weight codes, K x cols tensor file");
  gemm->add_option("--calibration", gemm_cal, "Calibration constants from `macdo calibrate`");

  std::string layer_path;
  std::string act_path;
  std::string filt_path;
  std::string conv_cal;
  bool pack = false;
  CLI::App* conv = app.add_subcommand("conv", "Convolution layer lowered to tiled products");
  add_common(conv);
  conv->add_option("--layer", layer_path, "Layer spec JSON")->required();
  conv->add_option("--activations", act_path, "Activations [N, C, H, W] or [C, H, W]")->required();
  conv->add_option("--filters", filt_path, "Filters [M, C, k, k]")->required();
  conv->add_option("--calibration", conv_cal, "Calibration constants from `macdo calibrate`");
  conv->add_flag("--pack-images", pack, "Let row tiles span image boundaries");

  CLI::App* surface = app.add_subcommand("mult-surface", "All 16 x 16 input/weight products, repeated");
  add_common(surface);

  std::string axis;
  std::vector<std::string> values;
  CLI::App* sweep = app.add_subcommand("sweep", "Repeat a GEMM experiment along one axis");
  add_common(sweep);
  sweep->add_option("--axis", axis, "sigma_im | f_clk | dims | seed")->required();
  sweep->add_option("--values", values, "Comma-separated axis values")->required()->delimiter(',');

  CLI::App* cal = app.add_subcommand("calibrate", "Measure offset constants on the configured array");
  add_common(cal);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig config = load_config(common.config, common.sets);
    if (common.seed) config.seed = *common.seed;
    if (common.out_dir) config.out_dir = *common.out_dir;
    if (common.correction) config.correction = parse_correction_mode(*common.correction);
    if (pack) config.pack_images = true;
    config.validate();

    Json summary;
    auto opt_path = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<fs::path>(s); };
    if (*gemm) {
      summary = cmd_gemm(config, {opt_path(a_path), opt_path(b_path), opt_path(gemm_cal)});
    } else if (*conv) {
      summary = cmd_conv(config, {layer_path, act_path, filt_path, opt_path(conv_cal)});
    } else if (*surface) {
      summary = cmd_mult_surface(config);
    } else if (*sweep) {
      summary = cmd_sweep(config, parse_sweep_axis(axis), values);
    } else {
      summary = cmd_calibrate(config);
    }
    // The snapshot leaves out out_dir: it is where the file lives.
    Json snapshot = config;
    snapshot.erase("out_dir");
    write_json_file(fs::path(config.out_dir) / "config.json", snapshot);
    out << summary.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "macdo: error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace macdo
