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

// The batch commands behind the `macdo` executable. Each one writes its
// reports under config.out_dir and returns a short JSON summary; failures
// are thrown and mapped to exit codes by run_cli.

#pragma once

#include "macdo/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace macdo {

struct ErrorStats {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double rms = 0.0;
  double relative = 0.0;  // ||sim - exact||_F / ||exact||_F, 0 when exact is 0
  std::int64_t elements = 0;
};

ErrorStats error_stats(const RealMatrix& simulated, const RealMatrix& exact);
void to_json(Json& j, const ErrorStats& s);

/// Uniform integer matrix in [lo, hi], deterministic per seed.
IntMatrix random_codes(int rows, int cols, int lo, int hi, std::uint64_t seed);

/// Array with the configured mismatch sampled onto it.
MacArray build_array(const ExperimentConfig& config, ArrayDims dims);

/// Calibration constants for `array`: loaded from `path` when given,
/// measured on the array otherwise.
CalibrationConstants obtain_constants(const ExperimentConfig& config, MacArray& array,
                                      const std::optional<std::filesystem::path>& path);

struct GemmFiles {
  std::optional<std::filesystem::path> a;  // rows x K input codes
  std::optional<std::filesystem::path> b;  // K x cols weight codes
  std::optional<std::filesystem::path> calibration;
};

/// output.json, report.json, report.csv.
Json cmd_gemm(const ExperimentConfig& config, const GemmFiles& files);

struct ConvFiles {
  std::filesystem::path layer;
  std::filesystem::path activations;  // [C, H, W] or [N, C, H, W]
  std::filesystem::path filters;      // [M, C, k, k]
  std::optional<std::filesystem::path> calibration;
};

/// output.json, report.json, report.csv, schedule.json.
Json cmd_conv(const ExperimentConfig& config, const ConvFiles& files);

/// surface.csv (one line per (I, n) pair), trace.csv (per-step drift of
/// the n = 0 and n = max columns), surface.json (summary).
Json cmd_mult_surface(const ExperimentConfig& config);

enum class SweepAxis { kSigmaIm, kFClk, kDims, kSeed };
SweepAxis parse_sweep_axis(std::string_view s);

/// sweep.csv, one line per axis value.
Json cmd_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<std::string>& values);

/// calibration.json and mismatch.csv (injected I_m, input-code units).
Json cmd_calibrate(const ExperimentConfig& config);

/// 0 ok, 1 usage/config, 2 headroom, 3 I/O.
int exit_code_for(const std::exception& e);

/// Full command line entry point; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace macdo
