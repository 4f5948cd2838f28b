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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference values are computed here independently of the
// library (oracle module, closed forms, or literal constants).

#include "macdo/array.hpp"
#include "macdo/commands.hpp"
#include "macdo/correction.hpp"
#include "macdo/mapper.hpp"
#include "macdo/metrics.hpp"
#include "macdo/nonideality.hpp"
#include "macdo/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace macdo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

IntMatrix random_matrix(int rows, int cols, int lo, int hi, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(gen);
  return m;
}

// max|a - b| relative to max(1, max|b|).
double matrix_rel_error(const RealMatrix& a, const RealMatrix& b) {
  if (b.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

// Two-sided exact sign test p-value for `wins` successes in `n` trials.
double sign_test_p(int wins, int n) {
  const int k = std::max(wins, n - wins);
  double tail = 0.0;
  for (int i = k; i <= n; ++i)
    tail += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * std::log(2.0));
  return std::min(1.0, 2.0 * tail);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 1. Gain law for every weight code.
Outcome gain_law() {
  const DeviceParams p;
  double worst = 0.0;
  for (int n = 0; n <= p.tail_units; ++n) {
    const long double ref = 2.0L * (n * 8e-15L + 2e-15L) / 100e-15L;
    const double got = compute_gain<double>(make_bank(n, p), p);
    worst = std::max(worst, static_cast<double>(std::abs((got - ref) / ref)));
  }
  return {worst <= 1e-12, fmt("max relative error %.2e over 16 codes (tol 1e-12)", worst)};
}

// 2. 150 full-scale MACs and the 201st.
Outcome accumulation_headline() {
  const DeviceParams p;
  CellState<double> c = precharge<double>(p);
  const WeightBankState bank = make_bank(15, p);
  const double v_in = dac_convert<double>(15, p);
  for (int i = 0; i < 150; ++i) c = mac_step<double>(c, v_in, bank, p);
  const double raw = c.v_out();
  // Remove the parasitic share I * W_o per step to isolate the signal path.
  const double parasitic = 150.0 * 15.0 * (p.c_par / p.c_unit) * p.value_unit();
  const double signal = raw - parasitic;
  const bool signal_ok = std::abs(signal - 0.2025) <= 1e-12 * 0.2025;

  for (int i = 150; i < 200; ++i) c = mac_step<double>(c, v_in, bank, p);
  bool threw = false;
  try {
    mac_step<double>(c, v_in, bank, p);
  } catch (const HeadroomError&) {
    threw = true;
  }
  return {signal_ok && raw >= 0.2 && threw,
          fmt("signal %.6f mV (want 202.5), stored swing %.6f mV >= 200 mV, 201st MAC %s", signal * 1e3, raw * 1e3,
              threw ? "raised HeadroomError" : "did not raise")};
}

// 3. Ideal array equals the exact product.
Outcome oracle_equivalence() {
  const DeviceParams p = DeviceParams::ideal();
  MacArray array({16, 16}, p);
  std::mt19937_64 gen(0xC3);
  std::uniform_int_distribution<int> dim(1, 16);
  std::uniform_int_distribution<int> depth(1, 150);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = dim(gen);
    const int n = dim(gen);
    const int k = depth(gen);
    const IntMatrix a = random_matrix(m, k, -15, 15, gen);
    const IntMatrix b = random_matrix(k, n, -8, 7, gen);
    const Execution run = execute_schedule(tile_schedule(a, b, {16, 16}), a, b, array, {});
    worst = std::max(worst, matrix_rel_error(run.output, oracle::gemm_exact(a, b).cast<double>()));
  }
  return {worst <= 1e-9, fmt("1000 GEMMs, max relative error %.2e (tol 1e-9)", worst)};
}

// Runs one sequence through a single long-double cell with the given offsets.
long double cell_run(const std::vector<int>& in, const std::vector<int>& w, long double i_m, double c_par,
                     int tail_units = 15) {
  DeviceParams p = DeviceParams::ideal();
  p.c_par = c_par;
  p.tail_units = tail_units;
  RealMatrix mm(1, 1);
  mm(0, 0) = static_cast<double>(i_m) * p.v_lsb;
  BasicMacArray<long double> cell({1, 1}, p, mm);
  IntMatrix a(1, static_cast<Eigen::Index>(in.size()));
  IntMatrix b(static_cast<Eigen::Index>(w.size()), 1);
  for (std::size_t t = 0; t < in.size(); ++t) {
    a(0, static_cast<Eigen::Index>(t)) = in[t];
    b(static_cast<Eigen::Index>(t), 0) = w[t];
  }
  run_gemm_tile(cell, a, b);
  return cell.differential()(0, 0) / static_cast<long double>(p.value_unit());
}

// 4. Digital correction with exact constants.
Outcome digital_identity() {
  std::mt19937_64 gen(0xD4);
  std::uniform_int_distribution<int> in_d(-15, 15);
  std::uniform_int_distribution<int> w_d(-8, 7);
  std::uniform_int_distribution<int> k_d(1, 150);
  std::uniform_real_distribution<double> im_d(-0.5, 0.5);
  std::uniform_real_distribution<double> wo_d(0.0, 0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = k_d(gen);
    std::vector<int> in(static_cast<std::size_t>(k));
    std::vector<int> w(static_cast<std::size_t>(k));
    long exact = 0;
    long si = 0;
    long sw = 0;
    for (int t = 0; t < k; ++t) {
      in[static_cast<std::size_t>(t)] = in_d(gen);
      w[static_cast<std::size_t>(t)] = w_d(gen);
      exact += in[static_cast<std::size_t>(t)] * w[static_cast<std::size_t>(t)];
      si += in[static_cast<std::size_t>(t)];
      sw += w[static_cast<std::size_t>(t)];
    }
    const double i_m = im_d(gen);
    const double w_o = wo_d(gen);
    const double c_par = w_o * 8e-15;
    // The array adds the 2^(N-1) shift to every weight code.
    const long double raw = cell_run(in, w, i_m, c_par);
    const double w_c = c_par / 8e-15 + 8.0;
    const double corrected = digital_correct(static_cast<double>(raw), si, sw, i_m, w_c, k);
    worst = std::max(worst, std::abs(corrected - exact) / std::max(1.0, std::abs(static_cast<double>(exact))));
  }
  // Worked example: I = [1, 2], W = [3, -1] with I_m = 0.1, W_c = 8.
  const long double ex_raw = cell_run({1, 2}, {3, -1}, 0.1L, 0.0);
  const double ex = digital_correct(static_cast<double>(ex_raw), 3, 2, 0.1, 8.0, 2);
  const bool example = std::abs(static_cast<double>(ex_raw) - 26.8) <= 1e-9 * 26.8 && std::abs(ex - 1.0) <= 1e-9;
  return {worst <= 1e-9 && example,
          fmt("1000 sequences, max relative error %.2e (tol 1e-9); example %.9f -> %.9f", worst,
              static_cast<double>(ex_raw), ex)};
}

// 5. Chopping pair identity over every (I, W) code pair.
Outcome chopping_identity() {
  // A 16-unit bank so that W = -8 has a negated twin (-W + 8 = 16 units).
  DeviceParams base = DeviceParams::ideal();
  base.tail_units = 16;
  const int shift = base.weight_shift();
  std::mt19937_64 gen(0xC5);
  std::uniform_real_distribution<double> im_d(-0.5, 0.5);
  std::uniform_real_distribution<double> wo_d(0.0, 0.5);
  double worst = 0.0;
  long pairs = 0;
  for (int trial = 0; trial < 100; ++trial) {
    DeviceParams p = base;
    const long double i_m = im_d(gen);
    p.c_par = wo_d(gen) * p.c_unit;
    const long double w_c = static_cast<long double>(p.c_par) / p.c_unit + shift;
    const long double unit = p.value_unit();
    for (int i = -15; i <= 15; ++i) {
      for (int w = -8; w <= 7; ++w) {
        const long double off = i_m * p.v_lsb;
        CellState<long double> c = precharge<long double>(p);
        c = mac_step<long double>(c, dac_convert<long double>(i, p) + off, make_bank(w + shift, p), p);
        c = mac_step<long double>(c, dac_convert<long double>(-i, p) + off, make_bank(-w + shift, p), p);
        const long double sum = c.v_out() / unit;
        const long double ref = 2.0L * (i * w + i_m * w_c);
        worst = std::max(worst, static_cast<double>(std::abs(sum - ref) / std::max(1.0L, std::abs(ref))));
        ++pairs;
      }
    }
  }
  // Worked example: I = 3, W = 2, I_m = 0.1, W_c = 8.
  const long double out = cell_run({3}, {2}, 0.1L, 0.0);
  const long double out_neg = cell_run({-3}, {-2}, 0.1L, 0.0);
  const double fixed = chop_correct(static_cast<double>(out), static_cast<double>(out_neg), 0.1, 8.0, 1);
  const bool example = std::abs(static_cast<double>(out + out_neg) - 13.6) <= 1e-12 * 13.6 &&
                       std::abs(fixed - 6.0) <= 1e-12 * 6.0;
  return {worst <= 1e-12 && example,
          fmt("%ld pairs x offsets, max relative error %.2e (tol 1e-12); example %.12f -> %.12f", pairs, worst,
              static_cast<double>(out + out_neg), fixed)};
}

// 6. Monte Carlo ordering of the correction modes.
Outcome correction_ordering() {
  constexpr int kTrials = 200;
  constexpr int kK = 64;
  constexpr double kAlpha = 0.01;
  const DeviceParams p;  // cell noise and parasitic on
  std::vector<double> err[3];
  int none_worse = 0;
  int digital_worse = 0;
  for (int t = 0; t < kTrials; ++t) {
    std::mt19937_64 gen(mix_seed(0xC6, static_cast<std::uint64_t>(t)));
    const IntMatrix a = random_matrix(16, kK, -15, 15, gen);
    const IntMatrix b = random_matrix(kK, 16, -7, 7, gen);
    const RealMatrix exact = oracle::gemm_exact(a, b).cast<double>();
    MismatchSpec ms;
    ms.sigma_im = 0.2 * p.v_lsb;
    ms.seed = mix_seed(0x316, static_cast<std::uint64_t>(t));
    MacArray array({16, 16}, p, sample_mismatch(16, 16, ms));
    const CalibrationConstants consts = calibrate(array, {64, mix_seed(0xCA1, static_cast<std::uint64_t>(t))});
    const TiledSchedule schedule = tile_schedule(a, b, {16, 16}, {false, 100, {}});
    const CorrectionMode modes[3] = {CorrectionMode::kNone, CorrectionMode::kDigital, CorrectionMode::kDigitalChop};
    for (int m = 0; m < 3; ++m) {
      ExecuteOptions o;
      o.correction = modes[m];
      o.constants = &consts;
      o.seed = mix_seed(0x5EED, static_cast<std::uint64_t>(t));
      const Execution run = execute_schedule(schedule, a, b, array, o);
      err[m].push_back((run.output - exact).norm() / exact.norm());
    }
    none_worse += err[0].back() > err[1].back() ? 1 : 0;
    digital_worse += err[1].back() > err[2].back() ? 1 : 0;
  }
  const double m0 = median(err[0]);
  const double m1 = median(err[1]);
  const double m2 = median(err[2]);
  const double p01 = sign_test_p(none_worse, kTrials);
  const double p12 = sign_test_p(digital_worse, kTrials);
  const bool ok = m0 > m1 && m1 > m2 && none_worse > kTrials / 2 && digital_worse > kTrials / 2 && p01 < kAlpha &&
                  p12 < kAlpha;
  return {ok, fmt("%d trials, median rel error none %.4f > digital %.4f > digital+chop %.4f; "
                  "sign test wins %d/%d (p=%.1e), %d/%d (p=%.1e), alpha %.2f",
                  kTrials, m0, m1, m2, none_worse, kTrials, p01, digital_worse, kTrials, p12, kAlpha)};
}

// 7. Lowering + exact product equals direct convolution.
Outcome conv_lowering() {
  std::mt19937_64 gen(0xC7);
  std::uniform_int_distribution<int> ch(1, 6);
  std::uniform_int_distribution<int> ker(1, 5);
  std::uniform_int_distribution<int> extra(0, 10);
  std::uniform_int_distribution<int> stride(1, 3);
  std::uniform_int_distribution<int> pad(0, 2);
  long mismatches = 0;
  long checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    ConvLayerSpec l;
    l.in_channels = ch(gen);
    l.kernel = ker(gen);
    l.height = l.kernel + extra(gen);
    l.width = l.kernel + extra(gen);
    l.out_channels = ch(gen);
    l.stride = stride(gen);
    l.padding = pad(gen);
    IntTensor act({std::size_t(l.in_channels), std::size_t(l.height), std::size_t(l.width)});
    IntTensor filt({std::size_t(l.out_channels), std::size_t(l.in_channels), std::size_t(l.kernel),
                    std::size_t(l.kernel)});
    std::uniform_int_distribution<int> in_d(-15, 15);
    std::uniform_int_distribution<int> w_d(-8, 7);
    for (auto& v : act.data) v = in_d(gen);
    for (auto& v : filt.data) v = w_d(gen);
    const ConvMatrices m = conv_to_matrices(l, act, filt);
    const WideMatrix prod = oracle::gemm_exact(m.inputs, m.weights);
    const auto ref = oracle::conv_exact(l, act, filt);
    for (int c = 0; c < l.out_channels; ++c) {
      for (int y = 0; y < l.out_height(); ++y) {
        for (int x = 0; x < l.out_width(); ++x) {
          mismatches += prod(y * l.out_width() + x, c) != ref(c, y, x) ? 1 : 0;
          ++checked;
        }
      }
    }
  }
  return {mismatches == 0, fmt("500 layers, %ld outputs compared, %ld mismatches", checked, mismatches)};
}

Execution run_layer(const ConvLayerSpec& l, int images, bool pack, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> in_d(-15, 15);
  std::uniform_int_distribution<int> w_d(-8, 7);
  IntTensor act({std::size_t(images), std::size_t(l.in_channels), std::size_t(l.height), std::size_t(l.width)});
  IntTensor filt({std::size_t(l.out_channels), std::size_t(l.in_channels), std::size_t(l.kernel), std::size_t(l.kernel)});
  for (auto& v : act.data) v = in_d(gen);
  for (auto& v : filt.data) v = w_d(gen);
  const ConvMatrices m = conv_batch_to_matrices(l, act, filt);
  const TiledSchedule s = tile_schedule(m.inputs, m.weights, {16, 16}, {pack, 200, m.rows_per_image});
  MacArray array({16, 16}, DeviceParams::ideal());
  return execute_schedule(s, m.inputs, m.weights, array, {});
}

// 8. Utilization of the small first layer and the packed third layer.
Outcome utilization() {
  const Execution c1 = run_layer({1, 32, 32, 5, 6, 1, 0}, 32, false, 1);
  const Execution c3 = run_layer({6, 14, 14, 5, 16, 1, 0}, 32, true, 2);
  const bool ok = c1.report.column_utilization == 6.0 / 16.0 && c3.report.utilization == 1.0;
  return {ok, fmt("C1 column utilization %.6f (want 0.375), C3 packed utilization %.6f (want 1), batch 32",
                  c1.report.column_utilization, c3.report.utilization)};
}

// 9. Efficiency arithmetic.
Outcome efficiency_arithmetic() {
  const double ops = peak_throughput({16, 16}, 12.5e6);
  const double eff = efficiency(ops, 53.0e-6) / 1e12;
  const bool rounds = std::abs(std::round(eff * 10.0) / 10.0 - 120.8) < 1e-9;
  const double dev = std::abs(eff / 120.96 - 1.0);
  return {ops == 6.4e9 && rounds && dev <= 0.01,
          fmt("%.4f TOPS/W from %.3g OPS at 53.0 uW; %.2f%% from 120.96 (tol 1%%)", eff, ops, dev * 100)};
}

// 10. Scale-up to 256 x 512.
Outcome scaling() {
  MacArray array({16, 16}, DeviceParams::ideal());
  const TileResult tile = run_gemm_tile(array, IntMatrix::Ones(16, 150), IntMatrix::Ones(150, 16));
  RunReport base;
  base.mac_ops = 16 * 16 * 150;
  finalize_report(base, tile.events, array.params());
  const RunReport big = scale_estimate(base, {16, 16}, {256, 512}, PowerFractions::fitted_c3());

  const double tops = big.throughput / 1e12;
  const double ratio = big.throughput / base.throughput;
  const double mw = big.avg_power * 1e3;
  const double eff = big.efficiency / 1e12;
  const auto within = [](double got, double want) { return std::abs(got / want - 1.0) <= 0.01; };
  const bool ok = std::abs(tops - 3.2768) <= 1e-12 * 3.2768 && ratio == 512.0 && within(tops, 3.26) &&
                  within(ratio, 509.4) && within(mw, 17.46) && within(eff, 186.7);
  return {ok, fmt("%.4f TOPS (x%.1f), base %.2f uW -> %.3f mW, %.1f TOPS/W with fitted fractions "
                  "(targets 3.26 TOPS, x509.4, 17.46 mW, 186.7 TOPS/W, tol 1%%; config-dependent)",
                  tops, ratio, base.avg_power * 1e6, mw, eff)};
}

// 11. Noise relative to the accumulated result.
Outcome noise_bound() {
  const DeviceParams p;
  CellState<double> c = precharge<double>(p);
  const WeightBankState bank = make_bank(15, p);
  for (int i = 0; i < 150; ++i) c = mac_step<double>(c, dac_convert<double>(15, p), bank, p);
  const double result = c.v_out();
  // Measure the per-node 1-sigma the model injects.
  const int n = 20000;
  double sq = 0.0;
  for (int s = 0; s < n; ++s) {
    const double d = apply_noise(c, p, mix_seed(0xB11, static_cast<std::uint64_t>(s))).v_q - c.v_q;
    sq += d * d;
  }
  const double measured = std::sqrt(sq / n);
  const double rel = p.sigma_cell_noise / result * 100.0;
  const double rel_nominal = p.sigma_cell_noise / 0.2025 * 100.0;
  const bool ok = rel <= 0.13 && std::abs(measured / p.sigma_cell_noise - 1.0) <= 0.03;
  return {ok, fmt("sigma %.1f uV (measured %.1f uV) on %.3f mV = %.4f%% <= 0.13%%; on 202.5 mV %.4f%% (%.2f%%)",
                  p.sigma_cell_noise * 1e6, measured * 1e6, result * 1e3, rel, rel_nominal, rel_nominal)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// 12. Every command twice with the same config and seed.
Outcome determinism() {
  const fs::path root = "acceptance_determinism";
  fs::remove_all(root);
  ExperimentConfig cfg;
  cfg.mismatch.sigma_im = 7.5e-6;
  cfg.correction = CorrectionMode::kDigital;
  cfg.seed = 42;
  fs::create_directories(root / "in");
  write_json_file(root / "config.json", cfg);
  // A small conv input set.
  const ConvLayerSpec layer{2, 6, 6, 3, 4, 1, 1};
  std::mt19937_64 gen(12);
  IntTensor act({2, 2, 6, 6});
  IntTensor filt({4, 2, 3, 3});
  std::uniform_int_distribution<int> in_d(-15, 15);
  std::uniform_int_distribution<int> w_d(-8, 7);
  for (auto& v : act.data) v = in_d(gen);
  for (auto& v : filt.data) v = w_d(gen);
  write_json_file(root / "in" / "layer.json", layer);
  write_json_file(root / "in" / "act.json", tensor_json(act));
  write_json_file(root / "in" / "filt.json", tensor_json(filt));

  const std::string config = (root / "config.json").string();
  const std::vector<std::vector<std::string>> commands = {
      {"gemm"},
      {"conv", "--layer", (root / "in" / "layer.json").string(), "--activations", (root / "in" / "act.json").string(),
       "--filters", (root / "in" / "filt.json").string()},
      {"mult-surface"},
      {"sweep", "--axis", "seed", "--values", "1,2"},
      {"calibrate"}};
  int files = 0;
  int differ = 0;
  int failures = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    fs::path dirs[2];
    for (int rep = 0; rep < 2; ++rep) {
      dirs[rep] = root / (commands[c][0] + "_" + std::to_string(rep));
      std::vector<std::string> args = {"macdo"};
      args.insert(args.end(), commands[c].begin(), commands[c].end());
      for (const std::string& s : {std::string("--config"), config, std::string("--seed"), std::string("42"),
                                   std::string("--out-dir"), dirs[rep].string()})
        args.push_back(s);
      std::vector<const char*> argv;
      for (const auto& s : args) argv.push_back(s.c_str());
      std::ostringstream out;
      std::ostringstream err;
      failures += run_cli(static_cast<int>(argv.size()), argv.data(), out, err) != 0 ? 1 : 0;
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const auto ext = entry.path().extension();
      if (ext != ".json" && ext != ".csv") continue;
      ++files;
      differ += slurp(entry.path()) != slurp(dirs[1] / entry.path().filename()) ? 1 : 0;
    }
  }
  return {failures == 0 && differ == 0 && files > 0,
          fmt("5 commands run twice, %d report files compared, %d differ, %d command failures", files, differ,
              failures)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: no runtime limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "gain law", 1.0, gain_law},
      {2, "accumulation headline", 1.0, accumulation_headline},
      {3, "oracle equivalence (ideal)", 30.0, oracle_equivalence},
      {4, "digital correction identity", 10.0, digital_identity},
      {5, "chopping identity", 10.0, chopping_identity},
      {6, "correction ordering", 0.0, correction_ordering},
      {7, "conv lowering", 60.0, conv_lowering},
      {8, "utilization", 0.0, utilization},
      {9, "efficiency arithmetic", 1.0, efficiency_arithmetic},
      {10, "scaling", 0.0, scaling},
      {11, "noise bound", 1.0, noise_bound},
      {12, "determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_s <= 0.0 || secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::string timing = fmt("%.2fs", secs);
    if (c.limit_s > 0.0) timing += fmt(" < %.0fs", c.limit_s) + (in_time ? "" : " EXCEEDED");
    std::printf("%s %2d %s: %s [%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
