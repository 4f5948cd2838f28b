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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "macdo/correction.hpp"
#include "macdo/nonideality.hpp"
#include "macdo/serialize.hpp"

#include <cmath>
#include <random>

using namespace macdo;

TEST_CASE("mode names") {
  CHECK(parse_correction_mode("none") == CorrectionMode::kNone);
  CHECK(parse_correction_mode("digital") == CorrectionMode::kDigital);
  CHECK(parse_correction_mode("digital+chop") == CorrectionMode::kDigitalChop);
  CHECK(parse_correction_mode("chop") == CorrectionMode::kDigitalChop);
  CHECK_THROWS_AS(parse_correction_mode("analog"), ConfigError);
  CHECK(to_string(CorrectionMode::kDigitalChop) == "digital+chop");
}

TEST_CASE("digital correction worked example") {
  // I = [1, 2], W = [3, -1], I_m = 0.1, W_c = 8.
  const double raw = (1 + 0.1) * (3 + 8) + (2 + 0.1) * (-1 + 8);
  CHECK(raw == doctest::Approx(26.8).epsilon(1e-12));
  CHECK(digital_correct(raw, 3, 2, 0.1, 8.0, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chopping worked example") {
  // I = 3, W = 2, I_m = 0.1, W_c = 8.
  const double out = (3 + 0.1) * (2 + 8);
  const double out_neg = (-3 + 0.1) * (-2 + 8);
  CHECK(out == doctest::Approx(31.0));
  CHECK(out_neg == doctest::Approx(-17.4));
  CHECK(out + out_neg == doctest::Approx(13.6));
  CHECK(chop_correct(out, out_neg, 0.1, 8.0, 1) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(chop_correct(out + out_neg, 0.8, 1) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("digital correction removes injected offsets exactly") {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<int> in_d(-15, 15);
  std::uniform_int_distribution<int> w_d(-8, 7);
  std::uniform_real_distribution<double> im_d(-0.5, 0.5);
  std::uniform_real_distribution<double> wc_d(7.5, 9.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 150;
    const double i_m = im_d(gen);
    const double w_c = wc_d(gen);
    double raw = 0.0;
    long exact = 0;
    long si = 0;
    long sw = 0;
    for (int t = 0; t < k; ++t) {
      const int i = in_d(gen);
      const int w = w_d(gen);
      raw += (i + i_m) * (w + w_c);
      exact += i * w;
      si += i;
      sw += w;
    }
    CHECK(std::abs(digital_correct(raw, si, sw, i_m, w_c, k) - exact) <=
          1e-9 * std::max(1.0, std::abs(static_cast<double>(exact))));
  }
}

TEST_CASE("correct_tile per mode") {
  CalibrationConstants c = CalibrationConstants::nominal({2, 2}, DeviceParams{});
  c.i_m(1, 1) = 0.2;
  c.im_wc = c.i_m * 8.25;
  RealMatrix raw(2, 2);
  raw << 100, 200, 300, 400;
  IntVector si(2);
  si << 10, 20;
  IntVector sw(2);
  sw << 3, 4;

  const RealMatrix none = correct_tile(raw, si, sw, 5, CorrectionMode::kNone, c, 8);
  CHECK(none(0, 0) == doctest::Approx(20.0));
  CHECK(none(1, 1) == doctest::Approx(240.0));

  const RealMatrix dig = correct_tile(raw, si, sw, 5, CorrectionMode::kDigital, c, 8);
  CHECK(dig(0, 0) == doctest::Approx(100 - 8.25 * 10));
  CHECK(dig(1, 1) == doctest::Approx(400 - 0.2 * 4 - 8.25 * 20 - 5 * 0.2 * 8.25));

  const RealMatrix chop = correct_tile(raw, si, sw, 5, CorrectionMode::kDigitalChop, c, 8);
  CHECK(chop(0, 1) == doctest::Approx(100.0));
  CHECK(chop(1, 1) == doctest::Approx((400 - 10 * 0.2 * 8.25) / 2));

  CHECK_THROWS_AS(correct_tile(raw, si.head(1), sw, 5, CorrectionMode::kNone, c, 8), ShapeError);
  const CalibrationConstants small = CalibrationConstants::nominal({1, 1}, DeviceParams{});
  CHECK_THROWS_AS(correct_tile(raw, si, sw, 5, CorrectionMode::kDigital, small, 8), ShapeError);
}

TEST_CASE("calibration of an offset-free array") {
  DeviceParams p = DeviceParams::ideal();
  MacArray ideal({4, 4}, p);
  const CalibrationConstants c = calibrate(ideal);
  CHECK(c.i_m.cwiseAbs().maxCoeff() < 1e-9);
  CHECK((c.w_c.array() - 8.0).abs().maxCoeff() < 1e-9);
  CHECK(c.k_cal == 64);

  p.c_par = 2e-15;
  MacArray parasitic({4, 4}, p);
  CHECK((calibrate(parasitic).w_c.array() - 8.25).abs().maxCoeff() < 1e-9);
}

TEST_CASE("calibration recovers injected offsets without noise") {
  DeviceParams p;
  p.sigma_cell_noise = 0.0;
  MismatchSpec s;
  s.sigma_im = 0.4 * p.v_lsb;
  s.seed = 3;
  MacArray array({16, 16}, p, sample_mismatch(16, 16, s));
  const CalibrationConstants c = calibrate(array, {32, 0});
  const RealMatrix injected = array.mismatch() / p.v_lsb;
  CHECK((c.i_m - injected).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((c.w_c.array() - 8.25).abs().maxCoeff() < 1e-6);
  CHECK((c.im_wc - injected * 8.25).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("calibration error under cell noise matches the noise budget") {
  const DeviceParams p;
  MacArray array({16, 16}, p);
  const CalibrationConstants c = calibrate(array, {64, 99});
  // One noise draw per node per tile: the per-cycle estimate of a and b has
  // sigma sqrt(2) * sigma_cell / (value_unit * K).
  const double per_cycle = std::sqrt(2.0) * p.sigma_cell_noise / (p.value_unit() * 64);
  const double im_rms = std::sqrt(c.i_m.squaredNorm() / 256.0);
  const double wc_rms = std::sqrt((c.w_c.array() - 8.25).square().mean());
  CHECK(im_rms < 1.5 * per_cycle / 9.25);
  CHECK(wc_rms < 1.5 * std::sqrt(2.0) * per_cycle / 4.0);
}

TEST_CASE("calibration rejects an empty protocol") {
  MacArray array({2, 2}, DeviceParams{});
  CHECK_THROWS_AS(calibrate(array, {0, 0}), CalibrationError);
}

TEST_CASE("constants survive a JSON round trip") {
  DeviceParams p;
  p.sigma_cell_noise = 0.0;
  MismatchSpec s;
  s.sigma_im = 5e-6;
  MacArray array({3, 5}, p, sample_mismatch(3, 5, s));
  const CalibrationConstants c = calibrate(array, {16, 0});
  const Json j = c;
  const CalibrationConstants back = j.get<CalibrationConstants>();
  CHECK(back.i_m == c.i_m);
  CHECK(back.w_c == c.w_c);
  CHECK((back.im_wc - c.im_wc).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.k_cal == 16);
  Json broken = j;
  broken["extra"] = 1;
  CHECK_THROWS_AS(broken.get<CalibrationConstants>(), ConfigError);
}
