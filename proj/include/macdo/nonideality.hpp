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

// Error sources injected into the array: per-cell input-referred offsets
// (with optional linear spatial drift and common-centroid replication) and
// the weight offset contributed by bit-line/bank parasitics.

#pragma once

#include "macdo/common.hpp"
#include "macdo/device.hpp"

#include <cstdint>
#include <iosfwd>

namespace macdo {

struct MismatchSpec {
  double sigma_im = 0.0;      // volts RMS, per physical cell
  int centroid_replicas = 1;  // 1 or 4
  double gradient_x = 0.0;    // volts per cell pitch along columns
  double gradient_y = 0.0;    // volts per cell pitch along rows
  std::uint64_t seed = 1;

  void validate() const;
};

/// R x C grid of input-referred offsets in volts. With 4 replicas each
/// logical cell averages four physical cells mirrored about both axes of a
/// 2R x 2C placement, which cancels any linear gradient.
RealMatrix sample_mismatch(int rows, int cols, const MismatchSpec& spec);

/// Parasitic tail capacitance in weight-code units: W_o = c_par / c_unit.
inline double weight_offset(const DeviceParams& p) { return p.c_par / p.c_unit; }

/// Total weight offset seen by the array, W_c = W_o + 2^(N-1).
inline double effective_weight_offset(const DeviceParams& p) { return weight_offset(p) + p.weight_shift(); }

/// Plain CSV, one grid row per line.
void write_grid_csv(std::ostream& os, const RealMatrix& grid);

}  // namespace macdo
