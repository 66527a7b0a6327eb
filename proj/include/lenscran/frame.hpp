// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>

namespace lenscran {

/// Frame timing in symbol periods: a power-probing stage T_a, a channel
/// training stage T_p and a data stage T_d, separated by guard intervals of
/// d_max symbols, so T_f = T_a + T_p + T_d + 2*d_max.
struct FrameConfig {
  int t_a = 0;
  int t_p = 0;
  int t_d = 0;
  int d_max = 0;
  int t_f = 0;

  /// Defaults for the single-carrier lens chain: T_a = N + d_max (same probing
  /// duration as one OFDM symbol for a fair comparison), T_p = K*(d_max+1),
  /// T_d filling the frame.
  static FrameConfig lens_defaults(int users, int d_max, int frame_len = 8280,
                                   int ofdm_subcarriers = 256) {
    FrameConfig f;
    f.d_max = d_max;
    f.t_a = ofdm_subcarriers + d_max;
    f.t_p = users * (d_max + 1);
    f.t_f = frame_len;
    f.t_d = f.t_f - f.t_a - f.t_p - 2 * d_max;
    return f;
  }

  void validate() const {
    if (t_a < d_max + 1) throw std::invalid_argument("frame.t_a: need T_a >= d_max + 1");
    if (t_p < 1 || t_d < 1) throw std::invalid_argument("frame.t_p/t_d: must be positive");
    if (t_f != t_a + t_p + t_d + 2 * d_max)
      throw std::invalid_argument("frame.t_f: T_f must equal T_a + T_p + T_d + 2*d_max");
  }

  /// Fraction of the frame left for data under estimated CSI.
  double overhead_prefactor() const {
    return 1.0 - static_cast<double>(t_a + t_p + 2 * d_max) / t_f;
  }
};

}  // namespace lenscran
