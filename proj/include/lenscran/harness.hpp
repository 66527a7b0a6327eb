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

#include <cstdint>
#include <string>
#include <vector>

#include "lenscran/channel.hpp"
#include "lenscran/frame.hpp"
#include "lenscran/rates.hpp"
#include "lenscran/upa_ofdm.hpp"

namespace lenscran {

/// Full experiment description: scenario, framing, fronthaul sweep and modes.
/// An infinite sweep entry runs the unconstrained-fronthaul mode, realized as
/// `unconstrained_bits` bits on every antenna.
struct ExperimentSpec {
  ScenarioConfig scenario;
  OfdmConfig ofdm;
  FrameConfig frame;  // zero-initialized fields are filled from defaults
  std::vector<double> sweep_gbps = {0.4, 2.0, 4.0, 8.0, 20.0, 40.0, 60.0, 100.0, 200.0};
  int drops = 20;
  std::uint64_t seed = 1;
  bool run_lens = true;
  bool run_upa = true;
  bool run_perfect = true;
  bool run_estimated = true;
  double eta_db = 3.0;
  std::string out_dir = "out";
  bool dump_drops = false;
  int threads = 0;  // 0 = hardware concurrency
  int unconstrained_bits = 16;
  /// Minimum ADC resolution on a selected antenna under a finite budget; the
  /// quantization-noise model degrades below ~3 bits, so the allocator
  /// restricts its candidate set to the floor(budget/min_bits) strongest
  /// antennas before water-filling.
  int min_bits_per_antenna = 3;

  double eta_linear() const;
  /// Fronthaul budget in bits per complex sample per RRH for one sweep value
  /// (per-sector capacity times the sector count over the Nyquistired 2W).
  double budget_bits(double gbps_per_sector) const;
  /// Fills frame defaults, then validates every block; throws
  /// std::invalid_argument naming the offending field.
  void validate();
};

/// Per-drop evaluation over the whole sweep (exposed for tests; `run` drives
/// it from a drop worker pool).
struct DropEvaluation {
  std::vector<DropResult> results;
  std::string allocation_rows;
  std::string dump_text;
};

DropEvaluation evaluate_drop(const ExperimentSpec& spec, int drop_index);

struct RunOutput {
  std::vector<DropResult> results;
  std::vector<AggregateRow> table;
  std::string results_path;
  std::string allocations_path;
};

/// Runs the Monte-Carlo sweep, writes results.csv / allocations.csv (and
/// drops/*.txt when requested) under spec.out_dir, and prints a console
/// summary. Lens and UPA chains of one drop consume the identical channel
/// realization.
RunOutput run(const ExperimentSpec& spec);

}  // namespace lenscran
