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

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

namespace lenscran {

enum class Chain { lens, upa };
enum class Csi { perfect, estimated };

const char* to_string(Chain c);
const char* to_string(Csi c);

/// Outcome of one (drop, fronthaul budget, architecture, CSI mode) evaluation.
/// An unconstrained budget is recorded as +infinity Gbps/sector.
struct DropResult {
  int drop = 0;
  double budget_gbps_per_sector = 0.0;
  Chain chain = Chain::lens;
  Csi csi = Csi::perfect;
  arma::vec sinr;           // per user, linear
  arma::vec rate_per_user;  // bps/Hz, overhead prefactor applied
  double mean_antennas_per_rrh = 0.0;
  double mean_streams_per_user = 0.0;
};

struct AggregateRow {
  double budget_gbps_per_sector = 0.0;
  Chain chain = Chain::lens;
  Csi csi = Csi::perfect;
  double mean_rate_bps_hz = 0.0;  // mean per-user rate over drops and users
  double stderr_rate = 0.0;       // standard error of the per-drop mean
  double mean_antennas_per_rrh = 0.0;
  double mean_streams_per_user = 0.0;
  int drops = 0;
  std::uint64_t seed = 0;
};

/// Folds drop results into one row per (budget, chain, csi), ordered by
/// ascending budget then chain then CSI; permutation-invariant in the input.
/// Throws on empty input.
std::vector<AggregateRow> summarize(const std::vector<DropResult>& results, std::uint64_t seed);

/// results.csv serialization (schema-stable; used for byte-identity checks).
std::string results_csv(const std::vector<AggregateRow>& rows);

}  // namespace lenscran
