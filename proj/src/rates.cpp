// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "lenscran/rates.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <tuple>

namespace lenscran {

const char* to_string(Chain c) { return c == Chain::lens ? "lens" : "upa"; }
const char* to_string(Csi c) { return c == Csi::perfect ? "perfect" : "estimated"; }

std::vector<AggregateRow> summarize(const std::vector<DropResult>& results,
                                    std::uint64_t seed) {
  if (results.empty()) throw std::invalid_argument("summarize: no drop results");
  using Key = std::tuple<double, int, int>;
  struct Acc {
    std::vector<double> drop_means;
    double rate_sum = 0.0;
    std::size_t rate_count = 0;
    double antennas = 0.0;
    double streams = 0.0;
  };
  std::map<Key, Acc> groups;
  for (const auto& r : results) {
    auto& acc = groups[{r.budget_gbps_per_sector, static_cast<int>(r.chain),
                        static_cast<int>(r.csi)}];
    acc.drop_means.push_back(arma::mean(r.rate_per_user));
    acc.rate_sum += arma::accu(r.rate_per_user);
    acc.rate_count += r.rate_per_user.n_elem;
    acc.antennas += r.mean_antennas_per_rrh;
    acc.streams += r.mean_streams_per_user;
  }

  std::vector<AggregateRow> rows;
  for (auto& [key, acc] : groups) {
    AggregateRow row;
    row.budget_gbps_per_sector = std::get<0>(key);
    row.chain = static_cast<Chain>(std::get<1>(key));
    row.csi = static_cast<Csi>(std::get<2>(key));
    row.drops = static_cast<int>(acc.drop_means.size());
    row.seed = seed;
    row.mean_rate_bps_hz = acc.rate_sum / acc.rate_count;
    if (row.drops > 1) {
      double mean = 0.0;
      for (double m : acc.drop_means) mean += m;
      mean /= row.drops;
      double var = 0.0;
      for (double m : acc.drop_means) var += (m - mean) * (m - mean);
      var /= (row.drops - 1);
      row.stderr_rate = std::sqrt(var / row.drops);
    }
    row.mean_antennas_per_rrh = acc.antennas / row.drops;
    row.mean_streams_per_user = acc.streams / row.drops;
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string format_budget(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string results_csv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "budget_gbps_per_sector,mode,csi,mean_rate_bps_hz,stderr,"
      "mean_antennas_per_rrh,mean_streams_per_user,drops,seed\n";
  char tail[64];
  for (const auto& r : rows) {
    out += format_budget(r.budget_gbps_per_sector);
    out += ',';
    out += to_string(r.chain);
    out += ',';
    out += to_string(r.csi);
    out += ',';
    out += format_value(r.mean_rate_bps_hz);
    out += ',';
    out += format_value(r.stderr_rate);
    out += ',';
    out += format_value(r.mean_antennas_per_rrh);
    out += ',';
    out += format_value(r.mean_streams_per_user);
    std::snprintf(tail, sizeof tail, ",%d,%" PRIu64 "\n", r.drops,
                  static_cast<std::uint64_t>(r.seed));
    out += tail;
  }
  return out;
}

}  // namespace lenscran
