// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "lenscran/rates.hpp"

using namespace lenscran;

namespace {

DropResult make_result(int drop, double budget, Chain chain, Csi csi,
                       std::initializer_list<double> rates) {
  DropResult r;
  r.drop = drop;
  r.budget_gbps_per_sector = budget;
  r.chain = chain;
  r.csi = csi;
  r.rate_per_user = arma::vec(rates);
  r.sinr = arma::vec(rates);
  r.mean_antennas_per_rrh = 2.0;
  r.mean_streams_per_user = 1.0;
  return r;
}

}  // namespace

TEST_CASE("single drop aggregates to itself") {
  const auto rows =
      summarize({make_result(0, 2.0, Chain::lens, Csi::perfect, {1.0, 3.0})}, 99);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean_rate_bps_hz == doctest::Approx(2.0));
  CHECK(rows[0].stderr_rate == 0.0);
  CHECK(rows[0].drops == 1);
  CHECK(rows[0].seed == 99);
}

TEST_CASE("two drops average and spread") {
  const auto rows = summarize({make_result(0, 2.0, Chain::lens, Csi::perfect, {1.0}),
                               make_result(1, 2.0, Chain::lens, Csi::perfect, {3.0})},
                              1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean_rate_bps_hz == doctest::Approx(2.0));
  CHECK(rows[0].drops == 2);
  CHECK(rows[0].stderr_rate == doctest::Approx(1.0));  // std 1.4142 / sqrt(2)
}

TEST_CASE("aggregation is permutation invariant and ordered") {
  std::vector<DropResult> results;
  for (int d = 0; d < 4; ++d) {
    results.push_back(make_result(d, 8.0, Chain::lens, Csi::perfect, {1.0 + d}));
    results.push_back(make_result(d, 0.4, Chain::upa, Csi::estimated, {0.5 * d}));
    results.push_back(make_result(d, 0.4, Chain::lens, Csi::estimated, {2.0 * d}));
  }
  auto rows_a = summarize(results, 7);
  std::mt19937 shuffle_rng(3);
  std::shuffle(results.begin(), results.end(), shuffle_rng);
  auto rows_b = summarize(results, 7);
  REQUIRE(rows_a.size() == rows_b.size());
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    CHECK(rows_a[i].budget_gbps_per_sector == rows_b[i].budget_gbps_per_sector);
    CHECK(rows_a[i].chain == rows_b[i].chain);
    CHECK(rows_a[i].csi == rows_b[i].csi);
    CHECK(rows_a[i].mean_rate_bps_hz == doctest::Approx(rows_b[i].mean_rate_bps_hz));
  }
  // Ordered by budget ascending; infinity sorts last.
  CHECK(rows_a.front().budget_gbps_per_sector == 0.4);
  CHECK(rows_a.back().budget_gbps_per_sector == 8.0);
}

TEST_CASE("infinite budgets group separately and print as inf") {
  const double inf = std::numeric_limits<double>::infinity();
  const auto rows = summarize({make_result(0, inf, Chain::lens, Csi::perfect, {1.0}),
                               make_result(0, 8.0, Chain::lens, Csi::perfect, {2.0})},
                              1);
  REQUIRE(rows.size() == 2);
  CHECK(rows.back().budget_gbps_per_sector == inf);
  const std::string csv = results_csv(rows);
  CHECK(csv.find("inf,lens,perfect") != std::string::npos);
  CHECK(csv.rfind("budget_gbps_per_sector,mode,csi,mean_rate_bps_hz,stderr,"
                  "mean_antennas_per_rrh,mean_streams_per_user,drops,seed\n",
                  0) == 0);
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(summarize({}, 1), std::invalid_argument);
}
