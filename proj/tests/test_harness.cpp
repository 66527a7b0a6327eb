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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lenscran/harness.hpp"

using namespace lenscran;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.sweep_gbps = {0.4};
  spec.drops = 1;
  spec.seed = 2026;
  spec.out_dir = "test_harness_out";
  return spec;
}

}  // namespace

TEST_CASE("budget bits arithmetic") {
  ExperimentSpec spec;
  CHECK(spec.budget_bits(0.4) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(spec.budget_bits(8.0) == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(spec.budget_bits(200.0) == doctest::Approx(1500.0).epsilon(1e-12));
}

TEST_CASE("spec validation reports field paths") {
  ExperimentSpec spec;
  spec.drops = 0;
  CHECK_THROWS_WITH_AS(spec.validate(), "drops: must be >= 1", std::invalid_argument);

  ExperimentSpec spec2;
  spec2.sweep_gbps = {0.05};  // 0.375 bits per RRH
  CHECK_THROWS_AS(spec2.validate(), std::invalid_argument);

  ExperimentSpec spec3;
  spec3.run_lens = spec3.run_upa = false;
  CHECK_THROWS_AS(spec3.validate(), std::invalid_argument);

  ExperimentSpec ok;
  ok.validate();
  CHECK(ok.frame.t_f == 8280);
  CHECK(ok.frame.t_a == 276);
  CHECK(ok.frame.t_p == 126);
}

TEST_CASE("identical seeds give byte-identical outputs") {
  auto spec = small_spec();
  spec.out_dir = "test_harness_out_a";
  const auto a = run(spec);
  spec.out_dir = "test_harness_out_b";
  const auto b = run(spec);
  CHECK(slurp(a.results_path) == slurp(b.results_path));
  CHECK(slurp(a.allocations_path) == slurp(b.allocations_path));
  CHECK(!slurp(a.results_path).empty());
  std::filesystem::remove_all("test_harness_out_a");
  std::filesystem::remove_all("test_harness_out_b");
}

TEST_CASE("run emits sane results and the csv schema") {
  auto spec = small_spec();
  spec.sweep_gbps = {0.4, 8.0};
  spec.dump_drops = true;
  const auto out = run(spec);
  // 2 budgets x 2 chains x 2 csi modes x 1 drop
  CHECK(out.results.size() == 8);
  for (const auto& r : out.results) {
    REQUIRE(r.rate_per_user.n_elem == 6);
    for (double v : r.rate_per_user) {
      REQUIRE(v >= 0.0);
      REQUIRE(std::isfinite(v));
    }
    REQUIRE(r.mean_antennas_per_rrh >= 1.0);
    REQUIRE(r.mean_antennas_per_rrh <= (r.chain == Chain::lens ? 208.0 : 400.0));
  }
  const std::string csv = slurp(out.results_path);
  CHECK(csv.rfind("budget_gbps_per_sector,mode,csi,mean_rate_bps_hz,stderr,"
                  "mean_antennas_per_rrh,mean_streams_per_user,drops,seed\n",
                  0) == 0);
  const std::string alloc = slurp(out.allocations_path);
  CHECK(alloc.rfind("budget_gbps_per_sector,mode,drop,rrh,sector,q_e,q_a,rho_dbm,bits\n", 0) ==
        0);
  // One allocation row per selected antenna: header + sum over results of
  // antennas (each chain/budget counted once, not per csi mode).
  int lines = 0;
  for (char c : alloc)
    if (c == '\n') ++lines;
  double antenna_rows = 0.0;
  for (const auto& r : out.results)
    if (r.csi == Csi::perfect) antenna_rows += r.mean_antennas_per_rrh * 6;
  CHECK(lines == static_cast<int>(antenna_rows) + 1);
  CHECK(std::filesystem::exists(std::filesystem::path(spec.out_dir) / "drops" / "drop-0.txt"));
  const std::string dump =
      slurp((std::filesystem::path(spec.out_dir) / "drops" / "drop-0.txt").string());
  CHECK(dump.find("user 0") != std::string::npos);
  CHECK(dump.find("path 0") != std::string::npos);
  std::filesystem::remove_all(spec.out_dir);
}

TEST_CASE("perfect-csi rates are non-decreasing in the fronthaul budget") {
  auto spec = small_spec();
  spec.sweep_gbps = {0.4, 2.0, 8.0, std::numeric_limits<double>::infinity()};
  spec.run_estimated = false;
  spec.drops = 2;
  spec.out_dir = "test_harness_mono";
  const auto out = run(spec);
  for (int drop = 0; drop < spec.drops; ++drop) {
    for (Chain chain : {Chain::lens, Chain::upa}) {
      double prev = -1.0;
      for (double budget : spec.sweep_gbps) {
        for (const auto& r : out.results) {
          if (r.drop != drop || r.chain != chain ||
              r.budget_gbps_per_sector != budget)
            continue;
          const double mean = arma::mean(r.rate_per_user);
          REQUIRE(mean >= prev - 1e-9);
          prev = mean;
        }
      }
    }
  }
  std::filesystem::remove_all(spec.out_dir);
}

TEST_CASE("paired chains consume the identical channel realization") {
  auto spec = small_spec();
  spec.out_dir = "test_harness_paired";
  spec.dump_drops = true;
  // Run lens only, then upa only: the dumped channels must match exactly.
  spec.run_upa = false;
  const auto lens_only = run(spec);
  const std::string dump_lens =
      slurp((std::filesystem::path(spec.out_dir) / "drops" / "drop-0.txt").string());
  std::filesystem::remove_all(spec.out_dir);
  spec.run_upa = true;
  spec.run_lens = false;
  const auto upa_only = run(spec);
  const std::string dump_upa =
      slurp((std::filesystem::path(spec.out_dir) / "drops" / "drop-0.txt").string());
  CHECK(dump_lens == dump_upa);
  CHECK(!dump_lens.empty());
  std::filesystem::remove_all(spec.out_dir);
}
