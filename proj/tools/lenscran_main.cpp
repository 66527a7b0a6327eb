// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "lenscran/harness.hpp"

namespace {

std::vector<double> parse_sweep(const std::vector<std::string>& tokens) {
  std::vector<double> out;
  for (const auto& t : tokens) {
    if (t == "inf" || t == "unconstrained")
      out.push_back(std::numeric_limits<double>::infinity());
    else
      out.push_back(std::stod(t));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo link-level simulator of uplink mmWave C-RAN with lens antenna "
               "arrays and a UPA-OFDM benchmark"};
  app.set_config("--config", "", "Key-value config file (INI); flags override it");

  lenscran::ExperimentSpec spec;
  std::vector<std::string> sweep_tokens;
  std::vector<std::string> modes{"lens", "upa"};
  std::string csi = "both";

  app.add_option("--sweep", sweep_tokens,
                 "Fronthaul capacities per sector in Gbps (comma list; 'inf' for the "
                 "unconstrained mode)")
      ->delimiter(',');
  app.add_option("--drops", spec.drops, "Monte-Carlo drops (user placements)");
  app.add_option("--seed", spec.seed, "Base seed; every drop derives labelled substreams");
  app.add_option("--modes", modes, "Architectures to run: lens, upa or lens,upa")
      ->delimiter(',');
  app.add_option("--csi", csi, "CSI modes: perfect, estimated or both");
  app.add_option("--eta-db", spec.eta_db, "Stream-selection threshold in dB");
  app.add_option("--out", spec.out_dir, "Output directory for results.csv / allocations.csv");
  app.add_flag("--dump-drops", spec.dump_drops, "Write drops/*.txt channel dumps");
  app.add_option("--threads", spec.threads, "Drop worker threads (0 = hardware)");

  auto* sc = app.add_option_group("scenario", "Scenario overrides (units in field names)");
  sc->add_option("--scenario.rrh-count", spec.scenario.rrh_count);
  sc->add_option("--scenario.user-count", spec.scenario.user_count);
  sc->add_option("--scenario.hex-side-m", spec.scenario.hex_side_m);
  sc->add_option("--scenario.bandwidth-hz", spec.scenario.bandwidth_hz);
  sc->add_option("--scenario.tx-power-dbm",
                 [&spec](const std::vector<std::string>& v) {
                   spec.scenario.tx_power_w = lenscran::dbm_to_watt(std::stod(v.at(0)));
                   return true;
                 },
                 "Per-user transmit power in dBm")
      ->expected(1);
  sc->add_option("--scenario.noise-figure-db", spec.scenario.noise_figure_db);
  sc->add_option("--scenario.intersector-dbm", spec.scenario.intersector_dbm);
  sc->add_option("--ofdm.subcarriers", spec.ofdm.n_subcarriers);
  sc->add_option("--ofdm.cp-len", spec.ofdm.cp_len);
  sc->add_option("--ofdm.tau-p", spec.ofdm.tau_p);
  sc->add_option("--frame.t-f", spec.frame.t_f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!sweep_tokens.empty()) spec.sweep_gbps = parse_sweep(sweep_tokens);
    spec.run_lens = std::find(modes.begin(), modes.end(), "lens") != modes.end();
    spec.run_upa = std::find(modes.begin(), modes.end(), "upa") != modes.end();
    spec.run_perfect = csi == "perfect" || csi == "both";
    spec.run_estimated = csi == "estimated" || csi == "both";

    const auto out = lenscran::run(spec);
    std::printf("wrote %s and %s (%d drops, seed %llu)\n", out.results_path.c_str(),
                out.allocations_path.c_str(), spec.drops,
                static_cast<unsigned long long>(spec.seed));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
