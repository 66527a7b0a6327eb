// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "lenscran/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lenscran/lens_rx.hpp"
#include "lenscran/quantizer.hpp"

namespace lenscran {

double ExperimentSpec::eta_linear() const { return std::pow(10.0, eta_db / 10.0); }

double ExperimentSpec::budget_bits(double gbps_per_sector) const {
  return scenario.sectors_per_rrh * gbps_per_sector * 1e9 / (2.0 * scenario.bandwidth_hz);
}

void ExperimentSpec::validate() {
  scenario.validate();
  const int d_max = scenario.d_max();
  if (frame.t_f == 0)
    frame = FrameConfig::lens_defaults(scenario.user_count, d_max, 8280, ofdm.n_subcarriers);
  frame.validate();
  ofdm.validate(scenario.user_count, d_max);
  if (frame.t_p < scenario.user_count * (d_max + 1))
    throw std::invalid_argument("frame.t_p: need T_p >= K*(d_max+1)");
  if (drops < 1) throw std::invalid_argument("drops: must be >= 1");
  if (eta_db <= -100.0) throw std::invalid_argument("eta_db: implausible threshold");
  if (!run_lens && !run_upa) throw std::invalid_argument("modes: select lens, upa or both");
  if (!run_perfect && !run_estimated) throw std::invalid_argument("csi: select at least one");
  if (sweep_gbps.empty()) throw std::invalid_argument("sweep: at least one budget required");
  for (double g : sweep_gbps) {
    if (std::isinf(g)) continue;
    if (g <= 0.0) throw std::invalid_argument("sweep: budgets must be positive");
    if (budget_bits(g) < 1.0)
      throw std::invalid_argument("sweep: budget below 1 bit/sample per RRH");
  }
  if (unconstrained_bits < 1 || unconstrained_bits > 24)
    throw std::invalid_argument("unconstrained_bits: expected 1..24");
  if (min_bits_per_antenna < 1 || min_bits_per_antenna > 8)
    throw std::invalid_argument("min_bits_per_antenna: expected 1..8");
}

namespace {

struct StreamInfo {
  int rrh = 0;
  int antenna = 0;
  double rho = 0.0;
  int bits = 0;
  double eps2 = 0.0;
};

// Per-chain state shared by every budget of one drop: true taps, per-path
// coefficients (lens), probed powers and the noisy received pilot waveform on
// every antenna. Budgets differ only in the bit allocation and quantization.
struct ChainState {
  std::vector<arma::cx_cube> taps;                  // per RRH: Q x D x K
  std::vector<std::vector<arma::cx_mat>> coeff;     // per (RRH, user): Q x L, lens only
  std::vector<arma::vec> rho;                       // per RRH
  std::vector<arma::cx_mat> pilot_rx;               // per RRH, time domain, noise included
};

arma::cx_mat probe_symbols(RandomStream rng, int users, int len, double power) {
  arma::cx_mat x(users, len);
  const double amp = std::sqrt(power);
  for (int k = 0; k < users; ++k)
    for (int n = 0; n < len; ++n) x(k, n) = amp * rng.unit_phasor();
  return x;
}

struct BudgetedStreams {
  std::vector<StreamInfo> streams;
  arma::cx_cube taps;   // Qtot x D x K
  arma::vec noise_var;  // sigma^2 + eps^2 per stream
  arma::vec rho;
  arma::ivec bits;
};

BudgetedStreams gather_streams(const ChainState& state,
                               const std::vector<BitAllocation>& alloc, double sigma2,
                               int d_max, int users) {
  BudgetedStreams out;
  for (std::size_t m = 0; m < state.taps.size(); ++m)
    for (int q : alloc[m].selected) {
      StreamInfo s;
      s.rrh = static_cast<int>(m);
      s.antenna = q;
      s.rho = state.rho[m](q);
      s.bits = static_cast<int>(alloc[m].bits(q));
      s.eps2 = quantization_noise_variance(s.rho, s.bits);
      out.streams.push_back(s);
    }
  const arma::uword total = out.streams.size();
  out.taps.set_size(total, static_cast<arma::uword>(d_max) + 1, users);
  out.noise_var.set_size(total);
  out.rho.set_size(total);
  out.bits.set_size(total);
  for (arma::uword i = 0; i < total; ++i) {
    const auto& s = out.streams[i];
    for (int k = 0; k < users; ++k)
      for (int d = 0; d <= d_max; ++d)
        out.taps(i, d, k) = state.taps[s.rrh](s.antenna, d, k);
    out.noise_var(i) = sigma2 + s.eps2;
    out.rho(i) = s.rho;
    out.bits(i) = s.bits;
  }
  return out;
}

std::string format_double(double v, const char* fmt = "%.9g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

DropEvaluation evaluate_drop(const ExperimentSpec& spec, int drop_index) {
  const auto& sc = spec.scenario;
  const int users = sc.user_count;
  const int rrhs = sc.rrh_count;
  const int d_max = sc.d_max();
  const double sigma2 = noise_floor(sc);
  const double power = sc.tx_power_w;
  const double eta = spec.eta_linear();

  // The inclusive layout keeps the zenith-adjacent elements, which carry the
  // strongest (near-user, high-elevation) paths; the trimmed variant leaves a
  // dead zone there that inverts the lens/UPA rate ordering.
  const LensGeometry lens_geom =
      enumerate_lens_elements(sc.aperture_y, sc.aperture_z, sc.lens_theta_minus,
                              sc.lens_theta_plus, sc.lens_phi, sc.lens_phi,
                              LensEnumeration::inclusive);
  const UpaGeometry upa_geom = make_upa(sc.aperture_y, sc.aperture_z);

  RandomStream drop_rng(spec.seed, "drop-" + std::to_string(drop_index));
  const Drop drop = generate_drop(sc, drop_rng);

  // Shared probing symbols; d_max warmup columns make the power estimate
  // unbiased at the stage boundary.
  const arma::cx_mat x_probe =
      probe_symbols(drop_rng.substream("probe"), users, d_max + spec.frame.t_a, power);

  const PilotBlock lens_pilots = make_pilots(users, d_max, spec.frame.t_p, power);
  const arma::cx_mat lens_pilot_wave = pilot_waveform(lens_pilots);
  const OfdmPilots upa_pilots =
      make_ofdm_pilots(users, spec.ofdm.n_subcarriers, spec.ofdm.tau_p, d_max, power);
  const arma::cx_mat upa_pilot_wave_raw = ofdm_pilot_waveform(upa_pilots, spec.ofdm.cp_len);
  // Prepend the tap-memory warmup (silence before the stage: CP absorbs it).
  arma::cx_mat upa_pilot_wave(users, static_cast<arma::uword>(d_max) + upa_pilot_wave_raw.n_cols,
                              arma::fill::zeros);
  upa_pilot_wave.cols(d_max, upa_pilot_wave.n_cols - 1) = upa_pilot_wave_raw;

  auto build_state = [&](Chain chain) {
    ChainState st;
    st.taps.resize(rrhs);
    st.coeff.resize(rrhs);
    st.rho.resize(rrhs);
    st.pilot_rx.resize(rrhs);
    const std::string tag = to_string(chain);
    for (int m = 0; m < rrhs; ++m) {
      const int q_count = chain == Chain::lens ? lens_geom.size() : upa_geom.size();
      arma::cx_cube taps(static_cast<arma::uword>(q_count), static_cast<arma::uword>(d_max) + 1,
                         users, arma::fill::zeros);
      st.coeff[m].resize(users);
      for (int k = 0; k < users; ++k) {
        const auto& paths = drop.paths.at(m, k);
        const arma::cx_mat coeff = chain == Chain::lens
                                       ? path_coefficients(paths, lens_geom)
                                       : path_coefficients(paths, upa_geom);
        taps.slice(k) = taps_from_coefficients(coeff, paths, d_max);
        if (chain == Chain::lens) st.coeff[m][k] = coeff;
      }
      st.taps[m] = std::move(taps);

      auto probe_noise_rng =
          drop_rng.substream(tag + "/probe-noise/rrh" + std::to_string(m));
      const arma::cx_mat y_probe =
          apply_taps(st.taps[m], x_probe, d_max, spec.frame.t_a) +
          probe_noise_rng.cgauss_mat(q_count, spec.frame.t_a, sigma2);
      st.rho[m] = probe_power(y_probe);

      auto pilot_noise_rng =
          drop_rng.substream(tag + "/pilot-noise/rrh" + std::to_string(m));
      if (chain == Chain::lens) {
        st.pilot_rx[m] =
            apply_taps(st.taps[m], lens_pilot_wave, d_max, spec.frame.t_p) +
            pilot_noise_rng.cgauss_mat(q_count, spec.frame.t_p, sigma2);
      } else {
        const int total = spec.ofdm.tau_p * spec.ofdm.symbol_len();
        st.pilot_rx[m] = apply_taps(st.taps[m], upa_pilot_wave, d_max, total) +
                         pilot_noise_rng.cgauss_mat(q_count, total, sigma2);
      }
    }
    return st;
  };

  DropEvaluation out;
  std::ostringstream alloc_rows;

  auto run_chain = [&](Chain chain, const ChainState& state) {
    for (double gbps : spec.sweep_gbps) {
      const bool unconstrained = std::isinf(gbps);
      std::vector<BitAllocation> alloc(rrhs);
      for (int m = 0; m < rrhs; ++m) {
        if (unconstrained) {
          const arma::uword q_count = state.rho[m].n_elem;
          alloc[m].bits.set_size(q_count);
          alloc[m].bits.fill(spec.unconstrained_bits);
          alloc[m].selected.resize(q_count);
          for (arma::uword q = 0; q < q_count; ++q) alloc[m].selected[q] = static_cast<int>(q);
        } else {
          // The RRH knows its static noise-plus-interference floor; the
          // water-filling discriminates on the floor-subtracted signal power,
          // otherwise the common floor drags every antenna above the cutoff.
          arma::vec rho_signal = arma::clamp(state.rho[m] - sigma2, 0.0, arma::datum::inf);
          if (rho_signal.max() <= 0.0) rho_signal = state.rho[m];
          const double budget = spec.budget_bits(gbps);
          // Selected antennas carry at least min_bits_per_antenna (the noise
          // model is only trustworthy from ~3 bits up), so the candidate set
          // is the strongest floor(budget/min_bits) antennas.
          const int n_cand = std::max(
              1, std::min(static_cast<int>(rho_signal.n_elem),
                          static_cast<int>(budget / spec.min_bits_per_antenna)));
          const arma::uvec order = arma::sort_index(rho_signal, "descend");
          const arma::uvec cand = order.head(n_cand);
          const auto relaxed = solve_relaxed_allocation(rho_signal(cand), budget);
          const auto sub = round_allocation(relaxed.bits, budget);
          alloc[m].beta = sub.beta;
          alloc[m].bits.zeros(rho_signal.n_elem);
          for (arma::uword j = 0; j < cand.n_elem; ++j)
            alloc[m].bits(cand(j)) = sub.bits(j);
          for (arma::uword q = 0; q < alloc[m].bits.n_elem; ++q)
            if (alloc[m].bits(q) > 0) alloc[m].selected.push_back(static_cast<int>(q));
        }
        for (int q : alloc[m].selected) {
          int qe = 0, qa = 0;
          if (chain == Chain::lens) {
            qe = lens_geom.elements[q].q_e;
            qa = lens_geom.elements[q].q_a;
          } else {
            qe = q / upa_geom.q_y;  // z-axis grid index
            qa = q % upa_geom.q_y;  // y-axis grid index
          }
          alloc_rows << format_double(gbps, "%g") << ',' << to_string(chain) << ','
                     << drop_index << ',' << m << ",0," << qe << ',' << qa << ','
                     << format_double(watt_to_dbm(state.rho[m](q)), "%.4f") << ','
                     << alloc[m].bits(q) << "\n";
        }
      }

      const auto bs = gather_streams(state, alloc, sigma2, d_max, users);
      const int total_streams = static_cast<int>(bs.streams.size());
      if (total_streams == 0)
        throw std::runtime_error("evaluate_drop: no antenna selected (budget too small)");
      const double antennas_per_rrh = static_cast<double>(total_streams) / rrhs;

      const double budget_value = unconstrained ? arma::datum::inf : gbps;

      if (spec.run_perfect) {
        DropResult r;
        r.drop = drop_index;
        r.budget_gbps_per_sector = budget_value;
        r.chain = chain;
        r.csi = Csi::perfect;
        r.mean_antennas_per_rrh = antennas_per_rrh;
        r.mean_streams_per_user = total_streams;
        if (chain == Chain::lens) {
          arma::imat ref_delays(total_streams, users);
          for (int i = 0; i < total_streams; ++i) {
            const auto& s = bs.streams[i];
            for (int k = 0; k < users; ++k) {
              const auto& coeff = state.coeff[s.rrh][k];
              const auto& paths = drop.paths.at(s.rrh, k);
              arma::uword best = 0;
              double best_mag = -1.0;
              for (arma::uword l = 0; l < coeff.n_cols; ++l) {
                const double mag = std::abs(coeff(s.antenna, l));
                if (mag > best_mag) {
                  best_mag = mag;
                  best = l;
                }
              }
              ref_delays(i, k) = paths[best].delay;
            }
          }
          const auto rates = mmse_perfect_rates(bs.taps, ref_delays, power, bs.noise_var, d_max);
          r.sinr = rates.sinr;
          r.rate_per_user = rates.rate_per_user;
        } else {
          const auto h = freq_channel(bs.taps, spec.ofdm.n_subcarriers);
          const arma::mat sinr = ofdm_mmse_perfect_sinr(h, power, bs.noise_var);
          r.rate_per_user = ofdm_rates(sinr, spec.ofdm.cp_len, 1.0);
          r.sinr = arma::vec(arma::mean(sinr, 1));
        }
        out.results.push_back(std::move(r));
      }

      if (spec.run_estimated) {
        DropResult r;
        r.drop = drop_index;
        r.budget_gbps_per_sector = budget_value;
        r.chain = chain;
        r.csi = Csi::estimated;
        r.mean_antennas_per_rrh = antennas_per_rrh;
        // Quantized pilot observations of the selected streams.
        const int pilot_len = static_cast<int>(state.pilot_rx[0].n_cols);
        arma::cx_mat y_pilot(total_streams, pilot_len);
        for (int i = 0; i < total_streams; ++i) {
          const auto& s = bs.streams[i];
          y_pilot.row(i) = quantize(arma::cx_rowvec(state.pilot_rx[s.rrh].row(s.antenna)),
                                    s.rho, s.bits);
        }
        if (chain == Chain::lens) {
          const arma::cx_mat estimates = ls_estimate(y_pilot.st(), lens_pilots);
          const arma::imat delays = strongest_delays(estimates, users, d_max);
          const auto sets = select_streams(estimates, delays, eta, power, bs.noise_var);
          double mean_streams = 0.0;
          for (const auto& s : sets) mean_streams += s.size();
          r.mean_streams_per_user = mean_streams / users;
          const auto rates =
              mmse_reduced_rates(estimates, bs.taps, delays, sets, eta, power, bs.noise_var,
                                 d_max, spec.frame.overhead_prefactor());
          r.sinr = rates.sinr;
          r.rate_per_user = rates.rate_per_user;
        } else {
          r.mean_streams_per_user = total_streams;
          const arma::cx_mat y_freq =
              ofdm_demodulate(y_pilot, spec.ofdm.n_subcarriers, spec.ofdm.cp_len);
          const arma::cx_mat estimates = ofdm_ls_estimate(y_freq, upa_pilots);
          arma::cx_cube est_taps(total_streams, static_cast<arma::uword>(d_max) + 1, users);
          for (int i = 0; i < total_streams; ++i)
            for (int k = 0; k < users; ++k)
              for (int d = 0; d <= d_max; ++d)
                est_taps(i, d, k) = estimates(static_cast<arma::uword>(k) * (d_max + 1) + d, i);
          const auto h_true = freq_channel(bs.taps, spec.ofdm.n_subcarriers);
          const auto h_est = freq_channel(est_taps, spec.ofdm.n_subcarriers);
          const arma::mat sinr = ofdm_mmse_estimated_sinr(h_true, h_est, power, bs.noise_var);
          r.rate_per_user = ofdm_rates(sinr, spec.ofdm.cp_len, spec.ofdm.overhead_prefactor());
          r.sinr = arma::vec(arma::mean(sinr, 1));
        }
        out.results.push_back(std::move(r));
      }
    }
  };

  if (spec.run_lens) {
    const ChainState state = build_state(Chain::lens);
    run_chain(Chain::lens, state);
  }
  if (spec.run_upa) {
    const ChainState state = build_state(Chain::upa);
    run_chain(Chain::upa, state);
  }

  out.allocation_rows = alloc_rows.str();
  if (spec.dump_drops) {
    std::ostringstream dump;
    dump_drop(dump, sc, drop, drop_index);
    out.dump_text = dump.str();
  }
  return out;
}

RunOutput run(const ExperimentSpec& spec_in) {
  ExperimentSpec spec = spec_in;
  spec.validate();

  std::vector<DropEvaluation> evals(spec.drops);
  int n_threads = spec.threads > 0 ? spec.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = std::min(n_threads, spec.drops);

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= spec.drops || failed.load()) break;
      try {
        evals[idx] = evaluate_drop(spec, idx);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_message = e.what();
        failed.store(true);
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error("run: drop evaluation failed: " + error_message);

  RunOutput out;
  for (auto& e : evals)
    out.results.insert(out.results.end(), e.results.begin(), e.results.end());
  out.table = summarize(out.results, spec.seed);

  namespace fs = std::filesystem;
  fs::create_directories(spec.out_dir);
  out.results_path = (fs::path(spec.out_dir) / "results.csv").string();
  out.allocations_path = (fs::path(spec.out_dir) / "allocations.csv").string();
  {
    std::ofstream f(out.results_path, std::ios::binary);
    if (!f) throw std::runtime_error("run: cannot write " + out.results_path);
    f << results_csv(out.table);
  }
  {
    std::ofstream f(out.allocations_path, std::ios::binary);
    if (!f) throw std::runtime_error("run: cannot write " + out.allocations_path);
    f << "budget_gbps_per_sector,mode,drop,rrh,sector,q_e,q_a,rho_dbm,bits\n";
    for (const auto& e : evals) f << e.allocation_rows;
  }
  if (spec.dump_drops) {
    const fs::path dir = fs::path(spec.out_dir) / "drops";
    fs::create_directories(dir);
    for (int i = 0; i < spec.drops; ++i) {
      std::ofstream f(dir / ("drop-" + std::to_string(i) + ".txt"), std::ios::binary);
      f << evals[i].dump_text;
    }
  }

  std::printf("budget_gbps  mode  csi        rate_bps_hz  antennas/rrh  streams/user\n");
  for (const auto& row : out.table)
    std::printf("%-12s %-5s %-10s %-12.4f %-13.2f %-12.2f\n",
                std::isinf(row.budget_gbps_per_sector)
                    ? "inf"
                    : format_double(row.budget_gbps_per_sector, "%g").c_str(),
                to_string(row.chain), to_string(row.csi), row.mean_rate_bps_hz,
                row.mean_antennas_per_rrh, row.mean_streams_per_user);
  return out;
}

}  // namespace lenscran
