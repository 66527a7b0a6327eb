// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "lenscran/lens_rx.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lenscran/numerics.hpp"

namespace lenscran {

PilotBlock make_pilots(int users, int d_max, int t_p, double power) {
  if (users < 1 || d_max < 0 || power <= 0.0)
    throw std::invalid_argument("make_pilots: invalid arguments");
  if (t_p < users * (d_max + 1))
    throw std::invalid_argument("make_pilots: T_p must be >= K*(d_max+1)");

  // Zadoff-Chu root sequence; root T_p-1 is always coprime with T_p.
  const arma::cx_vec zc = zadoff_chu(t_p, t_p - 1);

  PilotBlock p;
  p.power = power;
  p.d_max = d_max;
  p.symbols.set_size(t_p, users);
  for (int k = 0; k < users; ++k) {
    const int shift = k * (d_max + 1);
    for (int n = 0; n < t_p; ++n) p.symbols(n, k) = zc((n + shift) % t_p);
  }
  return p;
}

arma::cx_mat pilot_matrix(const PilotBlock& pilots) {
  const int t_p = pilots.t_p();
  const int users = pilots.users();
  const int taps = pilots.d_max + 1;
  const double amp = std::sqrt(pilots.power);
  arma::cx_mat x(t_p, static_cast<arma::uword>(users) * taps);
  for (int k = 0; k < users; ++k)
    for (int d = 0; d < taps; ++d)
      for (int n = 0; n < t_p; ++n)
        x(n, static_cast<arma::uword>(k) * taps + d) =
            amp * pilots.symbols((((n - d) % t_p) + t_p) % t_p, k);
  return x;
}

arma::cx_mat pilot_waveform(const PilotBlock& pilots) {
  const int t_p = pilots.t_p();
  const int users = pilots.users();
  const double amp = std::sqrt(pilots.power);
  arma::cx_mat x(users, static_cast<arma::uword>(pilots.d_max) + t_p);
  for (int k = 0; k < users; ++k)
    for (int j = 0; j < pilots.d_max + t_p; ++j) {
      const int n = j - pilots.d_max;
      x(k, j) = amp * pilots.symbols(((n % t_p) + t_p) % t_p, k);
    }
  return x;
}

arma::cx_mat ls_estimate(const arma::cx_mat& y_pilot, const PilotBlock& pilots) {
  if (static_cast<int>(y_pilot.n_rows) != pilots.t_p())
    throw std::invalid_argument("ls_estimate: observation length must equal T_p");
  const arma::cx_mat x = pilot_matrix(pilots);
  return (x.t() * y_pilot) / (pilots.power * pilots.t_p());
}

arma::imat strongest_delays(const arma::cx_mat& estimates, int users, int d_max) {
  const int taps = d_max + 1;
  if (static_cast<int>(estimates.n_rows) != users * taps)
    throw std::invalid_argument("strongest_delays: estimate layout mismatch");
  const int n_streams = static_cast<int>(estimates.n_cols);
  arma::imat delays(n_streams, users);
  for (int i = 0; i < n_streams; ++i) {
    for (int k = 0; k < users; ++k) {
      int best = 0;
      double best_mag = -1.0;
      for (int d = 0; d < taps; ++d) {
        const double mag = std::abs(estimates(static_cast<arma::uword>(k) * taps + d, i));
        if (mag > best_mag) {  // ties keep the smaller delay
          best_mag = mag;
          best = d;
        }
      }
      delays(i, k) = best;
    }
  }
  return delays;
}

std::vector<std::vector<int>> select_streams(const arma::cx_mat& estimates,
                                             const arma::imat& delays, double eta, double power,
                                             const arma::vec& noise_var) {
  if (eta <= 0.0) throw std::invalid_argument("select_streams: eta must be positive");
  const int n_streams = static_cast<int>(delays.n_rows);
  const int users = static_cast<int>(delays.n_cols);
  const int taps = static_cast<int>(estimates.n_rows) / users;
  std::vector<std::vector<int>> sets(users);
  for (int k = 0; k < users; ++k) {
    int best_stream = 0;
    double best_mag = -1.0;
    for (int i = 0; i < n_streams; ++i) {
      const double mag =
          std::abs(estimates(static_cast<arma::uword>(k) * taps + delays(i, k), i));
      if (power * mag * mag / noise_var(i) >= eta) sets[k].push_back(i);
      if (mag > best_mag) {
        best_mag = mag;
        best_stream = i;
      }
    }
    if (sets[k].empty()) sets[k].push_back(best_stream);
  }
  return sets;
}

CompensatedChannel delay_compensate(const arma::cx_cube& taps, const std::vector<int>& streams,
                                    const arma::ivec& ref_delays, int users, int d_max) {
  if (streams.size() != ref_delays.n_elem)
    throw std::invalid_argument("delay_compensate: one reference delay per stream required");
  CompensatedChannel ch;
  ch.users = users;
  ch.d_max = d_max;
  const int width = 2 * d_max + 1;
  ch.cols.zeros(streams.size(), static_cast<arma::uword>(users) * width);
  for (std::size_t s = 0; s < streams.size(); ++s) {
    const int dref = static_cast<int>(ref_delays(s));
    for (int k = 0; k < users; ++k) {
      for (int d = 0; d <= d_max; ++d) {
        const int nu = d - dref;
        if (nu < -d_max || nu > d_max) continue;
        ch.cols(s, ch.col_index(k, nu)) = taps(static_cast<arma::uword>(streams[s]), d, k);
      }
    }
  }
  return ch;
}

CompensatedChannel threshold_estimates(const arma::cx_mat& estimates,
                                       const std::vector<int>& streams,
                                       const arma::ivec& ref_delays, double eta, double power,
                                       const arma::vec& noise_var, int users, int d_max) {
  if (streams.size() != ref_delays.n_elem)
    throw std::invalid_argument("threshold_estimates: one reference delay per stream required");
  const int taps = d_max + 1;
  CompensatedChannel ch;
  ch.users = users;
  ch.d_max = d_max;
  ch.cols.zeros(streams.size(), static_cast<arma::uword>(users) * (2 * d_max + 1));
  for (std::size_t s = 0; s < streams.size(); ++s) {
    const int i = streams[s];
    const int dref = static_cast<int>(ref_delays(s));
    for (int k = 0; k < users; ++k) {
      for (int nu = -d_max; nu <= d_max; ++nu) {
        const int d = nu + dref;
        if (d < 0 || d > d_max) continue;  // outside the tap window -> 0
        const auto est = estimates(static_cast<arma::uword>(k) * taps + d, i);
        const double mag2 = std::norm(est);
        if (power * mag2 / noise_var(i) >= eta) ch.cols(s, ch.col_index(k, nu)) = est;
      }
    }
  }
  return ch;
}

double beamformer_sinr(const arma::cx_vec& u, const CompensatedChannel& ch, int user,
                       double power, const arma::vec& noise_var) {
  const arma::cx_rowvec projections = u.t() * ch.cols;
  const arma::uword center = ch.col_index(user, 0);
  const double desired = power * std::norm(projections(center));
  double interference = 0.0;
  for (arma::uword c = 0; c < projections.n_elem; ++c)
    if (c != center) interference += power * std::norm(projections(c));
  double noise = 0.0;
  for (arma::uword s = 0; s < u.n_elem; ++s) noise += noise_var(s) * std::norm(u(s));
  return desired / (interference + noise);
}

MmseSolution mmse_max_sinr(const CompensatedChannel& ch, int user, double power,
                           const arma::vec& noise_var, bool want_beamformer) {
  const arma::uword n = ch.cols.n_rows;
  const arma::uword cols = ch.cols.n_cols;
  const arma::uword center = ch.col_index(user, 0);
  if (noise_var.n_elem != n)
    throw std::invalid_argument("mmse_max_sinr: one noise variance per stream required");
  const arma::cx_vec h0 = ch.cols.col(center);
  MmseSolution sol;

  if (n <= cols) {
    // Dense interference covariance C = P*(H H^H - h0 h0^H) + diag.
    arma::cx_mat c = power * (ch.cols * ch.cols.t() - h0 * h0.t());
    c.diag() += arma::conv_to<arma::cx_vec>::from(noise_var);
    const arma::cx_vec u = hpd_solve(c, h0);
    sol.sinr = power * std::real(arma::cdot(h0, u));
    if (want_beamformer) sol.beamformer = u;
    return sol;
  }

  // Tall case: work with the Gram of the whitened columns (rank of the
  // interference is at most the column count).
  const arma::vec w_inv = 1.0 / noise_var;
  const arma::cx_mat hw = ch.cols.each_col() % arma::conv_to<arma::cx_vec>::from(w_inv);
  const arma::cx_mat gram = ch.cols.t() * hw;  // H^H W^-1 H
  arma::cx_mat inner = gram;
  inner.diag() += std::complex<double>(1.0 / power, 0.0);
  const arma::cx_vec t_c = gram.col(center);
  const arma::cx_vec y = hpd_solve(inner, t_c);
  const double x = std::real(gram(center, center)) - std::real(arma::cdot(t_c, y));
  const double denom = 1.0 - power * x;
  sol.sinr = power * x / denom;
  if (want_beamformer) sol.beamformer = hw.col(center) - hw * y;  // prop. to C^-1 h0
  return sol;
}

UserRates mmse_perfect_rates(const arma::cx_cube& taps, const arma::imat& ref_delays,
                             double power, const arma::vec& noise_var, int d_max) {
  const int n_streams = static_cast<int>(taps.n_rows);
  const int users = static_cast<int>(taps.n_slices);
  std::vector<int> all(n_streams);
  std::iota(all.begin(), all.end(), 0);
  UserRates out;
  out.sinr.set_size(users);
  out.rate_per_user.set_size(users);
  for (int k = 0; k < users; ++k) {
    const auto ch = delay_compensate(taps, all, ref_delays.col(k), users, d_max);
    out.sinr(k) = mmse_max_sinr(ch, k, power, noise_var).sinr;
    out.rate_per_user(k) = std::log2(1.0 + out.sinr(k));
  }
  out.sum_rate = arma::accu(out.rate_per_user);
  return out;
}

UserRates mmse_reduced_rates(const arma::cx_mat& estimates, const arma::cx_cube& taps,
                             const arma::imat& est_delays,
                             const std::vector<std::vector<int>>& stream_sets, double eta,
                             double power, const arma::vec& noise_var, int d_max,
                             double prefactor) {
  const int users = static_cast<int>(taps.n_slices);
  UserRates out;
  out.sinr.set_size(users);
  out.rate_per_user.set_size(users);
  for (int k = 0; k < users; ++k) {
    const auto& set = stream_sets[k];
    arma::ivec dref(set.size());
    arma::vec w(set.size());
    for (std::size_t s = 0; s < set.size(); ++s) {
      dref(s) = est_delays(set[s], k);
      w(s) = noise_var(set[s]);
    }
    const auto est_ch = threshold_estimates(estimates, set, dref, eta, power, noise_var, users,
                                            d_max);
    // Approximate beamformer: the interference covariance comes from the
    // thresholded estimates; the desired-signal vector keeps the raw LS
    // estimates of the dominant taps, so a fallback stream whose estimate sits
    // below eta still yields a usable (MRC-like) beamformer.
    const int taps_per_user = d_max + 1;
    arma::cx_vec h0(set.size());
    for (std::size_t s = 0; s < set.size(); ++s)
      h0(s) = estimates(static_cast<arma::uword>(k) * taps_per_user + dref(s), set[s]);
    const arma::uword center = est_ch.col_index(k, 0);
    const arma::cx_vec h0_thr = est_ch.cols.col(center);
    arma::cx_mat c = power * (est_ch.cols * est_ch.cols.t() - h0_thr * h0_thr.t());
    c.diag() += arma::conv_to<arma::cx_vec>::from(w);
    const arma::cx_vec u = hpd_solve(c, h0);
    // Evaluated against the true reduced channel.
    const auto true_ch = delay_compensate(taps, set, dref, users, d_max);
    out.sinr(k) = beamformer_sinr(u, true_ch, k, power, w);
    out.rate_per_user(k) = prefactor * std::log2(1.0 + out.sinr(k));
  }
  out.sum_rate = arma::accu(out.rate_per_user);
  return out;
}

}  // namespace lenscran
