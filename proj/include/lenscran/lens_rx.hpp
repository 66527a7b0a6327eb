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
#include <vector>

namespace lenscran {

/// Multi-user pilot block for the single-carrier chain: cyclic shifts of one
/// Zadoff-Chu root sequence, shift spacing d_max+1, transmitted with a cyclic
/// prefix of d_max symbols into the preceding guard interval so that received
/// correlations are circular and X_p^H X_p = P*T_p*I holds exactly.
struct PilotBlock {
  arma::cx_mat symbols;  // T_p x K, unit-modulus s_{p,k}[n]
  double power = 0.0;    // per-user transmit power P
  int d_max = 0;

  int t_p() const { return static_cast<int>(symbols.n_rows); }
  int users() const { return static_cast<int>(symbols.n_cols); }
};

/// Throws std::invalid_argument if t_p < users*(d_max+1).
PilotBlock make_pilots(int users, int d_max, int t_p, double power);

/// Pilot observation matrix X_p (T_p x K*(d_max+1)); column (k, d) holds the
/// user-k sequence cyclically delayed by d taps, scaled by sqrt(P).
arma::cx_mat pilot_matrix(const PilotBlock& pilots);

/// Transmit waveform rows per user over n in [-d_max, T_p): the cyclic-prefix
/// extension occupies the first d_max columns.
arma::cx_mat pilot_waveform(const PilotBlock& pilots);

/// Correlator-form LS estimate, (1/(P*T_p)) X_p^H y, one column per stream.
/// `y_pilot` is T_p x I (CP already absorbed by the waveform construction).
/// Row (k*(d_max+1) + d) of the result estimates tap d of user k.
arma::cx_mat ls_estimate(const arma::cx_mat& y_pilot, const PilotBlock& pilots);

/// Estimated delay of the strongest tap per (stream, user); argmax of the
/// estimate magnitude over the tap window, ties broken toward the smaller
/// delay. `estimates` is K*(d_max+1) x I.
arma::imat strongest_delays(const arma::cx_mat& estimates, int users, int d_max);

/// Stream selection per user: streams whose estimated dominant-tap SNR
/// P*|h_hat|^2 / noise_var(i) reaches eta; falls back to the single best
/// stream when none passes. noise_var(i) = sigma^2_{m_i} + eps^2_i.
std::vector<std::vector<int>> select_streams(const arma::cx_mat& estimates,
                                             const arma::imat& delays, double eta, double power,
                                             const arma::vec& noise_var);

/// Delay-compensated channel of one reference user over a set of streams.
/// Column (k', nu + d_max) holds the coefficients at delay offset nu from the
/// per-stream reference delay.
struct CompensatedChannel {
  arma::cx_mat cols;  // |S| x K*(2*d_max+1)
  int users = 0;
  int d_max = 0;

  arma::uword col_index(int user, int nu) const {
    return static_cast<arma::uword>(user) * (2 * d_max + 1) + nu + d_max;
  }
  /// Coefficient vector at offset zero (the reference user's strongest tap).
  arma::cx_vec center(int user) const { return cols.col(col_index(user, 0)); }
};

/// Re-indexes true taps (streams x d_max+1 x users) to offsets around the
/// per-stream reference delays. `streams` selects tap rows; `ref_delays` has
/// one entry per selected stream.
CompensatedChannel delay_compensate(const arma::cx_cube& taps, const std::vector<int>& streams,
                                    const arma::ivec& ref_delays, int users, int d_max);

/// Thresholded LS estimates re-indexed the same way: entries whose estimated
/// SNR passes eta are kept, everything else (including out-of-window taps) is
/// exactly zero.
CompensatedChannel threshold_estimates(const arma::cx_mat& estimates,
                                       const std::vector<int>& streams,
                                       const arma::ivec& ref_delays, double eta, double power,
                                       const arma::vec& noise_var, int users, int d_max);

/// Receive SINR of an arbitrary beamformer: desired power over residual ISI,
/// inter-user interference, noise and quantization noise. `noise_var` runs
/// over the channel's streams.
double beamformer_sinr(const arma::cx_vec& u, const CompensatedChannel& ch, int user,
                       double power, const arma::vec& noise_var);

struct MmseSolution {
  double sinr = 0.0;
  arma::cx_vec beamformer;  // u = C^-1 h, up to scale when solved indirectly
};

/// Closed-form MMSE solution maximizing the receive SINR for `user`. Solves
/// the interference-covariance system directly when the stream count is small
/// and through the Gram of the interference columns otherwise.
MmseSolution mmse_max_sinr(const CompensatedChannel& ch, int user, double power,
                           const arma::vec& noise_var, bool want_beamformer = false);

struct UserRates {
  arma::vec sinr;           // per user, linear
  arma::vec rate_per_user;  // bps/Hz, overhead prefactor applied
  double sum_rate = 0.0;
};

/// Perfect-CSI chain: full MMSE over all streams with true-path reference
/// delays (one per stream and user).
UserRates mmse_perfect_rates(const arma::cx_cube& taps, const arma::imat& ref_delays,
                             double power, const arma::vec& noise_var, int d_max);

/// Estimated-CSI chain: reduced approximate MMSE on the selected streams with
/// thresholded estimates; the SINR is evaluated against the true channel. The
/// effective-throughput prefactor scales the per-user rates.
UserRates mmse_reduced_rates(const arma::cx_mat& estimates, const arma::cx_cube& taps,
                             const arma::imat& est_delays,
                             const std::vector<std::vector<int>>& stream_sets, double eta,
                             double power, const arma::vec& noise_var, int d_max,
                             double prefactor);

}  // namespace lenscran
