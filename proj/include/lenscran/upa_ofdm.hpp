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
#include <stdexcept>

namespace lenscran {

/// OFDM framing for the benchmark chain: N subcarriers, a cyclic prefix of at
/// least d_max samples, and tau_a/tau_p/tau_d OFDM symbols for the probing,
/// training and data stages of a tau_f-symbol frame.
struct OfdmConfig {
  int n_subcarriers = 256;
  int cp_len = 20;
  int tau_a = 1;
  int tau_p = 3;
  int tau_f = 30;

  int tau_d() const { return tau_f - tau_a - tau_p; }
  int symbol_len() const { return n_subcarriers + cp_len; }
  double overhead_prefactor() const {
    return 1.0 - static_cast<double>(tau_a + tau_p) / tau_f;
  }
  void validate(int users, int d_max) const {
    if (n_subcarriers < 1) throw std::invalid_argument("ofdm.n_subcarriers: invalid");
    if (cp_len < d_max) throw std::invalid_argument("ofdm.cp_len: need mu >= d_max");
    if (tau_a < 1 || tau_p < 1 || tau_d() < 1)
      throw std::invalid_argument("ofdm.tau: stage symbol counts must be positive");
    if (static_cast<long long>(tau_p) * n_subcarriers <
        static_cast<long long>(users) * (d_max + 1))
      throw std::invalid_argument("ofdm.tau_p: LS existence needs tau_p*N >= K*(d_max+1)");
  }
};

/// Frequency-domain pilot design with the Kronecker structure V kron S_p:
/// user k = kappa*tau_p + omega + 1 transmits
///   x_p,t,k[n] = sqrt(P) * V(t, omega) * s_zc[n] * exp(-j*2*pi*n*kappa*(d_max+1)/N),
/// V(t, w) = exp(-j*2*pi*t*w/tau_p) (unit-modulus, V^H V = tau_p I), S_p a
/// length-N Zadoff-Chu diagonal. The stacked observation matrix then satisfies
/// Xbar^H Xbar = tau_p*N*P*I exactly.
struct OfdmPilots {
  arma::cx_cube symbols;  // N x K x tau_p, frequency-domain, scaled by sqrt(P)
  double power = 0.0;
  int d_max = 0;

  int n() const { return static_cast<int>(symbols.n_rows); }
  int users() const { return static_cast<int>(symbols.n_cols); }
  int tau_p() const { return static_cast<int>(symbols.n_slices); }
};

OfdmPilots make_ofdm_pilots(int users, int n_subcarriers, int tau_p, int d_max, double power);

/// Stacked pilot observation matrix Xbar_p, (tau_p*N x K*(d_max+1)); row block
/// t holds sqrt(N) * [X_p,t,1 F_0, ..., X_p,t,K F_0].
arma::cx_mat ofdm_pilot_matrix(const OfdmPilots& pilots);

/// Serialized time-domain pilot waveform per user (K x tau_p*(N+cp)): unitary
/// IDFT of each symbol with the cyclic prefix prepended.
arma::cx_mat ofdm_pilot_waveform(const OfdmPilots& pilots, int cp_len);

/// Unitary-IDFT + CP modulation of one user's frequency symbols (N x tau).
arma::cx_vec ofdm_modulate(const arma::cx_mat& freq_symbols, int cp_len);

/// CP strip + unitary DFT of received time rows (streams x tau*(N+cp));
/// returns the stacked frequency observations (tau*N x streams).
arma::cx_mat ofdm_demodulate(const arma::cx_mat& y_time, int n_subcarriers, int cp_len);

/// End-to-end waveform pipeline: per-user modulation, tap convolution across
/// the serialized block, additive time-domain noise (pass an empty matrix to
/// skip), optional per-antenna uniform quantization (empty bits skips), then
/// demodulation. Matches the per-subcarrier product model whenever
/// cp_len >= d_max.
arma::cx_mat ofdm_transmit_receive(const arma::cx_cube& freq_symbols,  // N x K x tau
                                   const arma::cx_cube& taps,          // I x d_max+1 x K
                                   int cp_len, const arma::cx_mat& noise_time,
                                   const arma::vec& rho, const arma::ivec& bits);

/// Stacked LS estimate (1/(tau_p*N*P)) Xbar^H y for every stream; y is the
/// stacked frequency observation (tau_p*N x streams). Row (k*(d_max+1)+d)
/// estimates tap d of user k.
arma::cx_mat ofdm_ls_estimate(const arma::cx_mat& y_freq, const OfdmPilots& pilots);

/// Per-subcarrier frequency response sqrt(N) F_0 h of every (stream, user):
/// cube slice n holds the streams x users channel matrix of subcarrier n.
arma::cx_cube freq_channel(const arma::cx_cube& taps, int n_subcarriers);

/// Closed-form per-subcarrier MMSE SINR with true channels (users x N).
arma::mat ofdm_mmse_perfect_sinr(const arma::cx_cube& h_freq, double power,
                                 const arma::vec& noise_var);

/// SINR of the estimated-CSI MMSE beamformers evaluated against the true
/// channels (users x N).
arma::mat ofdm_mmse_estimated_sinr(const arma::cx_cube& h_true, const arma::cx_cube& h_est,
                                   double power, const arma::vec& noise_var);

/// Per-user rate (bps/Hz) from per-subcarrier SINRs: prefactor/(N+cp) *
/// sum_n log2(1+sinr). Use prefactor 1 for perfect CSI and the estimated-CSI
/// overhead factor otherwise.
arma::vec ofdm_rates(const arma::mat& sinr, int cp_len, double prefactor);

}  // namespace lenscran
