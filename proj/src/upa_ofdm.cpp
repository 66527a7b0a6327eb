// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "lenscran/upa_ofdm.hpp"

#include <cmath>

#include "lenscran/channel.hpp"
#include "lenscran/numerics.hpp"
#include "lenscran/quantizer.hpp"

namespace lenscran {

OfdmPilots make_ofdm_pilots(int users, int n_subcarriers, int tau_p, int d_max, double power) {
  if (users < 1 || n_subcarriers < 1 || tau_p < 1 || power <= 0.0)
    throw std::invalid_argument("make_ofdm_pilots: invalid arguments");
  if (static_cast<long long>(tau_p) * n_subcarriers <
      static_cast<long long>(users) * (d_max + 1))
    throw std::invalid_argument("make_ofdm_pilots: need tau_p*N >= K*(d_max+1)");
  const int kappa_max = (users - 1) / tau_p;
  if ((kappa_max + 1) * (d_max + 1) > n_subcarriers)
    throw std::invalid_argument("make_ofdm_pilots: tap windows exceed the subcarrier grid");

  const arma::cx_vec zc = zadoff_chu(n_subcarriers, n_subcarriers - 1);
  const double amp = std::sqrt(power);
  OfdmPilots p;
  p.power = power;
  p.d_max = d_max;
  p.symbols.set_size(n_subcarriers, users, tau_p);
  for (int t = 0; t < tau_p; ++t) {
    for (int k = 0; k < users; ++k) {
      const int kappa = k / tau_p;
      const int omega = k % tau_p;
      const double vphase = -2.0 * M_PI * t * omega / tau_p;
      const std::complex<double> v(std::cos(vphase), std::sin(vphase));
      const double ramp = -2.0 * M_PI * kappa * (d_max + 1) / n_subcarriers;
      for (int n = 0; n < n_subcarriers; ++n) {
        const std::complex<double> shift(std::cos(ramp * n), std::sin(ramp * n));
        p.symbols(n, k, t) = amp * v * zc(n) * shift;
      }
    }
  }
  return p;
}

arma::cx_mat ofdm_pilot_matrix(const OfdmPilots& pilots) {
  const int n = pilots.n();
  const int users = pilots.users();
  const int taps = pilots.d_max + 1;
  const int tau = pilots.tau_p();
  arma::cx_mat x(static_cast<arma::uword>(tau) * n, static_cast<arma::uword>(users) * taps);
  for (int t = 0; t < tau; ++t)
    for (int k = 0; k < users; ++k)
      for (int d = 0; d < taps; ++d)
        for (int m = 0; m < n; ++m) {
          const double phase = -2.0 * M_PI * m * d / n;
          x(static_cast<arma::uword>(t) * n + m, static_cast<arma::uword>(k) * taps + d) =
              pilots.symbols(m, k, t) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
  return x;
}

arma::cx_vec ofdm_modulate(const arma::cx_mat& freq_symbols, int cp_len) {
  const int n = static_cast<int>(freq_symbols.n_rows);
  const int tau = static_cast<int>(freq_symbols.n_cols);
  arma::cx_vec out(static_cast<arma::uword>(tau) * (n + cp_len));
  for (int t = 0; t < tau; ++t) {
    const arma::cx_vec time = idft(freq_symbols.col(t));
    const arma::uword base = static_cast<arma::uword>(t) * (n + cp_len);
    for (int j = 0; j < cp_len; ++j) out(base + j) = time(n - cp_len + j);
    out.subvec(base + cp_len, base + cp_len + n - 1) = time;
  }
  return out;
}

arma::cx_mat ofdm_pilot_waveform(const OfdmPilots& pilots, int cp_len) {
  const int total = pilots.tau_p() * (pilots.n() + cp_len);
  arma::cx_mat x(pilots.users(), static_cast<arma::uword>(total));
  for (int k = 0; k < pilots.users(); ++k) {
    arma::cx_mat freq(pilots.n(), pilots.tau_p());
    for (int t = 0; t < pilots.tau_p(); ++t) freq.col(t) = pilots.symbols.slice(t).col(k);
    x.row(k) = ofdm_modulate(freq, cp_len).st();
  }
  return x;
}

arma::cx_mat ofdm_demodulate(const arma::cx_mat& y_time, int n_subcarriers, int cp_len) {
  const int sym = n_subcarriers + cp_len;
  if (y_time.n_cols % sym != 0)
    throw std::invalid_argument("ofdm_demodulate: length is not a whole number of symbols");
  const int tau = static_cast<int>(y_time.n_cols) / sym;
  arma::cx_mat out(static_cast<arma::uword>(tau) * n_subcarriers, y_time.n_rows);
  for (int t = 0; t < tau; ++t) {
    const arma::uword start = static_cast<arma::uword>(t) * sym + cp_len;
    // (streams x N) block -> DFT along time for each stream
    arma::cx_mat block = y_time.cols(start, start + n_subcarriers - 1).st();  // N x streams
    block = arma::fft(block) / std::sqrt(static_cast<double>(n_subcarriers));
    out.rows(static_cast<arma::uword>(t) * n_subcarriers,
             static_cast<arma::uword>(t + 1) * n_subcarriers - 1) = block;
  }
  return out;
}

arma::cx_mat ofdm_transmit_receive(const arma::cx_cube& freq_symbols, const arma::cx_cube& taps,
                                   int cp_len, const arma::cx_mat& noise_time,
                                   const arma::vec& rho, const arma::ivec& bits) {
  const int n = static_cast<int>(freq_symbols.n_rows);
  const int users = static_cast<int>(freq_symbols.n_cols);
  const int tau = static_cast<int>(freq_symbols.n_slices);
  const int d_len = static_cast<int>(taps.n_cols);
  const int total = tau * (n + cp_len);

  // Serialized per-user transmit waveform with zero warmup for the tap memory.
  arma::cx_mat x(users, static_cast<arma::uword>(d_len - 1 + total), arma::fill::zeros);
  for (int k = 0; k < users; ++k) {
    arma::cx_mat freq(n, tau);
    for (int t = 0; t < tau; ++t) freq.col(t) = freq_symbols.slice(t).col(k);
    x.row(k).subvec(d_len - 1, d_len - 1 + total - 1) = ofdm_modulate(freq, cp_len).st();
  }

  arma::cx_mat y = apply_taps(taps, x, d_len - 1, total);
  if (!noise_time.is_empty()) y += noise_time;
  if (!bits.is_empty()) {
    for (arma::uword i = 0; i < y.n_rows; ++i)
      y.row(i) = quantize(arma::cx_rowvec(y.row(i)), rho(i), static_cast<int>(bits(i)));
  }
  return ofdm_demodulate(y, n, cp_len);
}

arma::cx_mat ofdm_ls_estimate(const arma::cx_mat& y_freq, const OfdmPilots& pilots) {
  const arma::cx_mat x = ofdm_pilot_matrix(pilots);
  if (y_freq.n_rows != x.n_rows)
    throw std::invalid_argument("ofdm_ls_estimate: stacked observation length mismatch");
  return (x.t() * y_freq) / (pilots.power * pilots.tau_p() * pilots.n());
}

arma::cx_cube freq_channel(const arma::cx_cube& taps, int n_subcarriers) {
  const int streams = static_cast<int>(taps.n_rows);
  const int d_len = static_cast<int>(taps.n_cols);
  const int users = static_cast<int>(taps.n_slices);
  arma::cx_mat dft_cols(d_len, n_subcarriers);
  for (int d = 0; d < d_len; ++d)
    for (int m = 0; m < n_subcarriers; ++m) {
      const double phase = -2.0 * M_PI * m * d / n_subcarriers;
      dft_cols(d, m) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
  arma::cx_cube h(streams, users, n_subcarriers);
  for (int k = 0; k < users; ++k) {
    const arma::cx_mat hk = taps.slice(k) * dft_cols;  // streams x N
    for (int m = 0; m < n_subcarriers; ++m) h.slice(m).col(k) = hk.col(m);
  }
  return h;
}

arma::mat ofdm_mmse_perfect_sinr(const arma::cx_cube& h_freq, double power,
                                 const arma::vec& noise_var) {
  const int users = static_cast<int>(h_freq.n_cols);
  const int n = static_cast<int>(h_freq.n_slices);
  const arma::cx_vec w_inv = arma::conv_to<arma::cx_vec>::from(1.0 / noise_var);
  arma::mat sinr(users, n);
  for (int m = 0; m < n; ++m) {
    const arma::cx_mat& h = h_freq.slice(m);
    const arma::cx_mat hw = h.each_col() % w_inv;
    const arma::cx_mat gram = h.t() * hw;  // K x K
    arma::cx_mat inner = gram;
    inner.diag() += std::complex<double>(1.0 / power, 0.0);
    const arma::cx_mat y = hpd_solve(inner, gram);
    for (int k = 0; k < users; ++k) {
      const double x =
          std::real(gram(k, k)) - std::real(arma::cdot(gram.col(k), y.col(k)));
      sinr(k, m) = power * x / (1.0 - power * x);
    }
  }
  return sinr;
}

arma::mat ofdm_mmse_estimated_sinr(const arma::cx_cube& h_true, const arma::cx_cube& h_est,
                                   double power, const arma::vec& noise_var) {
  const int users = static_cast<int>(h_true.n_cols);
  const int n = static_cast<int>(h_true.n_slices);
  const arma::cx_vec w_inv = arma::conv_to<arma::cx_vec>::from(1.0 / noise_var);
  arma::mat sinr(users, n);
  for (int m = 0; m < n; ++m) {
    const arma::cx_mat& ht = h_true.slice(m);
    const arma::cx_mat& he = h_est.slice(m);
    const arma::cx_mat hw = he.each_col() % w_inv;  // D^-1 Hhat
    arma::cx_mat inner = he.t() * hw;
    inner.diag() += std::complex<double>(1.0 / power, 0.0);
    // Beamformers u_k = D^-1 Hhat (I/P + Hhat^H D^-1 Hhat)^-1 e_k, one per user,
    // proportional to the MMSE solution built from the estimates.
    const arma::cx_mat w_mat = arma::trans(hpd_solve(inner, arma::cx_mat(hw.t())));
    const arma::cx_mat v = w_mat.t() * ht;  // v(k, k') = u_k^H h_true,k'
    for (int k = 0; k < users; ++k) {
      const double desired = power * std::norm(v(k, k));
      double interference = 0.0;
      for (int kk = 0; kk < users; ++kk)
        if (kk != k) interference += power * std::norm(v(k, kk));
      const double noise =
          std::real(arma::cdot(w_mat.col(k), w_mat.col(k) % arma::conv_to<arma::cx_vec>::from(
                                                                noise_var)));
      sinr(k, m) = desired / (interference + noise);
    }
  }
  return sinr;
}

arma::vec ofdm_rates(const arma::mat& sinr, int cp_len, double prefactor) {
  const int users = static_cast<int>(sinr.n_rows);
  const int n = static_cast<int>(sinr.n_cols);
  arma::vec rates(users);
  for (int k = 0; k < users; ++k) {
    double sum = 0.0;
    for (int m = 0; m < n; ++m) sum += std::log2(1.0 + sinr(k, m));
    rates(k) = prefactor * sum / (n + cp_len);
  }
  return rates;
}

}  // namespace lenscran
