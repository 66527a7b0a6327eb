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
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace lenscran {

/// Normalized sinc, sin(pi*x)/(pi*x), with sinc(0) = 1.
double sinc(double x);

/// Unitary forward DFT, X[n] = (1/sqrt(N)) * sum_m x[m] exp(-j*2*pi*n*m/N).
arma::cx_vec dft(const arma::cx_vec& x);

/// Unitary inverse DFT; idft(dft(x)) == x.
arma::cx_vec idft(const arma::cx_vec& x);

/// Solves A*x = b for Hermitian positive-definite A via Cholesky factorization.
/// Throws std::invalid_argument if A is not Hermitian (tolerance 1e-10 relative)
/// or dimensions disagree, and std::runtime_error if the factorization fails
/// (A not positive definite).
arma::cx_vec hpd_solve(const arma::cx_mat& A, const arma::cx_vec& b);

/// Multi-RHS variant of hpd_solve.
arma::cx_mat hpd_solve(const arma::cx_mat& A, const arma::cx_mat& B);

/// Unit-modulus Zadoff-Chu sequence with ideal periodic autocorrelation;
/// requires gcd(root, length) == 1. Even lengths use the n^2 phase profile,
/// odd lengths n*(n+1).
arma::cx_vec zadoff_chu(int length, int root);

/// Seeded, label-partitioned random stream. Identical (seed, label) pairs
/// reproduce the identical sample sequence on every run; distinct labels give
/// statistically independent streams. Substreams derive a child stream from
/// the parent's (seed, label) plus a suffix, so a whole experiment is keyed by
/// one 64-bit seed.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view label);

  /// Derives an independent child stream labelled "<label>/<suffix>".
  RandomStream substream(std::string_view suffix) const;

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer on {lo, ..., hi} (inclusive).
  int uniform_int(int lo, int hi);
  /// Standard normal via Box-Muller (implementation-pinned for cross-platform
  /// reproducibility; std::normal_distribution is not).
  double normal();
  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> cgauss(double variance);
  /// Matrix of i.i.d. CSCG entries with per-entry variance.
  arma::cx_mat cgauss_mat(arma::uword rows, arma::uword cols, double variance);
  /// Unit-modulus sample exp(j*U[0,2*pi)).
  std::complex<double> unit_phasor();

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

 private:
  std::uint64_t seed_;
  std::string label_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

}  // namespace lenscran
