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
#include <vector>

namespace lenscran {

/// Mean received power per antenna from probing samples, rho_q = mean |y_q[n]|^2.
/// `samples` holds one antenna per row. Throws on empty input.
arma::vec probe_power(const arma::cx_mat& samples);

/// Water-filling solution of the relaxed bit-allocation problem
///   minimize sum_q 3*rho_q / 4^{b_q}  s.t.  sum_q b_q <= budget, b_q >= 0,
/// namely b_q = max(0.5*log2(6*rho_q*ln2 / lambda), 0) with the multiplier
/// found by bisection on [0, 6*rho_max*ln2].
struct RelaxedAllocation {
  arma::vec bits;    // real-valued allocation
  double lambda = 0.0;
  int iterations = 0;
};

RelaxedAllocation solve_relaxed_allocation(const arma::vec& rho, double budget_bits,
                                           double tol = 1e-9);

/// Integer allocation from rounding the relaxed one: a threshold beta in [0,1]
/// (found by bisection) floors fractional parts <= beta and ceils the rest;
/// antennas with a zero relaxed allocation stay at zero. The result always
/// satisfies sum_q b_q <= budget.
struct BitAllocation {
  arma::ivec bits;             // integer bits per antenna
  std::vector<int> selected;   // indices with bits > 0, ascending
  double beta = 0.0;

  int total_bits() const { return static_cast<int>(arma::accu(bits)); }
};

BitAllocation round_allocation(const arma::vec& relaxed_bits, double budget_bits,
                               double tol = 1e-9);

/// Quantization-noise variance model for b >= 1 bits per real dimension on a
/// signal of mean power rho: eps^2 = 3*rho/4^b.
double quantization_noise_variance(double rho, int bits);

/// Uniform scalar quantization of the real and imaginary parts with 2^b levels
/// of a mid-rise grid spanning [-3*sqrt(rho/2), +3*sqrt(rho/2)] per dimension.
/// By default the grid is not saturated (values beyond the nominal range keep
/// the same step), which makes the empirical error variance track the model
/// eps^2 = 3*rho/4^b at every resolution; with `saturate` set, out-of-range
/// values clip to the outermost level and the overload error dominates the
/// model for b >= 5. Requires b >= 1 and rho > 0 (b == 0 means the stream is
/// dropped, not quantized).
std::complex<double> quantize(std::complex<double> y, double rho, int bits,
                              bool saturate = false);

/// Element-wise quantization of one antenna's sample row.
arma::cx_rowvec quantize(const arma::cx_rowvec& y, double rho, int bits, bool saturate = false);

}  // namespace lenscran
