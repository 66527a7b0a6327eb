// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "lenscran/quantizer.hpp"

#include <cmath>
#include <stdexcept>

namespace lenscran {

arma::vec probe_power(const arma::cx_mat& samples) {
  if (samples.n_elem == 0) throw std::invalid_argument("probe_power: empty input");
  arma::vec rho(samples.n_rows);
  for (arma::uword q = 0; q < samples.n_rows; ++q)
    rho(q) = arma::mean(arma::square(arma::abs(samples.row(q))));
  return rho;
}

namespace {

constexpr double kLn2 = 0.6931471805599453;

double relaxed_bits_sum(const arma::vec& rho, double lambda, arma::vec* bits) {
  double sum = 0.0;
  for (arma::uword q = 0; q < rho.n_elem; ++q) {
    double b = 0.0;
    if (rho(q) > 0.0 && lambda > 0.0) {
      b = std::max(0.5 * std::log2(6.0 * rho(q) * kLn2 / lambda), 0.0);
    } else if (rho(q) > 0.0) {
      b = std::numeric_limits<double>::infinity();
    }
    if (bits) (*bits)(q) = b;
    sum += b;
  }
  return sum;
}

}  // namespace

RelaxedAllocation solve_relaxed_allocation(const arma::vec& rho, double budget_bits,
                                           double tol) {
  if (budget_bits <= 0.0)
    throw std::invalid_argument("solve_relaxed_allocation: budget must be positive");
  const double rho_max = rho.empty() ? 0.0 : rho.max();
  if (rho_max <= 0.0)
    throw std::invalid_argument("solve_relaxed_allocation: no antenna with positive power");

  double lo = 0.0;
  double hi = 6.0 * rho_max * kLn2;
  // At lambda = hi every b_q is 0 <= budget; at lambda -> 0 the sum diverges.
  RelaxedAllocation out;
  out.bits.set_size(rho.n_elem);
  int iters = 0;
  // Bisect until the interval no longer moves the bit sum; the cap matches the
  // advertised iteration bound for tol down to ~1e-15 relative.
  const double interval_tol = std::max(hi * 1e-15, std::numeric_limits<double>::min());
  while (hi - lo > interval_tol && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    const double sum = relaxed_bits_sum(rho, mid, nullptr);
    if (sum <= budget_bits)
      hi = mid;
    else
      lo = mid;
    ++iters;
    if (std::abs(sum - budget_bits) <= tol && sum <= budget_bits) break;
  }
  out.lambda = hi;
  out.iterations = iters;
  relaxed_bits_sum(rho, out.lambda, &out.bits);

  // Polish: with the active set fixed, the multiplier meeting the budget with
  // equality has a closed form; a few passes pin sum(bits) to the budget at
  // machine precision (the set can change between passes).
  for (int pass = 0; pass < 8; ++pass) {
    double log2_sum = 0.0;
    int active = 0;
    for (arma::uword q = 0; q < rho.n_elem; ++q) {
      if (out.bits(q) > 0.0) {
        log2_sum += std::log2(6.0 * rho(q) * kLn2);
        ++active;
      }
    }
    if (active == 0) break;
    const double lambda = std::exp2((log2_sum - 2.0 * budget_bits) / active);
    arma::vec bits(rho.n_elem);
    const double sum = relaxed_bits_sum(rho, lambda, &bits);
    if (sum > budget_bits + tol) break;  // keep the feasible bisection endpoint
    bool same_set = true;
    for (arma::uword q = 0; q < rho.n_elem; ++q)
      if ((bits(q) > 0.0) != (out.bits(q) > 0.0)) same_set = false;
    out.lambda = lambda;
    out.bits = bits;
    if (same_set) break;
  }
  return out;
}

BitAllocation round_allocation(const arma::vec& relaxed_bits, double budget_bits, double tol) {
  const arma::uword n = relaxed_bits.n_elem;
  auto rounded = [&](double beta, arma::ivec* bits) {
    long long sum = 0;
    for (arma::uword q = 0; q < n; ++q) {
      long long b = 0;
      if (relaxed_bits(q) > 0.0) {
        const double fl = std::floor(relaxed_bits(q));
        const double frac = relaxed_bits(q) - fl;
        b = static_cast<long long>(fl) + (frac <= beta ? 0 : 1);
      }
      if (bits) (*bits)(q) = b;
      sum += b;
    }
    return sum;
  };

  double lo = 0.0, hi = 1.0;  // beta = 1 floors everything, always feasible
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (static_cast<double>(rounded(mid, nullptr)) <= budget_bits)
      hi = mid;
    else
      lo = mid;
  }

  BitAllocation out;
  out.beta = hi;
  out.bits.set_size(n);
  rounded(hi, &out.bits);
  for (arma::uword q = 0; q < n; ++q)
    if (out.bits(q) > 0) out.selected.push_back(static_cast<int>(q));
  return out;
}

double quantization_noise_variance(double rho, int bits) {
  return 3.0 * rho / std::pow(4.0, bits);
}

namespace {

double quantize_dim(double v, double step, double clip, bool saturate) {
  double q = step * (std::floor(v / step) + 0.5);
  if (saturate) q = std::clamp(q, -clip, clip);
  return q;
}

}  // namespace

std::complex<double> quantize(std::complex<double> y, double rho, int bits, bool saturate) {
  if (bits < 1) throw std::invalid_argument("quantize: bits must be >= 1 (0 drops the stream)");
  if (rho <= 0.0) throw std::invalid_argument("quantize: rho must be positive");
  const double range = 3.0 * std::sqrt(rho / 2.0);
  const double step = 2.0 * range / std::exp2(bits);
  const double outermost = range - step / 2.0;
  return {quantize_dim(y.real(), step, outermost, saturate),
          quantize_dim(y.imag(), step, outermost, saturate)};
}

arma::cx_rowvec quantize(const arma::cx_rowvec& y, double rho, int bits, bool saturate) {
  arma::cx_rowvec out(y.n_elem);
  for (arma::uword n = 0; n < y.n_elem; ++n) out(n) = quantize(y(n), rho, bits, saturate);
  return out;
}

}  // namespace lenscran
