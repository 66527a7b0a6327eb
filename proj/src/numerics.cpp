// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "lenscran/numerics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lenscran {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

arma::cx_vec dft(const arma::cx_vec& x) {
  if (x.n_elem < 1) throw std::invalid_argument("dft: length must be >= 1");
  return arma::fft(x) / std::sqrt(static_cast<double>(x.n_elem));
}

arma::cx_vec idft(const arma::cx_vec& x) {
  if (x.n_elem < 1) throw std::invalid_argument("idft: length must be >= 1");
  return arma::ifft(x) * std::sqrt(static_cast<double>(x.n_elem));
}

namespace {

void check_hermitian(const arma::cx_mat& A) {
  if (A.n_rows != A.n_cols) throw std::invalid_argument("hpd_solve: A must be square");
  const double scale = arma::norm(A, "fro");
  const double dev = arma::norm(A - A.t(), "fro");
  if (scale > 0.0 && dev > 1e-10 * scale)
    throw std::invalid_argument("hpd_solve: A is not Hermitian within tolerance");
}

arma::cx_mat chol_factor(const arma::cx_mat& A) {
  arma::cx_mat R;
  if (!arma::chol(R, A))
    throw std::runtime_error("hpd_solve: A is not positive definite");
  return R;
}

}  // namespace

arma::cx_vec hpd_solve(const arma::cx_mat& A, const arma::cx_vec& b) {
  check_hermitian(A);
  if (A.n_rows != b.n_elem) throw std::invalid_argument("hpd_solve: dimension mismatch");
  const arma::cx_mat R = chol_factor(A);
  return arma::solve(arma::trimatu(R), arma::solve(arma::trimatl(R.t()), b));
}

arma::cx_mat hpd_solve(const arma::cx_mat& A, const arma::cx_mat& B) {
  check_hermitian(A);
  if (A.n_rows != B.n_rows) throw std::invalid_argument("hpd_solve: dimension mismatch");
  const arma::cx_mat R = chol_factor(A);
  return arma::solve(arma::trimatu(R), arma::solve(arma::trimatl(R.t()), B));
}

arma::cx_vec zadoff_chu(int length, int root) {
  if (length < 1) throw std::invalid_argument("zadoff_chu: length must be >= 1");
  if (std::gcd(root, length) != 1)
    throw std::invalid_argument("zadoff_chu: root must be coprime with the length");
  arma::cx_vec s(length);
  for (int n = 0; n < length; ++n) {
    const long long num = (length % 2 == 0) ? static_cast<long long>(n) * n
                                            : static_cast<long long>(n) * (n + 1);
    const double phase = -M_PI * root * static_cast<double>(num % (2LL * length)) / length;
    s(n) = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return s;
}

namespace {

// FNV-1a, pinned here so stream derivation never depends on std::hash.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::string_view label)
    : seed_(seed), label_(label) {
  engine_.seed(splitmix64(seed ^ fnv1a(label_)));
}

RandomStream RandomStream::substream(std::string_view suffix) const {
  std::string child = label_;
  child += '/';
  child += suffix;
  return RandomStream(seed_, child);
}

double RandomStream::uniform() {
  // 53 random mantissa bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int RandomStream::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

double RandomStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_normal_ = r * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

std::complex<double> RandomStream::cgauss(double variance) {
  const double s = std::sqrt(variance / 2.0);
  return {s * normal(), s * normal()};
}

arma::cx_mat RandomStream::cgauss_mat(arma::uword rows, arma::uword cols, double variance) {
  arma::cx_mat out(rows, cols);
  for (arma::uword c = 0; c < cols; ++c)
    for (arma::uword r = 0; r < rows; ++r) out(r, c) = cgauss(variance);
  return out;
}

std::complex<double> RandomStream::unit_phasor() {
  const double p = uniform(0.0, 2.0 * M_PI);
  return {std::cos(p), std::sin(p)};
}

}  // namespace lenscran
