// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <armadillo>
#include <complex>

#include "lenscran/numerics.hpp"

using namespace lenscran;

namespace {

// Independent oracle: plain Gauss-Jordan inversion with partial pivoting, no
// shared code with hpd_solve's Cholesky path.
arma::cx_mat gauss_jordan_inverse(arma::cx_mat a) {
  const arma::uword n = a.n_rows;
  arma::cx_mat inv = arma::eye<arma::cx_mat>(n, n);
  for (arma::uword col = 0; col < n; ++col) {
    arma::uword pivot = col;
    for (arma::uword r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    a.swap_rows(col, pivot);
    inv.swap_rows(col, pivot);
    const std::complex<double> d = a(col, col);
    a.row(col) /= d;
    inv.row(col) /= d;
    for (arma::uword r = 0; r < n; ++r) {
      if (r == col) continue;
      const std::complex<double> f = a(r, col);
      a.row(r) -= f * a.row(col);
      inv.row(r) -= f * inv.row(col);
    }
  }
  return inv;
}

arma::cx_vec random_cx_vec(RandomStream& rng, arma::uword n) {
  arma::cx_vec v(n);
  for (auto& x : v) x = rng.cgauss(1.0);
  return v;
}

arma::cx_mat random_hpd(RandomStream& rng, arma::uword n) {
  arma::cx_mat g(n, n);
  for (auto& x : g) x = rng.cgauss(1.0);
  return g.t() * g + arma::eye<arma::cx_mat>(n, n);
}

}  // namespace

TEST_CASE("sinc definition") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sinc(-3.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sinc(0.5) == doctest::Approx(2.0 / M_PI).epsilon(1e-14));
  CHECK(sinc(-0.5) == doctest::Approx(2.0 / M_PI).epsilon(1e-14));
}

TEST_CASE("dft convention and unitarity") {
  arma::cx_vec ones4(4, arma::fill::ones);
  const arma::cx_vec f = dft(ones4);
  CHECK(std::abs(f(0) - std::complex<double>(2.0, 0.0)) < 1e-14);
  for (int n = 1; n < 4; ++n) CHECK(std::abs(f(n)) < 1e-14);

  arma::cx_vec delta(4, arma::fill::zeros);
  delta(0) = 1.0;
  const arma::cx_vec fd = dft(delta);
  for (int n = 0; n < 4; ++n) CHECK(std::abs(fd(n) - std::complex<double>(0.5, 0.0)) < 1e-14);

  // Forward sign: delta at index 1 carries phase exp(-j*2*pi*n/N).
  arma::cx_vec d1(4, arma::fill::zeros);
  d1(1) = 1.0;
  const arma::cx_vec f1 = dft(d1);
  CHECK(std::abs(f1(1) - 0.5 * std::exp(std::complex<double>(0, -M_PI / 2.0))) < 1e-14);

  RandomStream rng(7, "dft");
  const arma::cx_vec x = random_cx_vec(rng, 8);
  CHECK(arma::norm(idft(dft(x)) - x) / arma::norm(x) < 1e-12);
  for (arma::uword n : {1u, 2u, 5u, 64u, 1024u}) {
    const arma::cx_vec y = random_cx_vec(rng, n);
    CHECK(arma::norm(dft(y)) == doctest::Approx(arma::norm(y)).epsilon(1e-12));
  }
  CHECK_THROWS(dft(arma::cx_vec{}));
}

TEST_CASE("hpd_solve basics") {
  const arma::cx_mat eye = arma::eye<arma::cx_mat>(3, 3);
  RandomStream rng(11, "hpd");
  const arma::cx_vec b = random_cx_vec(rng, 3);
  CHECK(arma::norm(hpd_solve(eye, b) - b) < 1e-14);

  arma::cx_mat d(2, 2, arma::fill::zeros);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  const arma::cx_vec rhs{std::complex<double>(2.0, 0.0), std::complex<double>(4.0, 0.0)};
  const arma::cx_vec x = hpd_solve(d, rhs);
  CHECK(std::abs(x(0) - 1.0) < 1e-14);
  CHECK(std::abs(x(1) - 1.0) < 1e-14);
}

TEST_CASE("hpd_solve matches an elimination oracle on a random 8x8 instance") {
  RandomStream rng(13, "hpd-oracle");
  const arma::cx_mat a = random_hpd(rng, 8);
  const arma::cx_vec b = random_cx_vec(rng, 8);
  const arma::cx_vec x = hpd_solve(a, b);
  const arma::cx_vec x_oracle = gauss_jordan_inverse(a) * b;
  CHECK(arma::norm(x - x_oracle) / arma::norm(x_oracle) < 1e-8);
  CHECK(arma::norm(a * x - b) / arma::norm(b) < 1e-8);
}

TEST_CASE("hpd_solve residual bound over 1000 random instances") {
  RandomStream rng(17, "hpd-batch");
  for (int trial = 0; trial < 1000; ++trial) {
    const arma::uword n = 2 + trial % 7;
    const arma::cx_mat a = random_hpd(rng, n);
    const arma::cx_vec b = random_cx_vec(rng, n);
    const arma::cx_vec x = hpd_solve(a, b);
    REQUIRE(arma::norm(a * x - b) / arma::norm(b) < 1e-8);
  }
}

TEST_CASE("hpd_solve rejects bad inputs") {
  arma::cx_mat nonherm(2, 2, arma::fill::zeros);
  nonherm(0, 1) = 1.0;
  CHECK_THROWS_AS(hpd_solve(nonherm, arma::cx_vec(2, arma::fill::ones)),
                  std::invalid_argument);

  arma::cx_mat negdef = -arma::eye<arma::cx_mat>(2, 2);
  CHECK_THROWS_AS(hpd_solve(negdef, arma::cx_vec(2, arma::fill::ones)), std::runtime_error);

  CHECK_THROWS_AS(hpd_solve(arma::eye<arma::cx_mat>(2, 2), arma::cx_vec(3, arma::fill::ones)),
                  std::invalid_argument);
}

TEST_CASE("zadoff_chu has ideal periodic autocorrelation") {
  for (int len : {63, 126, 256}) {
    const arma::cx_vec s = zadoff_chu(len, len - 1);
    for (int n = 0; n < len; ++n) CHECK(std::abs(s(n)) == doctest::Approx(1.0).epsilon(1e-12));
    for (int tau = 1; tau < len; ++tau) {
      std::complex<double> acc = 0.0;
      for (int n = 0; n < len; ++n) acc += s(n) * std::conj(s(((n - tau) % len + len) % len));
      CHECK(std::abs(acc) < 1e-9);
    }
  }
  CHECK_THROWS(zadoff_chu(64, 2));  // shared factor
}

TEST_CASE("random streams reproduce and separate") {
  RandomStream a(42, "drop-17/channel");
  RandomStream b(42, "drop-17/channel");
  for (int i = 0; i < 1000; ++i) REQUIRE(a.uniform() == b.uniform());

  RandomStream c(42, "drop-17/noise");
  RandomStream d(42, "drop-17/channel");
  int same = 0;
  for (int i = 0; i < 1000; ++i)
    if (c.uniform() == d.uniform()) ++same;
  CHECK(same == 0);

  RandomStream parent(42, "drop-17");
  RandomStream child = parent.substream("channel");
  RandomStream direct(42, "drop-17/channel");
  for (int i = 0; i < 100; ++i) REQUIRE(child.uniform() == direct.uniform());
}

TEST_CASE("random stream moments") {
  RandomStream rng(5, "moments");
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));

  double p = 0.0;
  for (int i = 0; i < n; ++i) p += std::norm(rng.cgauss(2.5));
  CHECK(p / n == doctest::Approx(2.5).epsilon(0.03));

  int lo = 0;
  for (int i = 0; i < n; ++i)
    if (rng.uniform_int(1, 3) == 1) ++lo;
  CHECK(static_cast<double>(lo) / n == doctest::Approx(1.0 / 3).epsilon(0.05));
}
