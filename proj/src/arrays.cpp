// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "lenscran/arrays.hpp"

#include <cmath>
#include <stdexcept>

#include "lenscran/numerics.hpp"

namespace lenscran {

LensGeometry enumerate_lens_elements(double d_y, double d_z, double theta_minus,
                                     double theta_plus, double phi_minus, double phi_plus,
                                     LensEnumeration convention) {
  if (d_y <= 0.0 || d_z <= 0.0)
    throw std::invalid_argument("enumerate_lens_elements: apertures must be positive");
  const double half_pi = M_PI / 2.0;
  for (double a : {theta_minus, theta_plus, phi_minus, phi_plus})
    if (a <= 0.0 || a > half_pi + 1e-12)
      throw std::invalid_argument("enumerate_lens_elements: coverage angles must be in (0, pi/2]");

  LensGeometry g;
  g.d_y = d_y;
  g.d_z = d_z;
  g.theta_minus = theta_minus;
  g.theta_plus = theta_plus;
  g.phi_minus = phi_minus;
  g.phi_plus = phi_plus;

  // floor() with a tolerance so grid bounds like Dz*sin(pi/6) = 4.999...9
  // land on the intended integer.
  const auto grid_floor = [](double x) { return static_cast<int>(std::floor(x + 1e-9)); };
  const int qe_lo = -grid_floor(d_z * std::sin(theta_minus));
  const int qe_hi = grid_floor(d_z * std::sin(theta_plus));
  for (int qe = qe_lo; qe <= qe_hi; ++qe) {
    const double sin_e = static_cast<double>(qe) / d_z;
    const double cos_e = std::sqrt(std::max(0.0, 1.0 - sin_e * sin_e));
    const int qa_lo = -grid_floor(d_y * cos_e * std::sin(phi_minus));
    int qa_hi = grid_floor(d_y * cos_e * std::sin(phi_plus));
    if (convention == LensEnumeration::trimmed) qa_hi -= 1;
    for (int qa = qa_lo; qa <= qa_hi; ++qa) g.elements.push_back({qe, qa});
  }
  return g;
}

arma::vec lens_response(const LensGeometry& geom, double theta, double phi) {
  const double u = geom.d_z * std::sin(theta);
  const double v = geom.d_y * std::cos(theta) * std::sin(phi);
  const double amp = std::sqrt(geom.d_z * geom.d_y);
  arma::vec a(geom.elements.size());
  for (std::size_t q = 0; q < geom.elements.size(); ++q) {
    const auto& el = geom.elements[q];
    a(q) = amp * sinc(el.q_e - u) * sinc(el.q_a - v);
  }
  return a;
}

UpaGeometry make_upa(double d_y, double d_z) {
  if (d_y <= 0.0 || d_z <= 0.0) throw std::invalid_argument("make_upa: apertures must be positive");
  UpaGeometry g;
  g.d_y = d_y;
  g.d_z = d_z;
  g.q_y = static_cast<int>(std::floor(2.0 * d_y));
  g.q_z = static_cast<int>(std::floor(2.0 * d_z));
  if (g.q_y < 1 || g.q_z < 1) throw std::invalid_argument("make_upa: aperture too small");
  return g;
}

arma::cx_vec upa_response(const UpaGeometry& geom, double theta, double phi) {
  const double pz = M_PI * std::sin(theta);
  const double py = M_PI * std::cos(theta) * std::sin(phi);
  const double amp = std::sqrt(geom.d_z / geom.q_z) * std::sqrt(geom.d_y / geom.q_y);
  arma::cx_vec a(static_cast<arma::uword>(geom.size()));
  for (int mz = 0; mz < geom.q_z; ++mz) {
    for (int my = 0; my < geom.q_y; ++my) {
      const double phase = pz * mz + py * my;
      a(static_cast<arma::uword>(mz) * geom.q_y + my) = amp * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return a;
}

}  // namespace lenscran
