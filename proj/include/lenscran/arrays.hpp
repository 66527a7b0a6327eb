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

/// Antenna placement rule for the lens focal surface.
///
/// `inclusive` applies the index ranges verbatim: q_a runs over
/// {-floor(Dy cos(theta_qe) sin(Phi-)), ..., +floor(Dy cos(theta_qe) sin(Phi+))},
/// i.e. 2L+1 elements per elevation row when Phi- == Phi+.
/// `trimmed` drops the +azimuth endpoint of every row (2L elements per row),
/// which reproduces the reference element count of 208 for the 10x10 aperture
/// with Theta in [-pi/6, pi/2] and Phi = +-pi/3; it is the default.
enum class LensEnumeration { inclusive, trimmed };

struct LensElement {
  int q_e;  // elevation index, sin(theta_qe) = q_e / D_z
  int q_a;  // azimuth index, sin(phi_qa) = q_a / (D_y cos(theta_qe))
};

/// Full-dimensional lens antenna array: electromagnetic lens of aperture
/// d_y x d_z (in wavelengths) with elements on the focal surface, enumerated
/// row-major by q_e then q_a.
struct LensGeometry {
  double d_y = 0.0;
  double d_z = 0.0;
  double theta_minus = 0.0;  // elevation coverage, radians, in (0, pi/2]
  double theta_plus = 0.0;
  double phi_minus = 0.0;  // azimuth coverage, radians, in (0, pi/2]
  double phi_plus = 0.0;
  std::vector<LensElement> elements;

  int size() const { return static_cast<int>(elements.size()); }
};

LensGeometry enumerate_lens_elements(double d_y, double d_z, double theta_minus,
                                     double theta_plus, double phi_minus, double phi_plus,
                                     LensEnumeration convention = LensEnumeration::trimmed);

/// Amplitude response of every lens element to a plane wave from (theta, phi):
/// a_q = sqrt(Dz*Dy) * sinc(q_e - Dz sin(theta)) * sinc(q_a - Dy cos(theta) sin(phi)).
/// Angles outside the coverage are not rejected; the response simply decays.
arma::vec lens_response(const LensGeometry& geom, double theta, double phi);

/// Uniform planar array with half-wavelength element spacing in the y-z plane.
/// q_y = floor(2*d_y) elements along y, q_z = floor(2*d_z) along z.
struct UpaGeometry {
  double d_y = 0.0;
  double d_z = 0.0;
  int q_y = 0;
  int q_z = 0;

  int size() const { return q_y * q_z; }
};

UpaGeometry make_upa(double d_y, double d_z);

/// UPA response a_z(theta) kron a_y(theta, phi). Element (m_z, m_y) sits at
/// flat index m_z*q_y + m_y with phase pi*(m_z sin(theta) + m_y cos(theta) sin(phi))
/// and amplitude sqrt(d_z/q_z) * sqrt(d_y/q_y); the squared norm is d_y*d_z.
arma::cx_vec upa_response(const UpaGeometry& geom, double theta, double phi);

}  // namespace lenscran
