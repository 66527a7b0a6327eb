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
#include <iosfwd>
#include <vector>

#include "lenscran/arrays.hpp"
#include "lenscran/numerics.hpp"

namespace lenscran {

/// Scenario parameters for one Monte-Carlo cluster: RRHs at the corners of a
/// hexagonal region, users dropped uniformly inside it, a geometric multipath
/// channel per (RRH, user) pair.
struct ScenarioConfig {
  int rrh_count = 6;
  int user_count = 6;
  int sectors_per_rrh = 3;
  double hex_side_m = 50.0 / 1.7320508075688772;  // 50/sqrt(3)
  double rrh_height_m = 30.0;
  double user_height_min_m = 1.0;
  double user_height_max_m = 25.0;
  double min_ground_distance_m = 2.0;
  double carrier_hz = 28e9;
  double bandwidth_hz = 200e6;
  double delay_truncation_s = 100e-9;
  int path_count_max = 3;  // L uniform on {1, ..., path_count_max}
  double delay_mean_s = 0.25 * 67e-9;  // r_zeta * mu_zeta
  double path_decay_time_s = 31.4e-9;
  double path_power_offset = 0.613;
  double shadowing_std_db = 9.4;
  double elev_spread_rad = M_PI / 12.0;  // half-width of uniform perturbation
  double azim_spread_rad = M_PI / 6.0;
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 6.0;
  double intersector_dbm = -80.0;
  double tx_power_w = dbm_to_watt(23.0);
  // Array apertures (wavelengths) and lens coverage.
  double aperture_y = 10.0;
  double aperture_z = 10.0;
  double lens_theta_minus = M_PI / 6.0;
  double lens_theta_plus = M_PI / 2.0;
  double lens_phi = M_PI / 3.0;
  /// Mechanical downtilt of every sector boresight. Arrival angles are
  /// expressed in the tilted frame, so the elevation window
  /// [-theta_minus, theta_plus] spans horizon-to-below-mast when the tilt
  /// equals theta_minus.
  double sector_downtilt_rad = M_PI / 6.0;

  /// Maximum channel tap delay in symbols, ceil(delay_truncation * W).
  int d_max() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Free-space path loss in dB for a 3-D distance in meters.
double path_loss_db(double distance_m);

/// Total per-antenna noise floor in watts: thermal PSD * W * noise figure plus
/// the constant inter-sector interference, added in linear scale.
double noise_floor(const ScenarioConfig& cfg);

struct Path {
  std::complex<double> gain;  // alpha
  int delay = 0;              // symbols, in {0, ..., d_max}
  double theta = 0.0;         // elevation angle of arrival, radians
  double phi = 0.0;           // azimuth angle of arrival w.r.t. sector boresight
};

/// Multipath sets for every (RRH m, user k) pair of one drop.
struct PathSet {
  // paths[m][k]
  std::vector<std::vector<std::vector<Path>>> paths;

  const std::vector<Path>& at(int m, int k) const { return paths[m][k]; }
};

struct DropGeometry {
  arma::mat rrh_xy;        // 2 x M
  arma::vec rrh_height;    // M
  arma::mat user_xy;       // 2 x K
  arma::vec user_height;   // K
  arma::mat boresight_xy;  // 2 x M, unit vectors toward the region center
};

struct Drop {
  DropGeometry geometry;
  PathSet paths;
  /// Received power P_r after path loss at the configured transmit power;
  /// per-path gains satisfy sum_l |alpha_l|^2 = P_r.
  double received_power_w(int m, int k) const;
  std::vector<std::vector<double>> rx_power_w;  // [m][k]
};

/// Draws one scenario realization: users uniform in the hexagon (respecting
/// the minimum ground distance to every RRH), then per (m, k) the path count,
/// delays, relative powers, phases and angles. Throws std::runtime_error if
/// the geometry cannot be satisfied after max_retries redraws per user.
Drop generate_drop(const ScenarioConfig& cfg, RandomStream rng, int max_retries = 1000);

/// Flattens the paths of one (m, k) pair onto the symbol-spaced tap grid for a
/// subset of antennas: taps(i, d) accumulates gain * response over the paths
/// with delay d. `antenna_rows` selects rows of the per-path response.
arma::cx_mat stream_taps(const std::vector<Path>& paths, const LensGeometry& geom,
                         const std::vector<int>& antenna_rows, int d_max);
arma::cx_mat stream_taps(const std::vector<Path>& paths, const UpaGeometry& geom,
                         const std::vector<int>& antenna_rows, int d_max);

/// Per-path complex channel coefficients over all antennas: column l is
/// gain_l * a(theta_l, phi_l). Lens responses are real; stored complex for a
/// uniform interface with the UPA.
arma::cx_mat path_coefficients(const std::vector<Path>& paths, const LensGeometry& geom);
arma::cx_mat path_coefficients(const std::vector<Path>& paths, const UpaGeometry& geom);

/// Accumulates per-path coefficients into a (Q x d_max+1) tap matrix.
arma::cx_mat taps_from_coefficients(const arma::cx_mat& coeff, const std::vector<Path>& paths,
                                    int d_max);

/// Tap delay of each antenna's maximum-gain path (ties keep the smaller path
/// index). `coeff` holds one per-path coefficient column per path.
arma::ivec strongest_path_delay(const arma::cx_mat& coeff, const std::vector<Path>& paths);

/// Time-domain receive convolution. taps is (streams x d_max+1 x users), x is
/// (users x warmup + n_out) with column (warmup + n) carrying time index n;
/// returns y (streams x n_out) with y(i,n) = sum_{k,d} taps(i,d,k) x(k,n-d).
/// Requires warmup >= d_max so every index is in range.
arma::cx_mat apply_taps(const arma::cx_cube& taps, const arma::cx_mat& x, int warmup, int n_out);

/// Writes a plain-text dump of user positions and per-pair path lists.
void dump_drop(std::ostream& os, const ScenarioConfig& cfg, const Drop& drop, int drop_index);

}  // namespace lenscran
