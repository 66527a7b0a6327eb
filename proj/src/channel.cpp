// SPDX-License-Identifier: Apache-2.0
//
// lenscran - uplink mmWave C-RAN link-level simulator with lens antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "lenscran/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lenscran {

int ScenarioConfig::d_max() const {
  return static_cast<int>(std::ceil(delay_truncation_s * bandwidth_hz));
}

void ScenarioConfig::validate() const {
  auto fail = [](const char* field) {
    throw std::invalid_argument(std::string("scenario.") + field + ": invalid value");
  };
  if (rrh_count < 1) fail("rrh_count");
  if (user_count < 1) fail("user_count");
  if (sectors_per_rrh < 1) fail("sectors_per_rrh");
  if (sectors_per_rrh * rrh_count < user_count) fail("user_count (J*M >= K required)");
  if (hex_side_m <= 0.0) fail("hex_side_m");
  if (rrh_height_m <= user_height_max_m) fail("rrh_height_m (must exceed user heights)");
  if (user_height_min_m <= 0.0 || user_height_max_m < user_height_min_m) fail("user_height");
  if (min_ground_distance_m < 0.0) fail("min_ground_distance_m");
  if (bandwidth_hz <= 0.0) fail("bandwidth_hz");
  if (delay_truncation_s <= 0.0) fail("delay_truncation_s");
  if (path_count_max < 1) fail("path_count_max");
  if (delay_mean_s <= 0.0) fail("delay_mean_s");
  if (tx_power_w <= 0.0) fail("tx_power_w");
  if (aperture_y <= 0.0 || aperture_z <= 0.0) fail("aperture");
}

double path_loss_db(double distance_m) { return 61.4 + 34.1 * std::log10(distance_m); }

double noise_floor(const ScenarioConfig& cfg) {
  const double thermal_dbm =
      cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz) + cfg.noise_figure_db;
  return dbm_to_watt(thermal_dbm) + dbm_to_watt(cfg.intersector_dbm);
}

namespace {

bool inside_hexagon(double x, double y, double side) {
  // Regular hexagon with vertices at angles 0, 60, ..., 300 degrees.
  for (int j = 0; j < 6; ++j) {
    const double a0 = M_PI / 3.0 * j;
    const double a1 = M_PI / 3.0 * (j + 1);
    const double ex = side * std::cos(a1) - side * std::cos(a0);
    const double ey = side * std::sin(a1) - side * std::sin(a0);
    const double px = x - side * std::cos(a0);
    const double py = y - side * std::sin(a0);
    if (ex * py - ey * px < 0.0) return false;
  }
  return true;
}

}  // namespace

double Drop::received_power_w(int m, int k) const { return rx_power_w[m][k]; }

Drop generate_drop(const ScenarioConfig& cfg, RandomStream rng, int max_retries) {
  cfg.validate();
  const int m_count = cfg.rrh_count;
  const int k_count = cfg.user_count;
  const int dmax = cfg.d_max();

  Drop drop;
  auto& g = drop.geometry;
  g.rrh_xy.set_size(2, m_count);
  g.rrh_height.set_size(m_count);
  g.boresight_xy.set_size(2, m_count);
  for (int m = 0; m < m_count; ++m) {
    const double ang = 2.0 * M_PI * m / m_count;
    g.rrh_xy(0, m) = cfg.hex_side_m * std::cos(ang);
    g.rrh_xy(1, m) = cfg.hex_side_m * std::sin(ang);
    g.rrh_height(m) = cfg.rrh_height_m;
    const double n = std::hypot(g.rrh_xy(0, m), g.rrh_xy(1, m));
    g.boresight_xy(0, m) = -g.rrh_xy(0, m) / n;
    g.boresight_xy(1, m) = -g.rrh_xy(1, m) / n;
  }

  auto geo_rng = rng.substream("geometry");
  g.user_xy.set_size(2, k_count);
  g.user_height.set_size(k_count);
  for (int k = 0; k < k_count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < max_retries && !placed; ++attempt) {
      const double x = geo_rng.uniform(-cfg.hex_side_m, cfg.hex_side_m);
      const double y = geo_rng.uniform(-cfg.hex_side_m, cfg.hex_side_m);
      if (!inside_hexagon(x, y, cfg.hex_side_m)) continue;
      bool ok = true;
      for (int m = 0; m < m_count; ++m) {
        const double d = std::hypot(x - g.rrh_xy(0, m), y - g.rrh_xy(1, m));
        if (d < cfg.min_ground_distance_m) { ok = false; break; }
      }
      if (!ok) continue;
      g.user_xy(0, k) = x;
      g.user_xy(1, k) = y;
      g.user_height(k) = geo_rng.uniform(cfg.user_height_min_m, cfg.user_height_max_m);
      placed = true;
    }
    if (!placed)
      throw std::runtime_error("generate_drop: could not place user (min-distance violation)");
  }

  auto path_rng = rng.substream("paths");
  drop.paths.paths.assign(m_count, std::vector<std::vector<Path>>(k_count));
  drop.rx_power_w.assign(m_count, std::vector<double>(k_count, 0.0));
  const double trunc = cfg.delay_truncation_s;
  const double cdf_at_trunc = 1.0 - std::exp(-trunc / cfg.delay_mean_s);
  for (int m = 0; m < m_count; ++m) {
    for (int k = 0; k < k_count; ++k) {
      const double dx = g.user_xy(0, k) - g.rrh_xy(0, m);
      const double dy = g.user_xy(1, k) - g.rrh_xy(1, m);
      const double ground = std::hypot(dx, dy);
      const double dz = g.rrh_height(m) - g.user_height(k);
      const double dist3d = std::hypot(ground, dz);
      // Path gains carry the full received power P_r (transmit power times
      // path loss), while the transmit power P also scales the symbols in the
      // waveforms and SINR expressions. Both conventions come from the model
      // this simulator reproduces; see README on absolute-SNR calibration.
      const double p_rx = cfg.tx_power_w * std::pow(10.0, -path_loss_db(dist3d) / 10.0);
      drop.rx_power_w[m][k] = p_rx;

      // LoS direction in the downtilted sector frame. Unit arrival direction
      // (RRH toward user) with z measured downward:
      const double ux = dx / dist3d;
      const double uy = dy / dist3d;
      const double uz = dz / dist3d;
      const double bx = g.boresight_xy(0, m);
      const double by = g.boresight_xy(1, m);
      const double ct = std::cos(cfg.sector_downtilt_rad);
      const double st = std::sin(cfg.sector_downtilt_rad);
      // Frame: boresight (tilted), horizontal right, tilted down.
      const double along = ct * (bx * ux + by * uy) + st * uz;
      const double right = bx * uy - by * ux;
      const double down = -st * (bx * ux + by * uy) + ct * uz;
      const double theta_los = std::asin(std::clamp(down, -1.0, 1.0));
      const double phi_los = std::atan2(right, along);

      const int n_paths = path_rng.uniform_int(1, cfg.path_count_max);
      std::vector<double> zeta(n_paths), kappa(n_paths);
      double kappa_sum = 0.0;
      std::vector<Path> paths(n_paths);
      for (int l = 0; l < n_paths; ++l) {
        // Truncated exponential delay via inverse CDF.
        const double u = path_rng.uniform();
        zeta[l] = -cfg.delay_mean_s * std::log1p(-u * cdf_at_trunc);
        const double shadow_db = path_rng.normal() * cfg.shadowing_std_db;
        kappa[l] = std::pow(10.0, shadow_db / 10.0) * cfg.path_power_offset *
                   std::exp(-zeta[l] / cfg.path_decay_time_s);
        kappa_sum += kappa[l];
        const double phase = path_rng.uniform(0.0, 2.0 * M_PI);
        paths[l].gain = std::complex<double>(std::cos(phase), std::sin(phase));
        const int d = static_cast<int>(std::llround(zeta[l] * cfg.bandwidth_hz));
        paths[l].delay = std::clamp(d, 0, dmax);
        // Scatterers serving a sectorized link lie within the sector's angular
        // coverage: perturbations that would exit it are redrawn. Without
        // this, out-of-sector paths are captured at full gain by the
        // roll-off-free UPA response but not by the lens, which skews the
        // same-aperture comparison.
        const double half_pi = M_PI / 2.0 - 1e-9;
        const double th_lo = std::max(-cfg.lens_theta_minus, -half_pi);
        const double th_hi = std::min(cfg.lens_theta_plus, half_pi);
        const double ph_lo = std::max(-cfg.lens_phi, -half_pi);
        const double ph_hi = std::min(cfg.lens_phi, half_pi);
        auto draw_in = [&](double center, double spread, double lo, double hi) {
          for (int attempt = 0; attempt < 64; ++attempt) {
            const double a = center + path_rng.uniform(-spread, spread);
            if (a >= lo && a <= hi) return a;
          }
          return std::clamp(center, lo, hi);
        };
        paths[l].theta = draw_in(theta_los, cfg.elev_spread_rad, th_lo, th_hi);
        paths[l].phi = draw_in(phi_los, cfg.azim_spread_rad, ph_lo, ph_hi);
      }
      for (int l = 0; l < n_paths; ++l) {
        const double mag = std::sqrt(kappa[l] / kappa_sum * p_rx);
        paths[l].gain *= mag;
      }
      drop.paths.paths[m][k] = std::move(paths);
    }
  }
  return drop;
}

arma::cx_mat path_coefficients(const std::vector<Path>& paths, const LensGeometry& geom) {
  arma::cx_mat coeff(static_cast<arma::uword>(geom.size()), paths.size());
  for (std::size_t l = 0; l < paths.size(); ++l)
    coeff.col(l) =
        arma::conv_to<arma::cx_vec>::from(lens_response(geom, paths[l].theta, paths[l].phi)) *
        paths[l].gain;
  return coeff;
}

arma::cx_mat path_coefficients(const std::vector<Path>& paths, const UpaGeometry& geom) {
  arma::cx_mat coeff(static_cast<arma::uword>(geom.size()), paths.size());
  for (std::size_t l = 0; l < paths.size(); ++l)
    coeff.col(l) = upa_response(geom, paths[l].theta, paths[l].phi) * paths[l].gain;
  return coeff;
}

arma::cx_mat taps_from_coefficients(const arma::cx_mat& coeff, const std::vector<Path>& paths,
                                    int d_max) {
  if (coeff.n_cols != paths.size())
    throw std::invalid_argument("taps_from_coefficients: path count mismatch");
  arma::cx_mat taps(coeff.n_rows, static_cast<arma::uword>(d_max) + 1, arma::fill::zeros);
  for (std::size_t l = 0; l < paths.size(); ++l) {
    if (paths[l].delay < 0 || paths[l].delay > d_max)
      throw std::invalid_argument("taps_from_coefficients: delay out of range");
    taps.col(paths[l].delay) += coeff.col(l);
  }
  return taps;
}

namespace {

template <typename Geometry>
arma::cx_mat stream_taps_impl(const std::vector<Path>& paths, const Geometry& geom,
                              const std::vector<int>& antenna_rows, int d_max) {
  const arma::cx_mat coeff = path_coefficients(paths, geom);
  arma::uvec rows(antenna_rows.size());
  for (std::size_t i = 0; i < antenna_rows.size(); ++i) {
    if (antenna_rows[i] < 0 || antenna_rows[i] >= geom.size())
      throw std::invalid_argument("stream_taps: antenna index outside geometry");
    rows(i) = static_cast<arma::uword>(antenna_rows[i]);
  }
  return taps_from_coefficients(coeff.rows(rows), paths, d_max);
}

}  // namespace

arma::cx_mat stream_taps(const std::vector<Path>& paths, const LensGeometry& geom,
                         const std::vector<int>& antenna_rows, int d_max) {
  return stream_taps_impl(paths, geom, antenna_rows, d_max);
}

arma::cx_mat stream_taps(const std::vector<Path>& paths, const UpaGeometry& geom,
                         const std::vector<int>& antenna_rows, int d_max) {
  return stream_taps_impl(paths, geom, antenna_rows, d_max);
}

arma::ivec strongest_path_delay(const arma::cx_mat& coeff, const std::vector<Path>& paths) {
  if (coeff.n_cols != paths.size())
    throw std::invalid_argument("strongest_path_delay: path count mismatch");
  arma::ivec d(coeff.n_rows);
  for (arma::uword q = 0; q < coeff.n_rows; ++q) {
    arma::uword best = 0;
    double best_mag = -1.0;
    for (arma::uword l = 0; l < coeff.n_cols; ++l) {
      const double mag = std::abs(coeff(q, l));
      if (mag > best_mag) {
        best_mag = mag;
        best = l;
      }
    }
    d(q) = paths[best].delay;
  }
  return d;
}

arma::cx_mat apply_taps(const arma::cx_cube& taps, const arma::cx_mat& x, int warmup,
                        int n_out) {
  const int n_taps = static_cast<int>(taps.n_cols);
  if (warmup < n_taps - 1)
    throw std::invalid_argument("apply_taps: warmup must cover the tap memory");
  if (taps.n_slices != x.n_rows) throw std::invalid_argument("apply_taps: user count mismatch");
  if (static_cast<int>(x.n_cols) < warmup + n_out)
    throw std::invalid_argument("apply_taps: input too short");
  arma::cx_mat y(taps.n_rows, static_cast<arma::uword>(n_out), arma::fill::zeros);
  arma::cx_mat shifted(static_cast<arma::uword>(n_taps), static_cast<arma::uword>(n_out));
  for (arma::uword k = 0; k < taps.n_slices; ++k) {
    for (int d = 0; d < n_taps; ++d)
      shifted.row(d) = x.row(k).subvec(warmup - d, warmup - d + n_out - 1);
    y += taps.slice(k) * shifted;
  }
  return y;
}

void dump_drop(std::ostream& os, const ScenarioConfig& cfg, const Drop& drop, int drop_index) {
  os << "# drop " << drop_index << "\n";
  for (int k = 0; k < cfg.user_count; ++k)
    os << "user " << k << " x " << drop.geometry.user_xy(0, k) << " y "
       << drop.geometry.user_xy(1, k) << " h " << drop.geometry.user_height(k) << "\n";
  for (int m = 0; m < cfg.rrh_count; ++m) {
    for (int k = 0; k < cfg.user_count; ++k) {
      const auto& paths = drop.paths.at(m, k);
      os << "rrh " << m << " user " << k << " paths " << paths.size() << " prx_dbm "
         << watt_to_dbm(drop.received_power_w(m, k)) << "\n";
      for (std::size_t l = 0; l < paths.size(); ++l)
        os << "  path " << l << " gain " << paths[l].gain.real() << " " << paths[l].gain.imag()
           << " delay " << paths[l].delay << " theta " << paths[l].theta << " phi "
           << paths[l].phi << "\n";
    }
  }
}

}  // namespace lenscran
