#include "iab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iab {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

struct Heights {
  double tx;
  double rx;
};

Heights link_heights(LinkClass c, const ChannelParams& p) {
  if (c == LinkClass::Backhaul) return {p.gnb_height_m, p.gnb_height_m};
  return {p.gnb_height_m, p.ue_height_m};
}

}  // namespace

double los_probability(double distance_2d_m) {
  if (distance_2d_m <= 18.0) return 1.0;
  const double ratio = 18.0 / distance_2d_m;
  return ratio + std::exp(-distance_2d_m / 36.0) * (1.0 - ratio);
}

LosState los_state(double distance_2d_m, bool indoor_endpoint, Rng& rng) {
  // One uniform is always consumed so the stream stays aligned whether or
  // not the endpoint is indoors.
  const double draw = rng.uniform();
  if (indoor_endpoint) return LosState::Nlos;
  return draw < los_probability(distance_2d_m) ? LosState::Los
                                               : LosState::Nlos;
}

double shadow_sigma_db(LosState los) {
  return los == LosState::Los ? 4.0 : 7.82;
}

double pathloss_db(const LinkGeometry& geom, LosState los,
                   const ChannelParams& params, double shadow_db) {
  const double fc = params.carrier_ghz;
  if (fc < 0.5 || fc > 100.0) {
    throw std::invalid_argument("carrier frequency " + std::to_string(fc) +
                                " GHz outside the 0.5-100 GHz model range");
  }
  const Heights h = link_heights(geom.link_class, params);
  const double d3d = geom.distance_3d_m;
  const double dh = h.tx - h.rx;
  const double d2d = std::sqrt(std::max(0.0, d3d * d3d - dh * dh));

  // Breakpoint with effective environment height 1 m.
  const double d_bp = 4.0 * (h.tx - 1.0) * (h.rx - 1.0) * fc * 1e9 /
                      kSpeedOfLight;

  double pl_los;
  if (d2d <= d_bp) {
    pl_los = 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc);
  } else {
    pl_los = 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) -
             9.5 * std::log10(d_bp * d_bp + dh * dh);
  }

  double pl = pl_los;
  if (los == LosState::Nlos) {
    const double pl_nlos = 22.4 + 35.3 * std::log10(d3d) +
                           21.3 * std::log10(fc) - 0.3 * (h.rx - 1.5);
    pl = std::max(pl_los, pl_nlos);
  }
  if (geom.is_indoor_endpoint) pl += params.o2i_loss_db;
  return pl + shadow_db;
}

double noise_power_dbm(const ChannelParams& params) {
  return -174.0 + 10.0 * std::log10(params.bandwidth_hz) +
         params.noise_figure_db;
}

double link_capacity_bps(const LinkGeometry& geom, LosState los,
                         const ChannelParams& params, Rng& rng) {
  // The shadowing draw is consumed unconditionally to keep per-link streams
  // aligned when shadowing is toggled off.
  const double shadow_draw = rng.normal() * shadow_sigma_db(los);
  const double shadow_db = params.shadowing ? shadow_draw : 0.0;

  const double pl = pathloss_db(geom, los, params, shadow_db);
  const double rx_dbm = params.tx_power_dbm(geom.link_class) - pl +
                        params.rx_gain_dbi(geom.link_class);
  const double snr_db = rx_dbm - noise_power_dbm(params);
  if (snr_db < params.snr_floor_db) return 0.0;
  const double snr = std::pow(10.0, snr_db / 10.0);
  return params.mimo_layers(geom.link_class) * params.bandwidth_hz *
         std::log2(1.0 + snr);
}

}  // namespace iab
