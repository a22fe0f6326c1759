#pragma once

#include <cstdint>

#include "iab/rng.hpp"

namespace iab {

enum class LinkClass : std::uint8_t { Access, Backhaul };
enum class LosState : std::uint8_t { Los, Nlos };

/// Radio parameters. Defaults are the simulation values used throughout:
/// 28 GHz carrier, 100 MHz bandwidth, 5 dB noise figure, 14.15 dB O2I loss,
/// 3/10 dBi reception gain and 2/4 MIMO layers for access/backhaul, 30 dBm
/// transmit power. Access transmit power and the antenna heights are not
/// pinned by the reference table; they default to 30 dBm and 10 m / 1.5 m.
struct ChannelParams {
  double carrier_ghz = 28.0;
  double bandwidth_hz = 1e8;
  double noise_figure_db = 5.0;
  double o2i_loss_db = 14.15;
  double rx_gain_access_dbi = 3.0;
  double rx_gain_backhaul_dbi = 10.0;
  int mimo_access = 2;
  int mimo_backhaul = 4;
  double tx_power_access_dbm = 30.0;
  double tx_power_backhaul_dbm = 30.0;
  double gnb_height_m = 10.0;
  double ue_height_m = 1.5;
  double snr_floor_db = -5.0;
  bool shadowing = true;

  double rx_gain_dbi(LinkClass c) const {
    return c == LinkClass::Access ? rx_gain_access_dbi : rx_gain_backhaul_dbi;
  }
  int mimo_layers(LinkClass c) const {
    return c == LinkClass::Access ? mimo_access : mimo_backhaul;
  }
  double tx_power_dbm(LinkClass c) const {
    return c == LinkClass::Access ? tx_power_access_dbm
                                  : tx_power_backhaul_dbm;
  }
};

struct LinkGeometry {
  double distance_3d_m = 0.0;
  bool is_indoor_endpoint = false;
  LinkClass link_class = LinkClass::Access;
};

/// UMi line-of-sight probability: 1 inside 18 m, then
/// 18/d + exp(-d/36) * (1 - 18/d).
double los_probability(double distance_2d_m);

/// Bernoulli LOS draw; indoor endpoints are always NLOS.
LosState los_state(double distance_2d_m, bool indoor_endpoint, Rng& rng);

/// Shadow fading standard deviation: 4 dB LOS, 7.82 dB NLOS.
double shadow_sigma_db(LosState los);

/// UMi street-canyon pathloss in dB (NLOS takes the max of the LOS and NLOS
/// formulas), plus O2I penetration for indoor endpoints and the caller's
/// shadow fading offset. Throws std::invalid_argument outside [0.5, 100] GHz.
double pathloss_db(const LinkGeometry& geom, LosState los,
                   const ChannelParams& params, double shadow_db = 0.0);

double noise_power_dbm(const ChannelParams& params);

/// MIMO-scaled Shannon capacity of the link budget chain. Samples shadow
/// fading from `rng` when params.shadowing is set. Returns 0 when the SNR
/// falls below params.snr_floor_db.
double link_capacity_bps(const LinkGeometry& geom, LosState los,
                         const ChannelParams& params, Rng& rng);

}  // namespace iab
