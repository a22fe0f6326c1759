#include "iab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace iab {

namespace {

// Seed-derivation tags keeping the placement, UE and link streams disjoint.
constexpr std::uint64_t kGnbStream = 1;
constexpr std::uint64_t kUeStream = 2;
constexpr std::uint64_t kLinkStream = 3;

double area_side_m(const ScenarioConfig& cfg) {
  return std::sqrt(cfg.area_km2) * 1000.0;
}

}  // namespace

LoadProfile load_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open load profile " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line.rfind("hour,load", 0) != 0) {
    throw std::runtime_error("load profile must start with header hour,load");
  }
  LoadProfile profile;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    std::istringstream fields(line);
    std::string hour_str, load_str;
    if (!std::getline(fields, hour_str, ',') ||
        !std::getline(fields, load_str)) {
      throw std::runtime_error("load profile row " + std::to_string(row) +
                               ": expected hour,load");
    }
    double load = 0.0;
    try {
      (void)std::stoi(hour_str);
      std::size_t consumed = 0;
      load = std::stod(load_str, &consumed);
      if (consumed != load_str.size()) throw std::invalid_argument(load_str);
    } catch (const std::exception&) {
      throw std::runtime_error("load profile row " + std::to_string(row) +
                               ": non-numeric value");
    }
    if (!(load > 0.0) || load > 1.0) {
      throw std::runtime_error("load profile row " + std::to_string(row) +
                               ": load " + std::to_string(load) +
                               " outside (0, 1]");
    }
    profile.values.push_back(load);
  }
  if (profile.values.size() != kHoursPerWeek) {
    throw std::runtime_error("load profile: expected 168 rows, got " +
                             std::to_string(profile.values.size()));
  }
  return profile;
}

std::vector<Vec3> place_gnbs(const ScenarioConfig& cfg, Rng& rng) {
  const long n = std::llround(cfg.gnb_density_per_km2 * cfg.area_km2);
  if (n < 1) {
    throw std::invalid_argument(
        "gNB density times area rounds to zero gNBs");
  }
  const double side = area_side_m(cfg);
  std::vector<Vec3> positions;
  positions.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    positions.push_back(
        {rng.uniform(0.0, side), rng.uniform(0.0, side),
         cfg.channel.gnb_height_m});
  }
  return positions;
}

int resolve_donor_index(const ScenarioConfig& cfg,
                        const std::vector<Vec3>& gnbs) {
  if (cfg.donor_index >= 0) {
    if (static_cast<std::size_t>(cfg.donor_index) >= gnbs.size()) {
      throw std::invalid_argument("donor_index " +
                                  std::to_string(cfg.donor_index) +
                                  " out of range");
    }
    return cfg.donor_index;
  }
  const double half = area_side_m(cfg) / 2.0;
  const Vec3 centroid{half, half, cfg.channel.gnb_height_m};
  int best = 0;
  double best_d = distance_2d(gnbs[0], centroid);
  for (std::size_t i = 1; i < gnbs.size(); ++i) {
    const double d = distance_2d(gnbs[i], centroid);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

GnbLayout make_gnb_layout(const ScenarioConfig& cfg) {
  Rng rng(Rng::derive(cfg.seed, {kGnbStream}));
  GnbLayout layout;
  layout.positions = place_gnbs(cfg, rng);
  layout.donor_index = resolve_donor_index(cfg, layout.positions);
  return layout;
}

int ue_count(const ScenarioConfig& cfg, double p_t) {
  return static_cast<int>(std::llround(p_t * cfg.ue_per_gnb *
                                       cfg.gnb_density_per_km2 *
                                       cfg.area_km2));
}

std::vector<UePlacement> place_ues(int count, const ScenarioConfig& cfg,
                                   Rng& rng) {
  const double side = area_side_m(cfg);
  const long indoor = std::llround(cfg.indoor_ratio * count);
  std::vector<UePlacement> ues;
  ues.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    UePlacement ue;
    ue.pos = {rng.uniform(0.0, side), rng.uniform(0.0, side),
              cfg.channel.ue_height_m};
    ue.indoor = i < indoor;
    ues.push_back(ue);
  }
  return ues;
}

namespace {

// Per-link substream, keyed by normalized endpoint ids. The first draw is
// the LOS Bernoulli, the second the shadow fading normal.
double link_capacity(const ScenarioConfig& cfg, std::uint64_t link_seed,
                     NodeId a, NodeId b, const Vec3& pa, const Vec3& pb,
                     bool indoor, LinkClass link_class) {
  const NodeId lo = std::min(a, b), hi = std::max(a, b);
  Rng rng(Rng::derive(link_seed, {lo, hi}));
  const LosState los = los_state(distance_2d(pa, pb), indoor, rng);
  const LinkGeometry geom{distance_3d(pa, pb), indoor, link_class};
  return link_capacity_bps(geom, los, cfg.channel, rng);
}

}  // namespace

MeasurementsGraph build_graph(const ScenarioConfig& cfg,
                              const GnbLayout& gnbs,
                              const std::vector<UePlacement>& ues,
                              std::uint64_t link_seed) {
  const std::size_t n_gnb = gnbs.positions.size();
  const NodeId donor = static_cast<NodeId>(gnbs.donor_index);

  std::vector<Node> nodes;
  nodes.reserve(n_gnb + ues.size());
  for (std::size_t i = 0; i < n_gnb; ++i) {
    nodes.push_back({static_cast<NodeId>(i),
                     i == donor ? NodeKind::Donor : NodeKind::IabNode,
                     gnbs.positions[i]});
  }
  for (std::size_t u = 0; u < ues.size(); ++u) {
    nodes.push_back(
        {static_cast<NodeId>(n_gnb + u), NodeKind::Ue, ues[u].pos});
  }

  std::vector<Edge> edges;

  // Backhaul: one capacity draw per gNB pair; relay pairs get both
  // directions, donor pairs only the inbound edge.
  for (NodeId i = 0; i < n_gnb; ++i) {
    for (NodeId j = i + 1; j < n_gnb; ++j) {
      const double cap =
          link_capacity(cfg, link_seed, i, j, gnbs.positions[i],
                        gnbs.positions[j], false, LinkClass::Backhaul);
      if (cap < cfg.edge_floor_bps) continue;
      if (i == donor) {
        edges.push_back({j, i, cap});
      } else if (j == donor) {
        edges.push_back({i, j, cap});
      } else {
        edges.push_back({i, j, cap});
        edges.push_back({j, i, cap});
      }
    }
  }

  // Access: UE -> gNB for every pair above the floor.
  for (std::size_t u = 0; u < ues.size(); ++u) {
    const NodeId ue_id = static_cast<NodeId>(n_gnb + u);
    for (NodeId g = 0; g < n_gnb; ++g) {
      const double cap =
          link_capacity(cfg, link_seed, g, ue_id, gnbs.positions[g],
                        ues[u].pos, ues[u].indoor, LinkClass::Access);
      if (cap < cfg.edge_floor_bps) continue;
      edges.push_back({ue_id, g, cap});
    }
  }

  return MeasurementsGraph(std::move(nodes), std::move(edges));
}

MeasurementsGraph hourly_graph(const ScenarioConfig& cfg,
                               const GnbLayout& gnbs, double p_t, int run,
                               int hour) {
  Rng ue_rng(Rng::derive(cfg.seed, {kUeStream, static_cast<std::uint64_t>(run),
                                    static_cast<std::uint64_t>(hour)}));
  const std::vector<UePlacement> ues = place_ues(ue_count(cfg, p_t), cfg, ue_rng);
  const std::uint64_t link_seed =
      Rng::derive(cfg.seed, {kLinkStream, static_cast<std::uint64_t>(run),
                             static_cast<std::uint64_t>(hour)});
  return build_graph(cfg, gnbs, ues, link_seed);
}

std::vector<Commodity> commodities_for(const MeasurementsGraph& g,
                                       double demand_bps) {
  const NodeId donor = g.donor();
  std::vector<Commodity> commodities;
  for (NodeId ue : g.ues()) {
    commodities.push_back({ue, donor, demand_bps});
  }
  return commodities;
}

ScenarioConfig desk_scale_defaults() {
  ScenarioConfig cfg;
  // A 126 m hotspot with 6 gNBs and 18 UEs at the weekday peak. Sized so
  // indoor UEs stay inside the 28 GHz access budget under uniform placement
  // and every hourly solve clears in at most a few seconds; the access
  // power is raised to a beamformed-EIRP-like figure for the same reason.
  cfg.area_km2 = 0.016;
  cfg.gnb_density_per_km2 = 375.06;  // rounds to 6 gNBs
  cfg.ue_per_gnb = 3.0;
  cfg.channel.tx_power_access_dbm = 38.0;
  return cfg;
}

}  // namespace iab
