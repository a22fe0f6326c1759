#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "iab/channel.hpp"
#include "iab/graph.hpp"
#include "iab/rng.hpp"

namespace iab {

inline constexpr int kHoursPerWeek = 168;

struct ScenarioConfig {
  double area_km2 = 0.092;
  /// Default reproduces the 8-gNB reference deployment (1 donor + 7 relays
  /// in 0.092 km^2).
  double gnb_density_per_km2 = 87.0;
  /// -1 selects the gNB nearest the area centroid.
  int donor_index = -1;
  double indoor_ratio = 0.8;
  /// UEs per gNB at peak load (l in the density model
  /// lambda_ue(t) = p(t) * l * lambda_gnb).
  double ue_per_gnb = 10.0;
  double min_capacity_bps = 8e7;
  /// Links below this Shannon capacity never enter the measurements graph.
  double edge_floor_bps = 1e7;
  std::uint64_t seed = 1;
  ChannelParams channel;
};

/// Normalized weekly cell-load profile: 168 hourly values in (0, 1].
struct LoadProfile {
  std::vector<double> values;
};

/// Parses `hour,load` CSV with exactly 168 data rows, each load in (0, 1].
/// Throws std::runtime_error naming the offending row otherwise.
LoadProfile load_profile_csv(const std::filesystem::path& path);

struct UePlacement {
  Vec3 pos;
  bool indoor = false;
};

struct GnbLayout {
  std::vector<Vec3> positions;
  int donor_index = 0;
};

/// round(density * area) gNB positions, uniform in the square study area at
/// gNB height. Throws std::invalid_argument when that count is zero.
std::vector<Vec3> place_gnbs(const ScenarioConfig& cfg, Rng& rng);

/// Donor choice: cfg.donor_index when set, else the gNB nearest the area
/// centroid.
int resolve_donor_index(const ScenarioConfig& cfg,
                        const std::vector<Vec3>& gnbs);

GnbLayout make_gnb_layout(const ScenarioConfig& cfg);

/// round(p_t * l * gnb_density * area).
int ue_count(const ScenarioConfig& cfg, double p_t);

/// round(indoor_ratio * count) indoor UEs, remainder outdoor, uniform
/// positions at UE height. The indoor flag drives O2I loss and forced NLOS;
/// there is no building geometry.
std::vector<UePlacement> place_ues(int count, const ScenarioConfig& cfg,
                                   Rng& rng);

/// Assembles the measurements graph: gNB nodes first (ids 0..n_gnb-1), then
/// UEs. Access edges UE -> gNB and paired relay <-> relay / relay -> donor
/// backhaul edges are admitted when their capacity reaches the edge floor.
/// Each link's LOS state and shadow fading come from a substream keyed by
/// the endpoint ids, so edge capacities do not depend on assembly order.
MeasurementsGraph build_graph(const ScenarioConfig& cfg,
                              const GnbLayout& gnbs,
                              const std::vector<UePlacement>& ues,
                              std::uint64_t link_seed);

/// Full per-hour generation: UE draw + graph assembly, seeded by
/// (cfg.seed, run, hour). gNB positions stay fixed across the week.
MeasurementsGraph hourly_graph(const ScenarioConfig& cfg,
                               const GnbLayout& gnbs, double p_t, int run,
                               int hour);

/// One commodity per UE toward the donor.
std::vector<Commodity> commodities_for(const MeasurementsGraph& g,
                                       double demand_bps);

/// Defaults sized so the bundled exact solver clears every hour of a weekly
/// sweep in seconds: 5 gNBs and up to 30 peak UEs in the reference area.
/// The type defaults above describe the full-size reference deployment
/// instead; pair those with export-lp and an external solver.
ScenarioConfig desk_scale_defaults();

}  // namespace iab
