#include "iab/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace iab {

using nlohmann::json;

namespace {

NodeKind kind_from_string(const std::string& s) {
  if (s == "ue") return NodeKind::Ue;
  if (s == "iab_node") return NodeKind::IabNode;
  if (s == "donor") return NodeKind::Donor;
  throw std::runtime_error("unknown node kind '" + s + "'");
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw std::runtime_error("unknown key '" + key + "' in " + where);
    }
  }
}

}  // namespace

json graph_to_json(const MeasurementsGraph& g) {
  json nodes = json::array();
  for (const Node& n : g.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"kind", to_string(n.kind)},
                     {"x", n.pos.x},
                     {"y", n.pos.y},
                     {"z", n.pos.z}});
  }
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back(
        {{"src", e.src}, {"dst", e.dst}, {"capacity_bps", e.capacity_bps}});
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

MeasurementsGraph graph_from_json(const json& j) {
  std::vector<Node> nodes;
  for (const json& n : j.at("nodes")) {
    nodes.push_back({n.at("id").get<NodeId>(),
                     kind_from_string(n.at("kind").get<std::string>()),
                     {n.at("x").get<double>(), n.at("y").get<double>(),
                      n.at("z").get<double>()}});
  }
  std::vector<Edge> edges;
  for (const json& e : j.at("edges")) {
    edges.push_back({e.at("src").get<NodeId>(), e.at("dst").get<NodeId>(),
                     e.at("capacity_bps").get<double>()});
  }
  return MeasurementsGraph(std::move(nodes), std::move(edges));
}

json tree_to_json(const MeasurementsGraph& g, const IabTree& tree,
                  const std::vector<Commodity>& commodities) {
  json active = json::array();
  for (NodeId v : tree.active) active.push_back(v);
  json parent = json::object();
  for (const auto& [child, par] : tree.parent) {
    parent[std::to_string(child)] = par;
  }
  json paths = json::object();
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    json path = json::array();
    for (EdgeIndex e : tree.commodity_paths[k]) {
      path.push_back({g.edge(e).src, g.edge(e).dst});
    }
    paths[std::to_string(commodities[k].source)] = std::move(path);
  }
  return {{"active", active}, {"parent", parent}, {"paths", paths}};
}

IabTree tree_from_json(const MeasurementsGraph& g, const json& j,
                       const std::vector<Commodity>& commodities) {
  IabTree tree;
  tree.commodity_paths.resize(commodities.size());
  const json& paths = j.at("paths");
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    const std::string key = std::to_string(commodities[k].source);
    if (!paths.contains(key)) {
      throw std::runtime_error("tree has no path entry for ue " + key);
    }
    for (const json& hop : paths.at(key)) {
      const NodeId src = hop.at(0).get<NodeId>();
      const NodeId dst = hop.at(1).get<NodeId>();
      const auto e = g.find_edge(src, dst);
      if (!e) {
        throw std::runtime_error("tree path uses unknown edge (" +
                                 std::to_string(src) + " -> " +
                                 std::to_string(dst) + ")");
      }
      tree.commodity_paths[k].push_back(*e);
      tree.edge_use[*e].push_back(k);
      tree.parent.emplace(src, dst);
      tree.active.insert(src);
      tree.active.insert(dst);
    }
  }
  tree.active.insert(g.donor());
  return tree;
}

namespace {

template <typename T>
void load(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

ChannelParams channel_from_json(const json& j) {
  ChannelParams p;
  reject_unknown_keys(
      j,
      {"carrier_ghz", "bandwidth_hz", "noise_figure_db", "o2i_loss_db",
       "rx_gain_access_dbi", "rx_gain_backhaul_dbi", "mimo_access",
       "mimo_backhaul", "tx_power_access_dbm", "tx_power_backhaul_dbm",
       "gnb_height_m", "ue_height_m", "snr_floor_db", "shadowing"},
      "channel config");
  load(j, "carrier_ghz", p.carrier_ghz);
  load(j, "bandwidth_hz", p.bandwidth_hz);
  load(j, "noise_figure_db", p.noise_figure_db);
  load(j, "o2i_loss_db", p.o2i_loss_db);
  load(j, "rx_gain_access_dbi", p.rx_gain_access_dbi);
  load(j, "rx_gain_backhaul_dbi", p.rx_gain_backhaul_dbi);
  load(j, "mimo_access", p.mimo_access);
  load(j, "mimo_backhaul", p.mimo_backhaul);
  load(j, "tx_power_access_dbm", p.tx_power_access_dbm);
  load(j, "tx_power_backhaul_dbm", p.tx_power_backhaul_dbm);
  load(j, "gnb_height_m", p.gnb_height_m);
  load(j, "ue_height_m", p.ue_height_m);
  load(j, "snr_floor_db", p.snr_floor_db);
  load(j, "shadowing", p.shadowing);
  if (p.bandwidth_hz <= 0.0 || p.mimo_access < 1 || p.mimo_backhaul < 1) {
    throw std::runtime_error("channel config: bandwidth must be positive and "
                             "MIMO layers at least 1");
  }
  return p;
}

json channel_to_json(const ChannelParams& p) {
  return {{"carrier_ghz", p.carrier_ghz},
          {"bandwidth_hz", p.bandwidth_hz},
          {"noise_figure_db", p.noise_figure_db},
          {"o2i_loss_db", p.o2i_loss_db},
          {"rx_gain_access_dbi", p.rx_gain_access_dbi},
          {"rx_gain_backhaul_dbi", p.rx_gain_backhaul_dbi},
          {"mimo_access", p.mimo_access},
          {"mimo_backhaul", p.mimo_backhaul},
          {"tx_power_access_dbm", p.tx_power_access_dbm},
          {"tx_power_backhaul_dbm", p.tx_power_backhaul_dbm},
          {"gnb_height_m", p.gnb_height_m},
          {"ue_height_m", p.ue_height_m},
          {"snr_floor_db", p.snr_floor_db},
          {"shadowing", p.shadowing}};
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig cfg;
  reject_unknown_keys(j,
                      {"area_km2", "gnb_density_per_km2", "donor_index",
                       "indoor_ratio", "ue_per_gnb", "min_capacity_bps",
                       "edge_floor_bps", "seed", "channel"},
                      "scenario config");
  load(j, "area_km2", cfg.area_km2);
  load(j, "gnb_density_per_km2", cfg.gnb_density_per_km2);
  load(j, "donor_index", cfg.donor_index);
  load(j, "indoor_ratio", cfg.indoor_ratio);
  load(j, "ue_per_gnb", cfg.ue_per_gnb);
  load(j, "min_capacity_bps", cfg.min_capacity_bps);
  load(j, "edge_floor_bps", cfg.edge_floor_bps);
  load(j, "seed", cfg.seed);
  if (j.contains("channel")) cfg.channel = channel_from_json(j.at("channel"));
  if (!(cfg.area_km2 > 0.0)) {
    throw std::runtime_error("scenario config: area must be positive");
  }
  if (cfg.indoor_ratio < 0.0 || cfg.indoor_ratio > 1.0) {
    throw std::runtime_error("scenario config: indoor_ratio outside [0, 1]");
  }
  if (cfg.gnb_density_per_km2 < 0.0 || cfg.ue_per_gnb < 0.0) {
    throw std::runtime_error("scenario config: densities must be >= 0");
  }
  return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
  return {{"area_km2", cfg.area_km2},
          {"gnb_density_per_km2", cfg.gnb_density_per_km2},
          {"donor_index", cfg.donor_index},
          {"indoor_ratio", cfg.indoor_ratio},
          {"ue_per_gnb", cfg.ue_per_gnb},
          {"min_capacity_bps", cfg.min_capacity_bps},
          {"edge_floor_bps", cfg.edge_floor_bps},
          {"seed", cfg.seed},
          {"channel", channel_to_json(cfg.channel)}};
}

json capacity_report_to_json(const CapacityReport& report) {
  json per_ue = json::array();
  for (const UeCapacity& u : report.per_ue) {
    per_ue.push_back({{"ue", u.ue},
                      {"attached", u.attached},
                      {"idle_bps", u.idle_bps},
                      {"saturation_bps", u.saturation_bps}});
  }
  return {{"avg_idle_bps", report.avg_idle_bps},
          {"avg_saturation_bps", report.avg_saturation_bps},
          {"min_saturation_bps", report.min_saturation_bps},
          {"unattached_count", report.unattached_count},
          {"per_ue", per_ue}};
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string canonical = scenario_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace iab
