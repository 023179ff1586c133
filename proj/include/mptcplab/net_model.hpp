#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mptcplab/errors.hpp"
#include "mptcplab/utility.hpp"

namespace mptcplab {

struct Link {
  std::string id;
  double capacity = 0.0;  // Mbit/s, must be positive
  std::string tag;        // free-form layer label ("core", "tor", "wifi", ...)
};

struct Path {
  std::string id;
  std::string source_id;
  std::vector<std::string> link_ids;  // ordered, nonempty, no repeats
  double energy_cost = 0.0;           // J per Mbit, used when the source has
                                      // a nonzero energy weight
};

struct Source {
  std::string id;
  std::vector<std::string> path_ids;
  std::string primary_path_id;  // must be one of path_ids; the single-path
                                // baseline confines traffic to it
  UtilitySpec utility;
};

/// Immutable topology: links, sources and their paths, with lookup indices
/// prebuilt so solvers and dynamics can iterate by position. Construction
/// validates referential integrity and throws InvalidSpec on any violation;
/// a validated Network is safe to share across concurrent runs.
class Network {
 public:
  Network(std::vector<Link> links, std::vector<Source> sources,
          std::vector<Path> paths);

  const std::vector<Link>& links() const { return links_; }
  const std::vector<Source>& sources() const { return sources_; }
  const std::vector<Path>& paths() const { return paths_; }

  std::size_t link_index(const std::string& link_id) const;  // UnknownLink
  std::size_t source_index(const std::string& source_id) const;
  std::size_t path_index(const std::string& path_id) const;

  /// Indices of all paths crossing the given link.
  const std::vector<std::size_t>& paths_on_link(std::size_t link) const {
    return paths_on_link_[link];
  }
  /// Link indices of one path, in path order.
  const std::vector<std::size_t>& path_links(std::size_t path) const {
    return path_links_[path];
  }
  const std::vector<std::size_t>& source_paths(std::size_t source) const {
    return source_paths_[source];
  }
  std::size_t source_of_path(std::size_t path) const {
    return source_of_path_[path];
  }
  std::size_t primary_path(std::size_t source) const {
    return primary_path_[source];
  }

  double total_capacity() const { return total_capacity_; }
  double min_capacity() const { return min_capacity_; }
  double max_capacity() const { return max_capacity_; }

 private:
  void validate_and_index();

  std::vector<Link> links_;
  std::vector<Source> sources_;
  std::vector<Path> paths_;
  std::unordered_map<std::string, std::size_t> link_by_id_;
  std::unordered_map<std::string, std::size_t> source_by_id_;
  std::unordered_map<std::string, std::size_t> path_by_id_;
  std::vector<std::vector<std::size_t>> paths_on_link_;
  std::vector<std::vector<std::size_t>> path_links_;
  std::vector<std::vector<std::size_t>> source_paths_;
  std::vector<std::size_t> source_of_path_;
  std::vector<std::size_t> primary_path_;
  double total_capacity_ = 0.0;
  double min_capacity_ = 0.0;
  double max_capacity_ = 0.0;
};

/// Paths whose link sequence contains link_id. Throws UnknownLink.
std::vector<const Path*> paths_through_link(const Network& net,
                                            const std::string& link_id);

// ---------------------------------------------------------------------------
// Scenario generation
// ---------------------------------------------------------------------------

/// Random mesh: sources get paths_per_source paths, each a run of 1-3 links
/// starting at a per-source-distinct link. Requires n_links >= paths_per_source
/// so the first links can differ. Paths of one source may share tail links.
struct InternetSpec {
  int n_sources = 0;
  int n_links = 0;
  int paths_per_source = 0;  // >= 2
  double capacity_min = 0.0;
  double capacity_max = 0.0;
};

/// Three-layer fat-tree with `pods` pods (even, >= 4). Each pod has pods/2
/// edge and pods/2 aggregation switches; (pods/2)^2 core switches on top.
/// Every host is dual-homed to two edge switches and owns two link-disjoint
/// upward paths (host-edge, edge-agg, agg-core).
struct DatacenterSpec {
  int pods = 0;
  double link_capacity = 0.0;
};

/// One source per device; each interface is a dedicated single-link path
/// carrying an energy cost, and every source gets energy weight gamma.
struct WirelessSpec {
  int n_devices = 0;
  int interfaces_per_device = 0;  // >= 2
  double interface_capacity = 0.0;
  double energy_cost = 0.0;   // J per Mbit per interface path
  double energy_weight = 0.0; // gamma applied to each device's utility
};

enum class ScenarioVariant { Internet, Datacenter, Wireless };

struct ScenarioSpec {
  std::variant<InternetSpec, DatacenterSpec, WirelessSpec> params;
  std::uint64_t seed = 0;
};

ScenarioVariant variant_of(const ScenarioSpec& spec);
const char* variant_name(ScenarioVariant v);

/// Deterministic generator: equal (spec, seed) pairs produce structurally
/// identical networks. Throws InvalidSpec when the spec is not realizable.
Network build_scenario(const ScenarioSpec& spec);

}  // namespace mptcplab
