#include "mptcplab/net_model.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <utility>

#include "mptcplab/rng.hpp"

namespace mptcplab {

Network::Network(std::vector<Link> links, std::vector<Source> sources,
                 std::vector<Path> paths)
    : links_(std::move(links)),
      sources_(std::move(sources)),
      paths_(std::move(paths)) {
  validate_and_index();
}

void Network::validate_and_index() {
  if (links_.empty()) throw InvalidSpec("network: needs at least one link");
  if (sources_.empty()) throw InvalidSpec("network: needs at least one source");

  link_by_id_.reserve(links_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (!(l.capacity > 0.0))
      throw InvalidSpec("network: link '" + l.id + "' has nonpositive capacity");
    if (!link_by_id_.emplace(l.id, i).second)
      throw InvalidSpec("network: duplicate link id '" + l.id + "'");
  }
  source_by_id_.reserve(sources_.size());
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (!source_by_id_.emplace(sources_[i].id, i).second)
      throw InvalidSpec("network: duplicate source id '" + sources_[i].id + "'");
    validate(sources_[i].utility);
  }
  path_by_id_.reserve(paths_.size());
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (!path_by_id_.emplace(paths_[i].id, i).second)
      throw InvalidSpec("network: duplicate path id '" + paths_[i].id + "'");
    if (!(paths_[i].energy_cost >= 0.0))
      throw InvalidSpec("network: path '" + paths_[i].id +
                        "' has negative energy cost");
  }

  path_links_.assign(paths_.size(), {});
  paths_on_link_.assign(links_.size(), {});
  source_of_path_.assign(paths_.size(), 0);
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    const Path& p = paths_[i];
    if (p.link_ids.empty())
      throw InvalidSpec("network: path '" + p.id + "' has no links");
    std::set<std::string> seen;
    for (const std::string& lid : p.link_ids) {
      auto it = link_by_id_.find(lid);
      if (it == link_by_id_.end())
        throw InvalidSpec("network: path '" + p.id + "' references unknown link '" +
                          lid + "'");
      if (!seen.insert(lid).second)
        throw InvalidSpec("network: path '" + p.id + "' repeats link '" + lid + "'");
      path_links_[i].push_back(it->second);
      paths_on_link_[it->second].push_back(i);
    }
    auto sit = source_by_id_.find(p.source_id);
    if (sit == source_by_id_.end())
      throw InvalidSpec("network: path '" + p.id + "' references unknown source '" +
                        p.source_id + "'");
    source_of_path_[i] = sit->second;
  }

  source_paths_.assign(sources_.size(), {});
  primary_path_.assign(sources_.size(), 0);
  std::vector<bool> path_claimed(paths_.size(), false);
  for (std::size_t s = 0; s < sources_.size(); ++s) {
    const Source& src = sources_[s];
    if (src.path_ids.empty())
      throw InvalidSpec("network: source '" + src.id + "' has no paths");
    bool primary_found = false;
    for (const std::string& pid : src.path_ids) {
      auto it = path_by_id_.find(pid);
      if (it == path_by_id_.end())
        throw InvalidSpec("network: source '" + src.id +
                          "' references unknown path '" + pid + "'");
      std::size_t p = it->second;
      if (source_of_path_[p] != s)
        throw InvalidSpec("network: path '" + pid + "' is listed by source '" +
                          src.id + "' but owned by '" + paths_[p].source_id + "'");
      if (path_claimed[p])
        throw InvalidSpec("network: path '" + pid + "' listed twice");
      path_claimed[p] = true;
      source_paths_[s].push_back(p);
      if (pid == src.primary_path_id) {
        primary_path_[s] = p;
        primary_found = true;
      }
    }
    if (!primary_found)
      throw InvalidSpec("network: source '" + src.id +
                        "' primary path is not among its paths");
  }
  for (std::size_t p = 0; p < paths_.size(); ++p) {
    if (!path_claimed[p])
      throw InvalidSpec("network: path '" + paths_[p].id +
                        "' is not listed by its source");
  }

  total_capacity_ = 0.0;
  min_capacity_ = std::numeric_limits<double>::infinity();
  max_capacity_ = 0.0;
  for (const Link& l : links_) {
    total_capacity_ += l.capacity;
    min_capacity_ = std::min(min_capacity_, l.capacity);
    max_capacity_ = std::max(max_capacity_, l.capacity);
  }
}

std::size_t Network::link_index(const std::string& link_id) const {
  auto it = link_by_id_.find(link_id);
  if (it == link_by_id_.end())
    throw UnknownLink("unknown link '" + link_id + "'");
  return it->second;
}

std::size_t Network::source_index(const std::string& source_id) const {
  auto it = source_by_id_.find(source_id);
  if (it == source_by_id_.end())
    throw Error("unknown source '" + source_id + "'");
  return it->second;
}

std::size_t Network::path_index(const std::string& path_id) const {
  auto it = path_by_id_.find(path_id);
  if (it == path_by_id_.end()) throw Error("unknown path '" + path_id + "'");
  return it->second;
}

std::vector<const Path*> paths_through_link(const Network& net,
                                            const std::string& link_id) {
  std::size_t l = net.link_index(link_id);
  std::vector<const Path*> out;
  out.reserve(net.paths_on_link(l).size());
  for (std::size_t p : net.paths_on_link(l)) out.push_back(&net.paths()[p]);
  return out;
}

// ---------------------------------------------------------------------------
// Scenario generation
// ---------------------------------------------------------------------------

ScenarioVariant variant_of(const ScenarioSpec& spec) {
  if (std::holds_alternative<InternetSpec>(spec.params))
    return ScenarioVariant::Internet;
  if (std::holds_alternative<DatacenterSpec>(spec.params))
    return ScenarioVariant::Datacenter;
  return ScenarioVariant::Wireless;
}

const char* variant_name(ScenarioVariant v) {
  switch (v) {
    case ScenarioVariant::Internet: return "internet";
    case ScenarioVariant::Datacenter: return "datacenter";
    case ScenarioVariant::Wireless: return "wireless";
  }
  return "?";
}

namespace {

Network build_internet(const InternetSpec& s, std::uint64_t seed) {
  if (s.n_sources <= 0 || s.n_links <= 0)
    throw InvalidSpec("internet scenario: counts must be positive");
  if (s.paths_per_source < 2)
    throw InvalidSpec("internet scenario: paths_per_source must be >= 2");
  if (!(s.capacity_min > 0.0) || s.capacity_min > s.capacity_max)
    throw InvalidSpec("internet scenario: need 0 < capacity_min <= capacity_max");
  if (s.n_links < s.paths_per_source)
    throw InvalidSpec(
        "internet scenario: paths_per_source distinct paths are impossible "
        "over fewer links than paths");

  Rng rng(seed);
  std::vector<Link> links;
  links.reserve(static_cast<std::size_t>(s.n_links));
  for (int i = 0; i < s.n_links; ++i) {
    links.push_back({"L" + std::to_string(i),
                     rng.uniform(s.capacity_min, s.capacity_max), "internet"});
  }

  std::vector<Source> sources;
  std::vector<Path> paths;
  std::vector<std::size_t> pool(static_cast<std::size_t>(s.n_links));
  for (int x = 0; x < s.n_sources; ++x) {
    Source src;
    src.id = "S" + std::to_string(x);
    src.utility.alpha = 1.0;
    src.utility.weight = rng.uniform(0.5, 2.0);

    // Distinct first links keep the source's paths pairwise different.
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    for (int j = 0; j < s.paths_per_source; ++j) {
      std::size_t pick =
          static_cast<std::size_t>(j) +
          rng.below(pool.size() - static_cast<std::size_t>(j));
      std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
    }

    for (int j = 0; j < s.paths_per_source; ++j) {
      Path p;
      p.id = src.id + "P" + std::to_string(j);
      p.source_id = src.id;
      p.link_ids.push_back(links[pool[static_cast<std::size_t>(j)]].id);
      // Tails of up to two more links; rejection keeps links unique in-path.
      std::uint64_t extras = rng.below(3);
      for (std::uint64_t k = 0; k < extras; ++k) {
        for (int attempt = 0; attempt < 8; ++attempt) {
          const std::string& cand =
              links[rng.below(static_cast<std::uint64_t>(s.n_links))].id;
          if (std::find(p.link_ids.begin(), p.link_ids.end(), cand) ==
              p.link_ids.end()) {
            p.link_ids.push_back(cand);
            break;
          }
        }
      }
      src.path_ids.push_back(p.id);
      paths.push_back(std::move(p));
    }
    src.primary_path_id = src.path_ids.front();
    sources.push_back(std::move(src));
  }
  return Network(std::move(links), std::move(sources), std::move(paths));
}

Network build_datacenter(const DatacenterSpec& s, std::uint64_t /*seed*/) {
  if (s.pods <= 0) throw InvalidSpec("datacenter scenario: pods must be positive");
  if (s.pods % 2 != 0) throw InvalidSpec("datacenter scenario: pods must be even");
  if (s.pods < 4)
    throw InvalidSpec(
        "datacenter scenario: pods must be >= 4 so dual-homed hosts get "
        "disjoint upward paths");
  if (!(s.link_capacity > 0.0))
    throw InvalidSpec("datacenter scenario: link_capacity must be positive");

  const int k = s.pods;
  const int m = k / 2;  // edge (and aggregation) switches per pod
  const double cap = s.link_capacity;

  std::vector<Link> links;
  std::vector<Source> sources;
  std::vector<Path> paths;

  auto host_link_id = [](int pod, int host, int up) {
    return "p" + std::to_string(pod) + "-h" + std::to_string(host) + "-up" +
           std::to_string(up);
  };
  auto edge_agg_id = [](int pod, int edge, int agg) {
    return "p" + std::to_string(pod) + "-e" + std::to_string(edge) + "-a" +
           std::to_string(agg);
  };
  auto agg_core_id = [](int pod, int agg, int core) {
    return "p" + std::to_string(pod) + "-a" + std::to_string(agg) + "-c" +
           std::to_string(core);
  };

  // Switch fabric: k hosts per pod, each dual-homed to two edge switches;
  // full edge<->agg bipartite graph per pod; aggregation switch a uplinks to
  // core block [a*m, (a+1)*m).
  for (int pod = 0; pod < k; ++pod) {
    for (int h = 0; h < k; ++h) {
      links.push_back({host_link_id(pod, h, 0), cap, "edge"});
      links.push_back({host_link_id(pod, h, 1), cap, "edge"});
    }
    for (int e = 0; e < m; ++e)
      for (int a = 0; a < m; ++a)
        links.push_back({edge_agg_id(pod, e, a), cap, "aggregation"});
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < m; ++j)
        links.push_back({agg_core_id(pod, a, a * m + j), cap, "core"});
  }

  for (int pod = 0; pod < k; ++pod) {
    for (int h = 0; h < k; ++h) {
      Source src;
      src.id = "p" + std::to_string(pod) + "-host" + std::to_string(h);
      src.utility.alpha = 1.0;
      src.utility.weight = 1.0;
      for (int j = 0; j < 2; ++j) {
        // Path j climbs edge/aggregation column (h + j) mod m; distinct
        // columns reach distinct core blocks, so the two paths are disjoint.
        const int col = (h + j) % m;
        Path p;
        p.id = src.id + "-path" + std::to_string(j);
        p.source_id = src.id;
        p.link_ids = {host_link_id(pod, h, j), edge_agg_id(pod, col, col),
                      agg_core_id(pod, col, col * m + (h % m))};
        src.path_ids.push_back(p.id);
        paths.push_back(std::move(p));
      }
      src.primary_path_id = src.path_ids.front();
      sources.push_back(std::move(src));
    }
  }
  return Network(std::move(links), std::move(sources), std::move(paths));
}

Network build_wireless(const WirelessSpec& s, std::uint64_t /*seed*/) {
  if (s.n_devices <= 0)
    throw InvalidSpec("wireless scenario: n_devices must be positive");
  if (s.interfaces_per_device < 2)
    throw InvalidSpec("wireless scenario: interfaces_per_device must be >= 2");
  if (!(s.interface_capacity > 0.0))
    throw InvalidSpec("wireless scenario: interface_capacity must be positive");
  if (s.energy_cost < 0.0 || s.energy_weight < 0.0)
    throw InvalidSpec("wireless scenario: energy parameters must be nonnegative");

  std::vector<Link> links;
  std::vector<Source> sources;
  std::vector<Path> paths;
  for (int d = 0; d < s.n_devices; ++d) {
    Source src;
    src.id = "D" + std::to_string(d);
    src.utility.alpha = 1.0;
    src.utility.weight = 1.0;
    src.utility.energy_weight = s.energy_weight;
    for (int i = 0; i < s.interfaces_per_device; ++i) {
      std::string lid = src.id + "-if" + std::to_string(i);
      links.push_back({lid, s.interface_capacity, "wireless"});
      Path p;
      p.id = lid + "-path";
      p.source_id = src.id;
      p.link_ids = {lid};
      p.energy_cost = s.energy_cost;
      src.path_ids.push_back(p.id);
      paths.push_back(std::move(p));
    }
    src.primary_path_id = src.path_ids.front();
    sources.push_back(std::move(src));
  }
  return Network(std::move(links), std::move(sources), std::move(paths));
}

}  // namespace

Network build_scenario(const ScenarioSpec& spec) {
  switch (variant_of(spec)) {
    case ScenarioVariant::Internet:
      return build_internet(std::get<InternetSpec>(spec.params), spec.seed);
    case ScenarioVariant::Datacenter:
      return build_datacenter(std::get<DatacenterSpec>(spec.params), spec.seed);
    case ScenarioVariant::Wireless:
      return build_wireless(std::get<WirelessSpec>(spec.params), spec.seed);
  }
  throw InvalidSpec("unreachable scenario variant");
}

}  // namespace mptcplab
