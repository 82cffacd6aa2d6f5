#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "miriad/cousage.hpp"

namespace miriad {

struct ClusterParams {
  std::size_t min_cluster_size = 3;
  std::size_t max_cluster_size = 10;
  std::size_t max_internal_associations = 20;
  double association_floor = 0.0;

  void validate() const;  // throws ArgumentError
};

struct Association {
  std::string a;  // a < b
  std::string b;
  double e = 0.0;
};

struct Cluster {
  std::uint32_t id = 0;
  std::string label;  // highest-weight internal item
  std::vector<std::string> internal_items;  // ascending
  std::vector<std::string> external_items;  // ascending
  std::vector<Association> internal_associations;  // E desc, then pair asc
  std::vector<Association> external_associations;
  double density = 0.0;     // mean internal E
  double centrality = 0.0;  // mean external E, 0 when none
  double structural = 0.0;  // centrality / density
  std::map<std::string, double> item_weights;  // k(a) / (n_in + n_ex)

  std::size_t size() const { return internal_items.size(); }
  bool contains(const std::string& item) const;
};

struct ClusterResult {
  ClusterParams params;
  std::vector<Cluster> clusters;           // by id ascending
  std::vector<std::string> unclustered;    // ascending
};

// constrained bottom-up single-link scan over pairs sorted by E descending
// (ties: item-id pair ascending)
ClusterResult cluster(const AssociationMatrix& assoc,
                      const ClusterParams& params = {});

// throws ArgumentError if the item is in none of the cluster's associations
double item_weight(const Cluster& cluster, const std::string& item);

struct SourceUnitRelevance {
  std::uint32_t cluster_id = 0;
  std::string unit;
  std::size_t shared = 0;  // l(i): cluster-internal items in the unit
  std::size_t total = 0;   // L(i): items in the unit
  double r = 0.0;
};

// units with no shared internal item are omitted; empty unit → ArgumentError
std::vector<SourceUnitRelevance> relevance(
    const Cluster& cluster,
    const std::map<std::string, std::set<std::string>>& source_units);

// nodes = internal items, edges = internal associations labeled with E
std::string export_dot(const Cluster& cluster);

void to_json(nlohmann::json& j, const ClusterParams& p);
void to_json(nlohmann::json& j, const Association& a);
void to_json(nlohmann::json& j, const Cluster& c);
void to_json(nlohmann::json& j, const ClusterResult& r);

}  // namespace miriad
