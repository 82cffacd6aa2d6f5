#include "miriad/clusterer.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "miriad/errors.hpp"
#include "miriad/util.hpp"

namespace miriad {

namespace {

// E values are compared on a 1e-9 grid so tie-breaking is reproducible
std::int64_t quantize(double e) {
  return std::llround(e * 1e9);
}

struct ScanPair {
  std::int64_t qe = 0;
  std::uint32_t i = 0;  // i < j; items are sorted, so index order = id order
  std::uint32_t j = 0;
  double e = 0.0;
};

// scan order: E descending, then item-id pair ascending
bool scan_before(const ScanPair& a, const ScanPair& b) {
  if (a.qe != b.qe) return a.qe > b.qe;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

struct Proto {
  std::vector<std::uint32_t> items;
  std::vector<std::uint32_t> internal;  // indices into the pair list
  std::vector<std::uint32_t> external;
  std::set<std::uint32_t> external_items;
  bool dead = false;
};

double mean_e(const std::vector<Association>& assocs) {
  if (assocs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& a : assocs) sum += a.e;
  return sum / double(assocs.size());
}

}  // namespace

void ClusterParams::validate() const {
  if (min_cluster_size < 2)
    throw ArgumentError("min_cluster_size must be at least 2");
  if (min_cluster_size > max_cluster_size)
    throw ArgumentError("min_cluster_size exceeds max_cluster_size");
  if (max_internal_associations < 1)
    throw ArgumentError("max_internal_associations must be at least 1");
  if (!(association_floor >= 0.0))
    throw ArgumentError("association_floor must be >= 0");
}

bool Cluster::contains(const std::string& item) const {
  return std::binary_search(internal_items.begin(), internal_items.end(),
                            item);
}

ClusterResult cluster(const AssociationMatrix& assoc,
                      const ClusterParams& params) {
  params.validate();
  ClusterResult result;
  result.params = params;
  const std::size_t n = assoc.items.size();
  if (n == 0) return result;

  std::vector<ScanPair> pairs;
  const std::int64_t floor = quantize(params.association_floor);
  for (const auto& [key, e] : assoc.values) {
    ScanPair p{quantize(e), key.first, key.second, e};
    if (p.qe >= floor) pairs.push_back(p);
  }
  std::sort(pairs.begin(), pairs.end(), scan_before);

  std::vector<Proto> protos;
  std::vector<std::int64_t> owner(n, -1);

  for (std::uint32_t pi = 0; pi < pairs.size(); ++pi) {
    const auto& p = pairs[pi];
    std::int64_t ci = owner[p.i];
    std::int64_t cj = owner[p.j];

    if (ci < 0 && cj < 0) {
      // params guarantee a fresh pair always fits (max size >= 2, assocs >= 1)
      owner[p.i] = owner[p.j] = std::int64_t(protos.size());
      Proto np;
      np.items = {p.i, p.j};
      np.internal = {pi};
      protos.push_back(std::move(np));
    } else if (ci >= 0 && cj >= 0) {
      if (ci == cj) {
        // chord inside one cluster: take it if the budget allows, else drop
        // (an external association must join inside to outside)
        Proto& c = protos[std::size_t(ci)];
        if (c.internal.size() + 1 <= params.max_internal_associations)
          c.internal.push_back(pi);
      } else {
        Proto& a = protos[std::size_t(ci)];
        Proto& b = protos[std::size_t(cj)];
        bool fits =
            a.items.size() + b.items.size() <= params.max_cluster_size &&
            a.internal.size() + b.internal.size() + 1 <=
                params.max_internal_associations;
        if (fits) {
          // keep the older proto's identity
          auto lo = std::size_t(std::min(ci, cj));
          auto hi = std::size_t(std::max(ci, cj));
          Proto& dst = protos[lo];
          Proto& src = protos[hi];
          for (std::uint32_t item : src.items) owner[item] = std::int64_t(lo);
          dst.items.insert(dst.items.end(), src.items.begin(),
                           src.items.end());
          dst.internal.insert(dst.internal.end(), src.internal.begin(),
                              src.internal.end());
          dst.internal.push_back(pi);
          dst.external.insert(dst.external.end(), src.external.begin(),
                              src.external.end());
          dst.external_items.insert(src.external_items.begin(),
                                    src.external_items.end());
          src = Proto{};
          src.dead = true;
        } else {
          a.external.push_back(pi);
          a.external_items.insert(p.j);
          b.external.push_back(pi);
          b.external_items.insert(p.i);
        }
      }
    } else {
      // one endpoint clustered: extend or record the blocked link
      std::uint32_t outside = ci >= 0 ? p.j : p.i;
      Proto& c = protos[std::size_t(ci >= 0 ? ci : cj)];
      bool fits = c.items.size() + 1 <= params.max_cluster_size &&
                  c.internal.size() + 1 <= params.max_internal_associations;
      if (fits) {
        owner[outside] = ci >= 0 ? ci : cj;
        c.items.push_back(outside);
        c.internal.push_back(pi);
      } else {
        c.external.push_back(pi);
        c.external_items.insert(outside);
      }
    }
  }

  // dissolve undersized protos, then materialize the survivors
  std::vector<bool> internal_anywhere(n, false);
  std::uint32_t next_id = 1;
  for (const auto& proto : protos) {
    if (proto.dead || proto.items.size() < params.min_cluster_size) continue;

    Cluster c;
    c.id = next_id++;
    std::vector<std::uint32_t> sorted_items = proto.items;
    std::sort(sorted_items.begin(), sorted_items.end());
    for (std::uint32_t item : sorted_items) {
      c.internal_items.push_back(assoc.items[item]);
      internal_anywhere[item] = true;
    }
    for (std::uint32_t item : proto.external_items)
      c.external_items.push_back(assoc.items[item]);

    auto materialize = [&](const std::vector<std::uint32_t>& refs) {
      std::vector<std::uint32_t> sorted_refs = refs;
      std::sort(sorted_refs.begin(), sorted_refs.end());  // scan order
      std::vector<Association> out;
      out.reserve(sorted_refs.size());
      for (std::uint32_t pi : sorted_refs) {
        const auto& p = pairs[pi];
        out.push_back({assoc.items[p.i], assoc.items[p.j], p.e});
      }
      return out;
    };
    c.internal_associations = materialize(proto.internal);
    c.external_associations = materialize(proto.external);

    c.density = mean_e(c.internal_associations);
    c.centrality = mean_e(c.external_associations);
    c.structural = c.density > 0.0 ? c.centrality / c.density : 0.0;

    double total = double(c.internal_associations.size() +
                          c.external_associations.size());
    std::map<std::string, std::uint64_t> k;
    for (const auto& a : c.internal_associations) {
      ++k[a.a];
      ++k[a.b];
    }
    for (const auto& a : c.external_associations) {
      ++k[a.a];
      ++k[a.b];
    }
    for (const auto& [item, count] : k)
      c.item_weights[item] = double(count) / total;

    for (const auto& item : c.internal_items) {
      if (c.label.empty() ||
          c.item_weights.at(item) > c.item_weights.at(c.label))
        c.label = item;
    }

    result.clusters.push_back(std::move(c));
  }

  for (std::uint32_t i = 0; i < n; ++i)
    if (!internal_anywhere[i]) result.unclustered.push_back(assoc.items[i]);
  return result;
}

double item_weight(const Cluster& cluster, const std::string& item) {
  auto it = cluster.item_weights.find(item);
  if (it == cluster.item_weights.end())
    throw ArgumentError("item '" + item + "' is in no association of cluster " +
                        std::to_string(cluster.id));
  return it->second;
}

std::vector<SourceUnitRelevance> relevance(
    const Cluster& cluster,
    const std::map<std::string, std::set<std::string>>& source_units) {
  std::vector<SourceUnitRelevance> out;
  for (const auto& [unit, items] : source_units) {
    if (items.empty())
      throw ArgumentError("source unit '" + unit + "' is empty");
    SourceUnitRelevance row;
    row.cluster_id = cluster.id;
    row.unit = unit;
    row.total = items.size();
    double sum = 0.0;
    for (const auto& item : items) {
      if (!cluster.contains(item)) continue;
      ++row.shared;
      sum += cluster.item_weights.at(item);
    }
    if (row.shared == 0) continue;
    row.r = sum / double(row.total);
    out.push_back(std::move(row));
  }
  std::sort(out.begin(), out.end(),
            [](const SourceUnitRelevance& a, const SourceUnitRelevance& b) {
              if (a.r != b.r) return a.r > b.r;
              return a.unit < b.unit;
            });
  return out;
}

std::string export_dot(const Cluster& cluster) {
  std::string out = "graph cluster_" + std::to_string(cluster.id) + " {\n";
  out += "  graph [label=" + dot_quote(cluster.label) + "];\n";
  out += "  node [shape=ellipse];\n";
  for (const auto& item : cluster.internal_items)
    out += "  " + dot_quote(item) + ";\n";
  for (const auto& a : cluster.internal_associations)
    out += "  " + dot_quote(a.a) + " -- " + dot_quote(a.b) + " [label=\"" +
           format_fixed(a.e, 2) + "\"];\n";
  out += "}\n";
  return out;
}

void to_json(nlohmann::json& j, const ClusterParams& p) {
  j = nlohmann::json{{"min_cluster_size", p.min_cluster_size},
                     {"max_cluster_size", p.max_cluster_size},
                     {"max_internal_associations", p.max_internal_associations},
                     {"association_floor", p.association_floor}};
}

void to_json(nlohmann::json& j, const Association& a) {
  j = nlohmann::json{{"a", a.a}, {"b", a.b}, {"e", a.e}};
}

void to_json(nlohmann::json& j, const Cluster& c) {
  j = nlohmann::json{{"id", c.id},
                     {"label", c.label},
                     {"size", c.size()},
                     {"internal_items", c.internal_items},
                     {"external_items", c.external_items},
                     {"internal_associations", c.internal_associations},
                     {"external_associations", c.external_associations},
                     {"density", c.density},
                     {"centrality", c.centrality},
                     {"structural", c.structural},
                     {"item_weights", c.item_weights}};
}

void to_json(nlohmann::json& j, const ClusterResult& r) {
  j = nlohmann::json{{"params", r.params},
                     {"clusters", r.clusters},
                     {"unclustered", r.unclustered}};
}

}  // namespace miriad
