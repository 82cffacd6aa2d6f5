#include "miriad/strategic_map.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "miriad/util.hpp"

namespace miriad {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::string px(double v) { return format_fixed(v, 2); }

}  // namespace

int classify(double x, double y, double x_split, double y_split) {
  bool central = x >= x_split;
  bool dense = y >= y_split;
  if (central && dense) return 1;
  if (central) return 2;
  if (dense) return 3;
  return 4;
}

StrategicMap build_map(std::span<const Cluster> clusters,
                       const MapOptions& options) {
  StrategicMap map;
  if (clusters.empty()) return map;

  std::vector<double> xs, ys;
  for (const auto& c : clusters) {
    map.points.push_back(
        {c.id, c.label, c.centrality, c.density, c.size(), 0});
    xs.push_back(c.centrality);
    ys.push_back(c.density);
  }
  map.x_split = options.x_split.value_or(median(std::move(xs)));
  map.y_split = options.y_split.value_or(median(std::move(ys)));
  for (auto& p : map.points)
    p.type = classify(p.x, p.y, map.x_split, map.y_split);

  // edge weight: sum of E over external associations joining two clusters;
  // each item pair counts once even when recorded on both clusters
  std::map<std::string, std::uint32_t> owner;
  for (const auto& c : clusters)
    for (const auto& item : c.internal_items) owner[item] = c.id;
  std::map<std::pair<std::string, std::string>, double> seen;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> weights;
  for (const auto& c : clusters) {
    for (const auto& assoc : c.external_associations) {
      auto ia = owner.find(assoc.a);
      auto ib = owner.find(assoc.b);
      if (ia == owner.end() || ib == owner.end()) continue;
      if (ia->second == ib->second) continue;
      if (!seen.emplace(std::make_pair(assoc.a, assoc.b), assoc.e).second)
        continue;
      auto key = std::minmax(ia->second, ib->second);
      weights[{key.first, key.second}] += assoc.e;
    }
  }
  for (const auto& [key, weight] : weights)
    map.edges.push_back({key.first, key.second, weight});
  return map;
}

std::string export_svg(const StrategicMap& map, const MapOptions& options) {
  const double w = options.width;
  const double h = options.height;
  const double margin = 60.0;

  double xmax = map.x_split;
  double ymax = map.y_split;
  for (const auto& p : map.points) {
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
  }
  if (xmax <= 0.0) xmax = 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  xmax *= 1.05;
  ymax *= 1.05;

  auto sx = [&](double v) { return margin + (w - 2 * margin) * v / xmax; };
  auto sy = [&](double v) { return h - margin - (h - 2 * margin) * v / ymax; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(w) +
         "\" height=\"" + px(h) + "\" viewBox=\"0 0 " + px(w) + " " + px(h) +
         "\">\n";
  out += "  <rect width=\"" + px(w) + "\" height=\"" + px(h) +
         "\" fill=\"white\"/>\n";
  // axes
  out += "  <line x1=\"" + px(margin) + "\" y1=\"" + px(h - margin) +
         "\" x2=\"" + px(w - margin) + "\" y2=\"" + px(h - margin) +
         "\" stroke=\"black\"/>\n";
  out += "  <line x1=\"" + px(margin) + "\" y1=\"" + px(margin) + "\" x2=\"" +
         px(margin) + "\" y2=\"" + px(h - margin) + "\" stroke=\"black\"/>\n";
  out += "  <text x=\"" + px(w / 2) + "\" y=\"" + px(h - margin / 3) +
         "\" text-anchor=\"middle\" font-size=\"14\">centrality</text>\n";
  out += "  <text transform=\"rotate(-90 " + px(margin / 3) + " " + px(h / 2) +
         ")\" x=\"" + px(margin / 3) + "\" y=\"" + px(h / 2) +
         "\" text-anchor=\"middle\" font-size=\"14\">density</text>\n";

  if (!map.empty()) {
    out += "  <line x1=\"" + px(sx(map.x_split)) + "\" y1=\"" + px(margin) +
           "\" x2=\"" + px(sx(map.x_split)) + "\" y2=\"" + px(h - margin) +
           "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
    out += "  <line x1=\"" + px(margin) + "\" y1=\"" + px(sy(map.y_split)) +
           "\" x2=\"" + px(w - margin) + "\" y2=\"" + px(sy(map.y_split)) +
           "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";

    std::map<std::uint32_t, const MapPoint*> by_id;
    for (const auto& p : map.points) by_id[p.cluster_id] = &p;
    for (const auto& e : map.edges) {
      const MapPoint* a = by_id.at(e.a);
      const MapPoint* b = by_id.at(e.b);
      out += "  <line x1=\"" + px(sx(a->x)) + "\" y1=\"" + px(sy(a->y)) +
             "\" x2=\"" + px(sx(b->x)) + "\" y2=\"" + px(sy(b->y)) +
             "\" stroke=\"#bbbbbb\"/>\n";
    }

    static const char* kFill[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a"};
    for (const auto& p : map.points) {
      double r = 4.0 + 2.0 * double(p.size);
      out += "  <circle cx=\"" + px(sx(p.x)) + "\" cy=\"" + px(sy(p.y)) +
             "\" r=\"" + px(r) + "\" fill=\"" + kFill[(p.type - 1) & 3] +
             "\" fill-opacity=\"0.8\"/>\n";
      out += "  <text x=\"" + px(sx(p.x)) + "\" y=\"" + px(sy(p.y) - r - 4) +
             "\" text-anchor=\"middle\" font-size=\"11\">" +
             xml_escape(p.label) + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

std::string export_dot(const StrategicMap& map) {
  std::string out = "graph strategic_map {\n";
  for (const auto& p : map.points) {
    out += "  cluster_" + std::to_string(p.cluster_id) + " [label=" +
           dot_quote(p.label) + ", type=" + std::to_string(p.type) +
           ", x=\"" + format_value(p.x) + "\", y=\"" + format_value(p.y) +
           "\", size=" + std::to_string(p.size) + "];\n";
  }
  for (const auto& e : map.edges) {
    out += "  cluster_" + std::to_string(e.a) + " -- cluster_" +
           std::to_string(e.b) + " [weight=\"" + format_value(e.weight) +
           "\"];\n";
  }
  out += "}\n";
  return out;
}

std::string export_csv(const StrategicMap& map) {
  std::string out = "cluster,x,y,size,type\n";
  for (const auto& p : map.points)
    out += csv_row({std::to_string(p.cluster_id), format_value(p.x),
                    format_value(p.y), std::to_string(p.size),
                    std::to_string(p.type)});
  return out;
}

}  // namespace miriad
