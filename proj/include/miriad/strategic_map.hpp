#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "miriad/clusterer.hpp"

namespace miriad {

struct MapPoint {
  std::uint32_t cluster_id = 0;
  std::string label;
  double x = 0.0;  // centrality
  double y = 0.0;  // density
  std::size_t size = 0;  // internal item count
  int type = 0;          // 1..4
};

struct MapEdge {
  std::uint32_t a = 0;  // cluster ids, a < b
  std::uint32_t b = 0;
  double weight = 0.0;  // sum of shared external E values
};

struct StrategicMap {
  std::vector<MapPoint> points;  // by cluster id ascending
  double x_split = 0.0;
  double y_split = 0.0;
  std::vector<MapEdge> edges;  // by (a, b) ascending
  bool empty() const { return points.empty(); }
};

struct MapOptions {
  std::optional<double> x_split;  // default: median centrality
  std::optional<double> y_split;  // default: median density
  int width = 640;
  int height = 480;
};

// >= split counts as high; 1: high/high, 2: high centrality only,
// 3: high density only, 4: low/low
int classify(double x, double y, double x_split, double y_split);

StrategicMap build_map(std::span<const Cluster> clusters,
                       const MapOptions& options = {});

std::string export_svg(const StrategicMap& map, const MapOptions& options = {});
std::string export_dot(const StrategicMap& map);
// "cluster,x,y,size,type"
std::string export_csv(const StrategicMap& map);

}  // namespace miriad
