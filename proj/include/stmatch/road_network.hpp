#pragma once

#include "stmatch/geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace stmatch {

enum class CoordMode { Planar, Geographic };

struct Node {
  std::string id;
  Vec2 pos;
};

struct Edge {
  std::string id;
  std::size_t from = 0; // node indices
  std::size_t to = 0;
  std::vector<Vec2> geometry;
  std::vector<double> cum_lengths;
  double length_m = 0;
  std::string street_name; // empty when unnamed
  std::string highway_class;
  std::string maxspeed_raw;
  std::optional<double> speed_limit_kmh;
  std::uint64_t usage_count = 0;
  double usage_score_norm = 0;
};

// A position on a specific edge, measured along its geometry.
struct OnEdgePosition {
  std::size_t edge = 0;
  double offset_m = 0;
  Vec2 point = Vec2::Zero();
};

// A route through the network between two on-edge positions.
struct NetworkPath {
  std::vector<std::size_t> edges; // in travel order, entry edge first
  OnEdgePosition entry;
  OnEdgePosition exit;
  double length_m = 0;
};

struct NodeRoute {
  double length_m = 0;
  std::vector<std::size_t> edges;
};

// Uniform grid over edge bounding boxes. Query returns a superset of the
// edges within the radius; exactness comes from the caller's distance check.
class SpatialGrid {
public:
  SpatialGrid() = default;
  void build(const std::vector<Edge> &edges, double cell_size_m = 250.0);
  std::vector<std::size_t> candidates_near(const Vec2 &p, double radius_m) const;

private:
  double cell_ = 250.0;
  double min_x_ = 0, min_y_ = 0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<std::size_t>> cells_;
};

struct RoadNetwork {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> out_edges; // node index -> edge indices
  SpatialGrid index;
  std::optional<PlanarProjection> projection; // set when loaded from lat/lon
  std::unordered_map<std::string, std::size_t> node_index;
  std::unordered_map<std::string, std::size_t> edge_index;

  const Node &node(std::size_t i) const { return nodes[i]; }
  const Edge &edge(std::size_t i) const { return edges[i]; }
};

// Programmatic construction; runs the same validation as file loading.
class NetworkBuilder {
public:
  NetworkBuilder &add_node(std::string id, Vec2 pos);
  NetworkBuilder &add_edge(std::string id, const std::string &from,
                           const std::string &to, std::vector<Vec2> geometry,
                           std::string street_name = "",
                           std::string highway_class = "",
                           std::string maxspeed = "");
  RoadNetwork build();

private:
  struct PendingEdge {
    std::string id, from, to, street, highway, maxspeed;
    std::vector<Vec2> geometry;
  };
  std::vector<Node> nodes_;
  std::vector<PendingEdge> edges_;
};

RoadNetwork load_network(const std::string &nodes_csv, const std::string &edges_csv,
                         CoordMode mode);

struct ImputationReport {
  std::size_t already_set = 0;
  std::size_t numeric = 0;
  std::size_t list_max = 0;
  std::size_t street_mode = 0;
  std::size_t class_mode = 0;
  std::size_t class_default = 0;
};

// Fills Edge::speed_limit_kmh for every edge or throws ImputationError
// naming the edges that could not be resolved.
ImputationReport impute_speed_limits(RoadNetwork &net,
                                     const std::map<std::string, double> &class_defaults);

struct EdgeDistance {
  std::size_t edge;
  double distance_m;
};

// Edges whose geometry comes within radius_m of p, ascending by distance,
// ties broken by edge string id.
std::vector<EdgeDistance> edges_within_radius(const RoadNetwork &net, const Vec2 &p,
                                              double radius_m);

struct EdgeProjection {
  OnEdgePosition position;
  double distance_m;
};

EdgeProjection project_point_to_edge(const RoadNetwork &net, const Vec2 &p,
                                     std::size_t edge);

class RouteCache {
public:
  std::optional<NodeRoute> *find(std::size_t from, std::size_t to);
  void store(std::size_t from, std::size_t to, std::optional<NodeRoute> route);
  std::size_t size() const { return map_.size(); }

private:
  std::unordered_map<std::uint64_t, std::optional<NodeRoute>> map_;
};

// Shortest driving route between two on-edge positions (A* between edge
// endpoints plus the residual pieces). nullopt when unreachable.
std::optional<NetworkPath> shortest_path(const RoadNetwork &net,
                                         const OnEdgePosition &from,
                                         const OnEdgePosition &to,
                                         RouteCache *cache = nullptr);

// Shortest route between two nodes, nullopt when unreachable.
std::optional<NodeRoute> shortest_node_route(const RoadNetwork &net,
                                             std::size_t from, std::size_t to);

// Longest shortest-path hop count over all reachable ordered node pairs.
std::size_t hop_diameter(const RoadNetwork &net);

// Planar geometry of a path, trimmed to its entry and exit offsets.
std::vector<Vec2> path_geometry(const RoadNetwork &net, const NetworkPath &path);

} // namespace stmatch
