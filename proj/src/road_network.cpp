#include "stmatch/road_network.hpp"

#include "stmatch/csv.hpp"
#include "stmatch/errors.hpp"
#include "stmatch/log.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

namespace stmatch {

namespace {

constexpr double kEndpointToleranceM = 1.0;
constexpr double kLengthTolerance = 0.005;

void validate_and_index(RoadNetwork &net) {
  net.node_index.clear();
  net.edge_index.clear();
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (!net.node_index.emplace(net.nodes[i].id, i).second)
      throw FormatError("duplicate node id: " + net.nodes[i].id);
  }
  net.out_edges.assign(net.nodes.size(), {});
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    Edge &e = net.edges[i];
    if (!net.edge_index.emplace(e.id, i).second)
      throw FormatError("duplicate edge id: " + e.id);
    if (e.geometry.size() < 2)
      throw FormatError("edge " + e.id + " has fewer than 2 geometry points");
    for (std::size_t k = 1; k < e.geometry.size(); ++k) {
      if ((e.geometry[k] - e.geometry[k - 1]).norm() == 0.0)
        throw FormatError("edge " + e.id + " repeats a geometry point");
    }
    e.cum_lengths = cumulative_lengths(e.geometry);
    double poly_len = e.cum_lengths.back();
    if (e.length_m <= 0)
      e.length_m = poly_len;
    else if (std::abs(e.length_m - poly_len) > kLengthTolerance * std::max(e.length_m, poly_len))
      throw FormatError("edge " + e.id + " declared length " + std::to_string(e.length_m) +
                        " disagrees with geometry length " + std::to_string(poly_len));
    const Vec2 &a = net.nodes[e.from].pos;
    const Vec2 &b = net.nodes[e.to].pos;
    if ((e.geometry.front() - a).norm() > kEndpointToleranceM)
      throw StructuralError("edge " + e.id + " geometry does not start at node " +
                            net.nodes[e.from].id);
    if ((e.geometry.back() - b).norm() > kEndpointToleranceM)
      throw StructuralError("edge " + e.id + " geometry does not end at node " +
                            net.nodes[e.to].id);
    net.out_edges[e.from].push_back(i);
  }
  net.index.build(net.edges);
}

} // namespace

void SpatialGrid::build(const std::vector<Edge> &edges, double cell_size_m) {
  cell_ = cell_size_m;
  cells_.clear();
  nx_ = ny_ = 0;
  if (edges.empty())
    return;
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = max_x;
  min_x_ = std::numeric_limits<double>::infinity();
  min_y_ = min_x_;
  for (const Edge &e : edges) {
    for (const Vec2 &p : e.geometry) {
      min_x_ = std::min(min_x_, p.x());
      min_y_ = std::min(min_y_, p.y());
      max_x = std::max(max_x, p.x());
      max_y = std::max(max_y, p.y());
    }
  }
  nx_ = static_cast<int>((max_x - min_x_) / cell_) + 1;
  ny_ = static_cast<int>((max_y - min_y_) / cell_) + 1;
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    double ex0 = std::numeric_limits<double>::infinity(), ey0 = ex0;
    double ex1 = -ex0, ey1 = -ex0;
    for (const Vec2 &p : edges[i].geometry) {
      ex0 = std::min(ex0, p.x());
      ey0 = std::min(ey0, p.y());
      ex1 = std::max(ex1, p.x());
      ey1 = std::max(ey1, p.y());
    }
    int cx0 = static_cast<int>((ex0 - min_x_) / cell_);
    int cy0 = static_cast<int>((ey0 - min_y_) / cell_);
    int cx1 = static_cast<int>((ex1 - min_x_) / cell_);
    int cy1 = static_cast<int>((ey1 - min_y_) / cell_);
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx)
        cells_[static_cast<std::size_t>(cy) * nx_ + cx].push_back(i);
  }
}

std::vector<std::size_t> SpatialGrid::candidates_near(const Vec2 &p,
                                                      double radius_m) const {
  std::vector<std::size_t> out;
  if (cells_.empty())
    return out;
  int cx0 = static_cast<int>(std::floor((p.x() - radius_m - min_x_) / cell_));
  int cy0 = static_cast<int>(std::floor((p.y() - radius_m - min_y_) / cell_));
  int cx1 = static_cast<int>(std::floor((p.x() + radius_m - min_x_) / cell_));
  int cy1 = static_cast<int>(std::floor((p.y() + radius_m - min_y_) / cell_));
  cx0 = std::max(cx0, 0);
  cy0 = std::max(cy0, 0);
  cx1 = std::min(cx1, nx_ - 1);
  cy1 = std::min(cy1, ny_ - 1);
  std::unordered_set<std::size_t> seen;
  for (int cy = cy0; cy <= cy1; ++cy) {
    for (int cx = cx0; cx <= cx1; ++cx) {
      for (std::size_t e : cells_[static_cast<std::size_t>(cy) * nx_ + cx]) {
        if (seen.insert(e).second)
          out.push_back(e);
      }
    }
  }
  return out;
}

NetworkBuilder &NetworkBuilder::add_node(std::string id, Vec2 pos) {
  nodes_.push_back({std::move(id), pos});
  return *this;
}

NetworkBuilder &NetworkBuilder::add_edge(std::string id, const std::string &from,
                                         const std::string &to,
                                         std::vector<Vec2> geometry,
                                         std::string street_name,
                                         std::string highway_class,
                                         std::string maxspeed) {
  edges_.push_back({std::move(id), from, to, std::move(street_name),
                    std::move(highway_class), std::move(maxspeed),
                    std::move(geometry)});
  return *this;
}

RoadNetwork NetworkBuilder::build() {
  RoadNetwork net;
  net.nodes = std::move(nodes_);
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    idx.emplace(net.nodes[i].id, i); // duplicates caught in validate_and_index
  for (PendingEdge &pe : edges_) {
    Edge e;
    e.id = std::move(pe.id);
    auto fi = idx.find(pe.from);
    if (fi == idx.end())
      throw StructuralError("edge " + e.id + " references unknown node " + pe.from);
    auto ti = idx.find(pe.to);
    if (ti == idx.end())
      throw StructuralError("edge " + e.id + " references unknown node " + pe.to);
    e.from = fi->second;
    e.to = ti->second;
    e.geometry = std::move(pe.geometry);
    e.street_name = std::move(pe.street);
    e.highway_class = std::move(pe.highway);
    e.maxspeed_raw = std::move(pe.maxspeed);
    net.edges.push_back(std::move(e));
  }
  validate_and_index(net);
  return net;
}

RoadNetwork load_network(const std::string &nodes_csv, const std::string &edges_csv,
                         CoordMode mode) {
  RoadNetwork net;

  std::vector<std::string> node_ids;
  std::vector<double> xs, ys;
  {
    auto in = open_input(nodes_csv);
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next_row(row))
      throw FormatError(nodes_csv + ": empty file");
    const char *xcol = mode == CoordMode::Planar ? "x" : "lat";
    const char *ycol = mode == CoordMode::Planar ? "y" : "lon";
    auto cols = csv_header_indices(row, {"id", xcol, ycol}, nodes_csv);
    while (reader.next_row(row)) {
      if (row.size() <= std::max(cols[1], cols[2]))
        throw FormatError(nodes_csv + " line " + std::to_string(reader.row_line()) +
                          ": too few fields");
      node_ids.push_back(row[cols[0]]);
      try {
        xs.push_back(std::stod(row[cols[1]]));
        ys.push_back(std::stod(row[cols[2]]));
      } catch (const std::exception &) {
        throw FormatError(nodes_csv + " line " + std::to_string(reader.row_line()) +
                          ": bad coordinate");
      }
    }
  }
  if (node_ids.empty())
    throw FormatError(nodes_csv + ": no nodes");

  if (mode == CoordMode::Geographic) {
    double lat0 = 0, lon0 = 0;
    for (std::size_t i = 0; i < node_ids.size(); ++i) {
      lat0 += xs[i];
      lon0 += ys[i];
    }
    lat0 /= static_cast<double>(node_ids.size());
    lon0 /= static_cast<double>(node_ids.size());
    net.projection.emplace(lat0, lon0);
    for (std::size_t i = 0; i < node_ids.size(); ++i)
      net.nodes.push_back({node_ids[i], net.projection->to_planar(xs[i], ys[i])});
  } else {
    for (std::size_t i = 0; i < node_ids.size(); ++i)
      net.nodes.push_back({node_ids[i], Vec2{xs[i], ys[i]}});
  }

  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    idx.emplace(net.nodes[i].id, i);

  {
    auto in = open_input(edges_csv);
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next_row(row))
      throw FormatError(edges_csv + ": empty file");
    auto cols = csv_header_indices(
        row, {"id", "from", "to", "length_m", "street_name", "highway", "maxspeed",
              "geometry"},
        edges_csv);
    while (reader.next_row(row)) {
      std::size_t need = *std::max_element(cols.begin(), cols.end());
      if (row.size() <= need)
        throw FormatError(edges_csv + " line " + std::to_string(reader.row_line()) +
                          ": too few fields");
      Edge e;
      e.id = row[cols[0]];
      auto fi = idx.find(row[cols[1]]);
      if (fi == idx.end())
        throw StructuralError("edge " + e.id + " references unknown node " +
                              row[cols[1]]);
      auto ti = idx.find(row[cols[2]]);
      if (ti == idx.end())
        throw StructuralError("edge " + e.id + " references unknown node " +
                              row[cols[2]]);
      e.from = fi->second;
      e.to = ti->second;
      if (!row[cols[3]].empty()) {
        try {
          e.length_m = std::stod(row[cols[3]]);
        } catch (const std::exception &) {
          throw FormatError(edges_csv + " line " + std::to_string(reader.row_line()) +
                            ": bad length_m");
        }
      }
      e.street_name = row[cols[4]];
      e.highway_class = row[cols[5]];
      e.maxspeed_raw = row[cols[6]];
      auto raw_geometry = parse_wkt_linestring(row[cols[7]]);
      if (net.projection) {
        e.geometry.reserve(raw_geometry.size());
        // WKT in geographic mode is "lon lat" order
        for (const Vec2 &g : raw_geometry)
          e.geometry.push_back(net.projection->to_planar(g.y(), g.x()));
        // declared length_m is already metric; geometry length becomes metric too
      } else {
        e.geometry = std::move(raw_geometry);
      }
      net.edges.push_back(std::move(e));
    }
  }

  validate_and_index(net);
  log::info("network", "loaded ", net.nodes.size(), " nodes, ", net.edges.size(),
            " edges");
  return net;
}

namespace {

// Numeric parse of a maxspeed token; supports "NN" and "NN mph".
std::optional<double> parse_speed_token(const std::string &raw) {
  std::string s = raw;
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos)
    return std::nullopt;
  std::size_t e = s.find_last_not_of(" \t");
  s = s.substr(b, e - b + 1);
  if (s.empty())
    return std::nullopt;
  char *end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || v <= 0)
    return std::nullopt;
  std::string rest(end);
  std::size_t rb = rest.find_first_not_of(" \t");
  if (rb == std::string::npos)
    return v;
  rest = rest.substr(rb);
  std::string lower;
  for (char c : rest)
    lower.push_back(static_cast<char>(std::tolower(c)));
  if (lower == "mph")
    return v * 1.609344;
  if (lower == "km/h" || lower == "kmh" || lower == "kph")
    return v;
  return std::nullopt;
}

} // namespace

ImputationReport impute_speed_limits(RoadNetwork &net,
                                     const std::map<std::string, double> &class_defaults) {
  ImputationReport report;
  std::vector<std::size_t> unresolved;

  // Rules 1 and 2: direct numeric values and ";"-separated lists.
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    Edge &e = net.edges[i];
    if (e.speed_limit_kmh) {
      ++report.already_set;
      continue;
    }
    const std::string &raw = e.maxspeed_raw;
    if (raw.find(';') != std::string::npos) {
      double best = 0;
      bool all_ok = !raw.empty();
      std::istringstream ss(raw);
      std::string token;
      while (std::getline(ss, token, ';')) {
        auto v = parse_speed_token(token);
        if (!v) {
          all_ok = false;
          break;
        }
        best = std::max(best, *v);
      }
      if (all_ok && best > 0) {
        e.speed_limit_kmh = best;
        ++report.list_max;
        continue;
      }
    } else if (auto v = parse_speed_token(raw)) {
      e.speed_limit_kmh = *v;
      ++report.numeric;
      continue;
    }
    unresolved.push_back(i);
  }

  // Rule 3: most common value among same-street edges resolved by rules 1-2.
  // Known values are collected before this pass so rule 3 never cascades.
  std::map<std::string, std::map<double, std::size_t>> street_votes;
  std::map<std::string, std::map<double, std::size_t>> class_votes;
  for (const Edge &e : net.edges) {
    if (!e.speed_limit_kmh)
      continue;
    if (!e.street_name.empty())
      street_votes[e.street_name][*e.speed_limit_kmh]++;
    if (!e.highway_class.empty())
      class_votes[e.highway_class][*e.speed_limit_kmh]++;
  }
  auto mode_of = [](const std::map<double, std::size_t> &votes) {
    double best_v = 0;
    std::size_t best_n = 0;
    for (auto &[v, n] : votes) {
      if (n > best_n || (n == best_n && v > best_v)) {
        best_v = v;
        best_n = n;
      }
    }
    return best_v;
  };

  std::vector<std::size_t> still;
  for (std::size_t i : unresolved) {
    Edge &e = net.edges[i];
    auto it = street_votes.find(e.street_name);
    if (!e.street_name.empty() && it != street_votes.end()) {
      e.speed_limit_kmh = mode_of(it->second);
      ++report.street_mode;
    } else {
      still.push_back(i);
    }
  }

  // Rule 4: most common value among same-class edges, then class defaults.
  std::vector<std::string> failed;
  for (std::size_t i : still) {
    Edge &e = net.edges[i];
    auto it = class_votes.find(e.highway_class);
    if (!e.highway_class.empty() && it != class_votes.end()) {
      e.speed_limit_kmh = mode_of(it->second);
      ++report.class_mode;
      continue;
    }
    auto di = class_defaults.find(e.highway_class);
    if (di == class_defaults.end())
      di = class_defaults.find("_default");
    if (di != class_defaults.end()) {
      e.speed_limit_kmh = di->second;
      ++report.class_default;
      continue;
    }
    failed.push_back(e.id);
  }

  if (!failed.empty()) {
    std::string msg = "could not impute speed limit for edges:";
    for (const std::string &id : failed)
      msg += " " + id;
    throw ImputationError(msg);
  }
  return report;
}

std::vector<EdgeDistance> edges_within_radius(const RoadNetwork &net, const Vec2 &p,
                                              double radius_m) {
  std::vector<EdgeDistance> out;
  for (std::size_t i : net.index.candidates_near(p, radius_m)) {
    double d = min_distance_to_polyline(p, net.edges[i].geometry);
    if (d <= radius_m)
      out.push_back({i, d});
  }
  std::sort(out.begin(), out.end(), [&](const EdgeDistance &a, const EdgeDistance &b) {
    if (a.distance_m != b.distance_m)
      return a.distance_m < b.distance_m;
    return net.edges[a.edge].id < net.edges[b.edge].id;
  });
  return out;
}

EdgeProjection project_point_to_edge(const RoadNetwork &net, const Vec2 &p,
                                     std::size_t edge) {
  const Edge &e = net.edges[edge];
  auto proj = project_to_polyline(p, e.geometry, e.cum_lengths);
  return {{edge, proj.offset_m, proj.point}, proj.distance_m};
}

std::optional<NodeRoute> *RouteCache::find(std::size_t from, std::size_t to) {
  auto it = map_.find((static_cast<std::uint64_t>(from) << 32) | to);
  return it == map_.end() ? nullptr : &it->second;
}

void RouteCache::store(std::size_t from, std::size_t to,
                       std::optional<NodeRoute> route) {
  map_.emplace((static_cast<std::uint64_t>(from) << 32) | to, std::move(route));
}

std::optional<NodeRoute> shortest_node_route(const RoadNetwork &net,
                                             std::size_t from, std::size_t to) {
  if (from == to)
    return NodeRoute{0.0, {}};
  const std::size_t n = net.nodes.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(n, inf);
  std::vector<std::size_t> via_edge(n, std::numeric_limits<std::size_t>::max());
  const Vec2 goal = net.nodes[to].pos;
  auto h = [&](std::size_t v) { return (net.nodes[v].pos - goal).norm(); };

  using QItem = std::pair<double, std::size_t>; // (f, node)
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> open;
  g[from] = 0;
  open.push({h(from), from});
  while (!open.empty()) {
    auto [f, u] = open.top();
    open.pop();
    if (u == to)
      break;
    if (f > g[u] + h(u) + 1e-9)
      continue; // stale entry
    for (std::size_t ei : net.out_edges[u]) {
      const Edge &e = net.edges[ei];
      double cand = g[u] + e.length_m;
      if (cand < g[e.to]) {
        g[e.to] = cand;
        via_edge[e.to] = ei;
        open.push({cand + h(e.to), e.to});
      }
    }
  }
  if (g[to] == inf)
    return std::nullopt;
  NodeRoute route;
  route.length_m = g[to];
  for (std::size_t v = to; v != from;) {
    std::size_t ei = via_edge[v];
    route.edges.push_back(ei);
    v = net.edges[ei].from;
  }
  std::reverse(route.edges.begin(), route.edges.end());
  return route;
}

std::optional<NetworkPath> shortest_path(const RoadNetwork &net,
                                         const OnEdgePosition &from,
                                         const OnEdgePosition &to, RouteCache *cache) {
  NetworkPath path;
  path.entry = from;
  path.exit = to;

  // Travelling forward on the same edge never benefits from leaving it:
  // any detour costs the residual plus a cycle back to the entry point.
  if (from.edge == to.edge && to.offset_m >= from.offset_m) {
    path.edges = {from.edge};
    path.length_m = to.offset_m - from.offset_m;
    return path;
  }

  const Edge &fe = net.edges[from.edge];
  const Edge &te = net.edges[to.edge];
  std::size_t exit_node = fe.to;
  std::size_t entry_node = te.from;
  double residual = fe.length_m - from.offset_m;

  std::optional<NodeRoute> route;
  if (cache) {
    if (auto *hit = cache->find(exit_node, entry_node)) {
      route = *hit;
    } else {
      route = shortest_node_route(net, exit_node, entry_node);
      cache->store(exit_node, entry_node, route);
    }
  } else {
    route = shortest_node_route(net, exit_node, entry_node);
  }
  if (!route)
    return std::nullopt;

  path.length_m = residual + route->length_m + to.offset_m;
  path.edges.push_back(from.edge);
  for (std::size_t ei : route->edges)
    path.edges.push_back(ei);
  path.edges.push_back(to.edge);
  return path;
}

namespace {

// Appends the part of an edge between two offsets (a <= b), skipping a
// leading point that duplicates what is already in out.
void append_edge_slice(const Edge &e, double a, double b, std::vector<Vec2> &out) {
  auto push = [&](const Vec2 &p) {
    if (out.empty() || (out.back() - p).norm() > 1e-9)
      out.push_back(p);
  };
  push(point_at_offset(e.geometry, e.cum_lengths, a));
  for (std::size_t i = 0; i < e.geometry.size(); ++i) {
    if (e.cum_lengths[i] > a && e.cum_lengths[i] < b)
      push(e.geometry[i]);
  }
  push(point_at_offset(e.geometry, e.cum_lengths, b));
}

} // namespace

std::vector<Vec2> path_geometry(const RoadNetwork &net, const NetworkPath &path) {
  std::vector<Vec2> out;
  if (path.edges.empty())
    return out;
  if (path.edges.size() == 1 && path.entry.offset_m <= path.exit.offset_m) {
    append_edge_slice(net.edges[path.edges[0]], path.entry.offset_m,
                      path.exit.offset_m, out);
    return out;
  }
  const Edge &first = net.edges[path.edges.front()];
  append_edge_slice(first, path.entry.offset_m, first.length_m, out);
  for (std::size_t k = 1; k + 1 < path.edges.size(); ++k) {
    const Edge &e = net.edges[path.edges[k]];
    append_edge_slice(e, 0, e.length_m, out);
  }
  append_edge_slice(net.edges[path.edges.back()], 0, path.exit.offset_m, out);
  return out;
}

std::size_t hop_diameter(const RoadNetwork &net) {
  std::size_t best = 0;
  const std::size_t n = net.nodes.size();
  std::vector<int> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<std::size_t> q{s};
    dist[s] = 0;
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      best = std::max(best, static_cast<std::size_t>(dist[u]));
      for (std::size_t ei : net.out_edges[u]) {
        std::size_t v = net.edges[ei].to;
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push_back(v);
        }
      }
    }
  }
  return best;
}

} // namespace stmatch
