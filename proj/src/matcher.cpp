#include "stmatch/matcher.hpp"

#include "stmatch/errors.hpp"
#include "stmatch/log.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace stmatch {

CandidateLayer prepare_candidates_fixed(const RoadNetwork &net, const Vec2 &point,
                                        double radius_m, std::size_t max_candidates,
                                        double sigma_m, ObservationForm form) {
  CandidateLayer layer;
  layer.radius_used_m = radius_m;
  layer.sigma_used_m = sigma_m;
  auto hits = edges_within_radius(net, point, radius_m);
  if (hits.size() > max_candidates)
    hits.resize(max_candidates);
  for (const EdgeDistance &h : hits) {
    auto proj = project_point_to_edge(net, point, h.edge);
    layer.candidates.push_back(
        {proj.position, proj.distance_m,
         observation_probability(proj.distance_m, sigma_m, form)});
  }
  return layer;
}

CandidateLayer prepare_candidates_dynamic(const RoadNetwork &net, const Vec2 &point,
                                          double uncertainty_m,
                                          const MatchConfig &config) {
  CandidateLayer layer;
  layer.sigma_used_m =
      std::clamp(uncertainty_m, config.sigma_min_m, config.sigma_max_m);
  double radius = std::min(uncertainty_m, config.r_max_m);
  for (;;) {
    auto hits = edges_within_radius(net, point, radius);
    if (!hits.empty()) {
      layer.radius_used_m = radius;
      if (config.dynamic_max_candidates &&
          hits.size() > *config.dynamic_max_candidates)
        hits.resize(*config.dynamic_max_candidates);
      for (const EdgeDistance &h : hits) {
        auto proj = project_point_to_edge(net, point, h.edge);
        layer.candidates.push_back(
            {proj.position, proj.distance_m,
             observation_probability(proj.distance_m, layer.sigma_used_m,
                                     config.observation_form)});
      }
      return layer;
    }
    if (radius >= config.r_max_m) {
      layer.radius_used_m = radius;
      return layer; // empty layer: nothing within the cap
    }
    radius = std::min(radius + config.buffer_step_m, config.r_max_m);
  }
}

namespace {

std::vector<double> path_speed_limits(const RoadNetwork &net,
                                      const NetworkPath &path) {
  std::vector<double> limits;
  limits.reserve(path.edges.size());
  for (std::size_t ei : path.edges) {
    const Edge &e = net.edges[ei];
    if (!e.speed_limit_kmh)
      throw ConfigError("edge " + e.id +
                        " has no speed limit; impute speed limits first");
    limits.push_back(*e.speed_limit_kmh);
  }
  return limits;
}

Transition score_transition(const RoadNetwork &net, const MatchConfig &config,
                            const EdgeUsageScores *scores, const GpsPoint &pa,
                            const GpsPoint &pb, const Candidate &from,
                            const Candidate &to, RouteCache *cache) {
  Transition tr;
  double dt_obs = pb.t - pa.t;
  if (dt_obs <= 0)
    return tr;
  auto route = shortest_path(net, from.position, to.position, cache);
  if (!route)
    return tr;
  tr.path = std::move(*route);

  double dist_e = (pb.pos - pa.pos).norm();
  double dist_n = tr.path.length_m;

  ScoreComponents &c = tr.components;
  c.observation = to.observation;
  c.transmission = transmission_probability(dist_e, dist_n);

  if (dist_n == 0 || dist_e == 0) {
    // Coincident candidates or a repeated GPS fix: no movement to judge.
    c.temporal = 1.0;
  } else {
    auto limits = path_speed_limits(net, tr.path);
    if (config.variant == Variant::St) {
      double v_kmh = dist_n / dt_obs * 3.6;
      c.temporal = speed_cosine(limits, v_kmh);
    } else {
      double v_ms = dist_e / dt_obs;
      double v_kmh = v_ms * 3.6;
      double dt_est = dist_n / v_ms;
      double v_lim =
          std::accumulate(limits.begin(), limits.end(), 0.0) /
          static_cast<double>(limits.size());
      tr.p_tt = travel_time_factor(dt_est, dt_obs);
      tr.p_s = speeding_factor(v_kmh, v_lim);
      tr.p_sv = dispersion_factor(limits, config.dispersion_form);
      c.temporal = tr.p_tt * tr.p_s * tr.p_sv;
    }
  }

  if (config.variant == Variant::Stb) {
    if (!scores)
      throw ConfigError("stb matching needs edge usage scores");
    c.behavioral = behavioral_score(tr.path, *scores);
  }

  tr.score = transition_score(config.variant, c);
  tr.feasible = true;
  return tr;
}

} // namespace

CandidateGraph build_candidate_graph(const RoadNetwork &net, const Trajectory &traj,
                                     const MatchConfig &config,
                                     const EdgeUsageScores *scores,
                                     RouteCache *cache) {
  config.validate();
  if (traj.points.empty())
    throw MatchError("trajectory " + traj.id + " has no points");
  if (config.variant == Variant::Stb && !scores)
    throw ConfigError("stb matching needs edge usage scores");

  CandidateGraph graph;
  graph.layers.reserve(traj.points.size());
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const GpsPoint &p = traj.points[i];
    CandidateLayer layer =
        config.variant == Variant::St
            ? prepare_candidates_fixed(net, p.pos, config.fixed_radius_m,
                                       config.max_candidates, config.sigma_m,
                                       config.observation_form)
            : prepare_candidates_dynamic(net, p.pos, p.uncertainty_m, config);
    layer.gps_index = i;
    if (layer.candidates.empty())
      throw MatchError("no candidate edges within " +
                           std::to_string(layer.radius_used_m) + " m of point " +
                           std::to_string(i),
                       static_cast<long>(i));
    graph.layers.push_back(std::move(layer));
  }

  graph.transitions.resize(graph.layers.size() > 0 ? graph.layers.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < graph.layers.size(); ++i) {
    const auto &from_layer = graph.layers[i].candidates;
    const auto &to_layer = graph.layers[i + 1].candidates;
    auto &matrix = graph.transitions[i];
    matrix.resize(from_layer.size() * to_layer.size());
    bool any = false;
    for (std::size_t a = 0; a < from_layer.size(); ++a) {
      for (std::size_t b = 0; b < to_layer.size(); ++b) {
        Transition tr =
            score_transition(net, config, scores, traj.points[i],
                             traj.points[i + 1], from_layer[a], to_layer[b], cache);
        any = any || tr.feasible;
        matrix[a * to_layer.size() + b] = std::move(tr);
      }
    }
    if (!any)
      throw MatchError("no feasible transition between points " +
                           std::to_string(i) + " and " + std::to_string(i + 1),
                       static_cast<long>(i + 1));
  }
  return graph;
}

std::vector<std::size_t> find_best_path(const CandidateGraph &graph,
                                        double *total_score) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const std::size_t n = graph.layers.size();
  if (n == 0)
    throw MatchError("empty candidate graph");

  std::vector<std::vector<double>> score(n);
  std::vector<std::vector<std::size_t>> parent(n);
  score[0].reserve(graph.layers[0].candidates.size());
  for (const Candidate &c : graph.layers[0].candidates)
    score[0].push_back(c.observation);

  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t cols = graph.layers[i].candidates.size();
    const std::size_t rows = graph.layers[i - 1].candidates.size();
    score[i].assign(cols, neg_inf);
    parent[i].assign(cols, 0);
    for (std::size_t b = 0; b < cols; ++b) {
      for (std::size_t a = 0; a < rows; ++a) {
        const Transition &tr = graph.transition(i - 1, a, b);
        if (!tr.feasible || score[i - 1][a] == neg_inf)
          continue;
        double cand = score[i - 1][a] + tr.score;
        if (cand > score[i][b]) {
          score[i][b] = cand;
          parent[i][b] = a;
        }
        // ties keep the smaller predecessor index, found first
      }
    }
  }

  std::size_t best = 0;
  double best_score = neg_inf;
  for (std::size_t b = 0; b < score[n - 1].size(); ++b) {
    if (score[n - 1][b] > best_score) {
      best_score = score[n - 1][b];
      best = b;
    }
  }
  if (best_score == neg_inf)
    throw MatchError("no feasible candidate chain through the trajectory");

  std::vector<std::size_t> chain(n);
  chain[n - 1] = best;
  for (std::size_t i = n - 1; i > 0; --i)
    chain[i - 1] = parent[i][chain[i]];
  if (total_score)
    *total_score = best_score;
  return chain;
}

MatchResult match_trajectory(const RoadNetwork &net, const Trajectory &traj,
                             const MatchConfig &config,
                             const EdgeUsageScores *scores, RouteCache *cache) {
  auto t0 = std::chrono::steady_clock::now();

  CandidateGraph graph = build_candidate_graph(net, traj, config, scores, cache);
  MatchResult result;
  result.trajectory_id = traj.id;
  result.matched_candidates = find_best_path(graph, &result.total_score);

  const std::size_t n = graph.layers.size();
  result.matched_positions.reserve(n);
  result.projection_distances_m.reserve(n);
  result.layer_sizes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Candidate &c = graph.layers[i].candidates[result.matched_candidates[i]];
    result.matched_positions.push_back(c.position);
    result.projection_distances_m.push_back(c.dist_to_gps_m);
    result.layer_sizes.push_back(graph.layers[i].candidates.size());
  }
  result.transition_paths.reserve(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    result.transition_paths.push_back(
        graph.transition(i, result.matched_candidates[i],
                         result.matched_candidates[i + 1])
            .path);
  }

  if (n == 1) {
    result.route_edges.push_back(result.matched_positions[0].edge);
  } else {
    for (const NetworkPath &p : result.transition_paths) {
      std::size_t start = 0;
      if (!result.route_edges.empty() && !p.edges.empty() &&
          result.route_edges.back() == p.edges.front())
        start = 1; // the exit edge of one hop is the entry edge of the next
      for (std::size_t k = start; k < p.edges.size(); ++k)
        result.route_edges.push_back(p.edges[k]);
    }
  }

  auto t1 = std::chrono::steady_clock::now();
  result.runtime_s = std::chrono::duration<double>(t1 - t0).count();
  return result;
}

} // namespace stmatch
