#pragma once

#include "stmatch/behavioral.hpp"
#include "stmatch/road_network.hpp"
#include "stmatch/scoring.hpp"
#include "stmatch/trajectory.hpp"

#include <optional>
#include <vector>

namespace stmatch {

struct Candidate {
  OnEdgePosition position;
  double dist_to_gps_m = 0;
  double observation = 0;
};

struct CandidateLayer {
  std::size_t gps_index = 0;
  std::vector<Candidate> candidates;
  double radius_used_m = 0;
  double sigma_used_m = 0;
};

struct Transition {
  bool feasible = false;
  double score = 0; // f_total for the variant
  ScoreComponents components;
  double p_tt = std::numeric_limits<double>::quiet_NaN();
  double p_s = std::numeric_limits<double>::quiet_NaN();
  double p_sv = std::numeric_limits<double>::quiet_NaN();
  NetworkPath path;
};

struct CandidateGraph {
  std::vector<CandidateLayer> layers;
  // transitions[i] is a layers[i] x layers[i+1] matrix, row-major by the
  // source candidate.
  std::vector<std::vector<Transition>> transitions;

  const Transition &transition(std::size_t layer, std::size_t from,
                               std::size_t to) const {
    return transitions[layer][from * layers[layer + 1].candidates.size() + to];
  }
};

struct MatchResult {
  std::string trajectory_id;
  std::vector<std::size_t> matched_candidates;  // index into each layer
  std::vector<OnEdgePosition> matched_positions; // one per GPS point
  std::vector<double> projection_distances_m;    // one per GPS point
  std::vector<std::size_t> layer_sizes;          // one per GPS point
  std::vector<NetworkPath> transition_paths;     // one per consecutive pair
  std::vector<std::size_t> route_edges;          // concatenated, in travel order
  double total_score = 0;
  double runtime_s = 0;
};

CandidateLayer prepare_candidates_fixed(const RoadNetwork &net, const Vec2 &point,
                                        double radius_m, std::size_t max_candidates,
                                        double sigma_m, ObservationForm form);

// Grows the search radius from min(uncertainty, r_max) in fixed steps until
// something is found or the cap is reached. Sigma is the clamped uncertainty.
CandidateLayer prepare_candidates_dynamic(const RoadNetwork &net, const Vec2 &point,
                                          double uncertainty_m,
                                          const MatchConfig &config);

// Builds layers and scored transitions for a whole trajectory. Throws
// MatchError when a point has no candidates or a consecutive pair has no
// feasible transition. scores is required for the Stb variant.
CandidateGraph build_candidate_graph(const RoadNetwork &net, const Trajectory &traj,
                                     const MatchConfig &config,
                                     const EdgeUsageScores *scores = nullptr,
                                     RouteCache *cache = nullptr);

// Longest additive path through the graph: layer-0 scores are the
// observation values and each hop adds the transition score. Ties pick the
// smaller candidate index. Returns one candidate index per layer.
std::vector<std::size_t> find_best_path(const CandidateGraph &graph,
                                        double *total_score = nullptr);

MatchResult match_trajectory(const RoadNetwork &net, const Trajectory &traj,
                             const MatchConfig &config,
                             const EdgeUsageScores *scores = nullptr,
                             RouteCache *cache = nullptr);

} // namespace stmatch
