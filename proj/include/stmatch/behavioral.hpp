#pragma once

#include "stmatch/road_network.hpp"
#include "stmatch/scoring.hpp"
#include "stmatch/trajectory.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stmatch {

// Historical edge usage: raw candidate hit counts per edge plus their
// log-normalized form in [0, 1].
struct EdgeUsageScores {
  std::vector<std::uint64_t> raw;
  std::vector<double> normalized;
  std::uint64_t max_raw = 0;
};

struct AccumulateOptions {
  // When set, counts only edges on matched routes instead of every
  // candidate edge near every point.
  bool matched_path_only = false;
  std::size_t workers = 1;
};

// ln(raw + 1) / ln(max_raw + 1); zero when no edge was ever hit.
double normalized_usage(std::uint64_t raw, std::uint64_t max_raw);

// Counts, for every trajectory point, every candidate edge found by the
// dynamic search. Uses the dynamic-search knobs from config.
EdgeUsageScores accumulate_edge_usage(const RoadNetwork &net,
                                      const std::vector<Trajectory> &trajectories,
                                      const MatchConfig &config,
                                      const AccumulateOptions &options = {});

// Fills `normalized` from `raw`; safe to call repeatedly.
void normalize_edge_scores(EdgeUsageScores &scores);

// Mean normalized score over a route's edges. Edges outside the score
// table score 0 and increment *unknown when given.
double behavioral_score(const NetworkPath &path, const EdgeUsageScores &scores,
                        std::uint64_t *unknown = nullptr);

void write_edge_scores(const std::string &path, const RoadNetwork &net,
                       const EdgeUsageScores &scores,
                       const std::string &header_comment = "");

// Reads a score table and hydrates Edge::usage_count / usage_score_norm.
EdgeUsageScores load_edge_scores(const std::string &path, RoadNetwork &net);

} // namespace stmatch
