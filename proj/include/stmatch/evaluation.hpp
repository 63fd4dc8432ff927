#pragma once

#include "stmatch/matcher.hpp"
#include "stmatch/road_network.hpp"
#include "stmatch/trajectory.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stmatch {

struct TrajectoryMetrics {
  std::string trajectory_id;
  double e1_runtime_s = 0;
  double e2_avg_candidates = 0;
  double e3_total_candidates = 0;
  double q1_avg_projection_m = 0;
  std::optional<double> q2_length_metric;   // chord sum / path sum
  std::optional<double> q3_complexity_ratio; // path sum / end-to-end chord
  double t1_revisited_edges = 0;
  double t2_revisited_streets = 0;
  double t3_loops = 0;
  std::optional<double> s1_speed_rel_dev;
};

// Metric short names and values in report order (E1..S1).
struct MetricValue {
  const char *name;
  std::optional<double> value;
};
std::vector<MetricValue> metric_values(const TrajectoryMetrics &m);

TrajectoryMetrics compute_metrics(const Trajectory &traj, const MatchResult &result,
                                  const RoadNetwork &net);

// Distinct edges appearing more than once in the sequence.
std::size_t count_revisited_edges(std::span<const std::size_t> edges);

// Streets whose edges form two or more maximal contiguous runs; unnamed
// edges each count as their own street.
std::size_t count_revisited_streets(std::span<const std::size_t> edges,
                                    const RoadNetwork &net);

// Walks the node sequence induced by the edges; every time a node recurs
// the loop count rises and the walk's memory resets to that node.
std::size_t count_loops(std::span<const std::size_t> edges, const RoadNetwork &net);

struct TTestResult {
  double t = 0;
  double df = 0;
  double p = 1;
};

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

enum class OverlapClass { Equal, ACloser, BCloser };

// Which of a and b shares more edges with the reference path (set
// semantics, order-insensitive).
OverlapClass edge_overlap_compare(std::span<const std::string> a,
                                  std::span<const std::string> b,
                                  std::span<const std::string> reference);

// Same comparison on in-memory results; the three must describe the same
// underlying trajectory (low-frequency ids are reduced to their original).
OverlapClass edge_overlap_compare(const MatchResult &a, const MatchResult &b,
                                  const MatchResult &reference,
                                  const RoadNetwork &net);

struct OverlapTable {
  std::size_t equal = 0;
  std::size_t a_closer = 0;
  std::size_t b_closer = 0;

  std::size_t total() const { return equal + a_closer + b_closer; }
  double pct_equal() const;
  double pct_a_closer() const;
  double pct_b_closer() const;
};

struct MetricSummary {
  std::string metric;
  double mean_a = 0;
  double mean_b = 0;
  std::size_t n_pairs = 0;
  std::optional<TTestResult> test; // absent when fewer than 2 usable pairs
};

struct LongRow {
  std::string trajectory_id;
  std::string variant;
  std::string metric;
  std::optional<double> value;
};

struct ComparisonReport {
  std::vector<MetricSummary> metrics;
  std::vector<LongRow> long_rows;
  std::size_t n_shared = 0;
  std::size_t n_only_a = 0;
  std::size_t n_only_b = 0;
};

// Pairs the two metric sets by original trajectory id, drops pairs where a
// metric is missing on either side, and tests each metric. paired selects
// the paired t-test over Welch.
ComparisonReport aggregate_report(const std::vector<TrajectoryMetrics> &a,
                                  const std::vector<TrajectoryMetrics> &b,
                                  bool paired, const std::string &label_a = "a",
                                  const std::string &label_b = "b");

} // namespace stmatch
