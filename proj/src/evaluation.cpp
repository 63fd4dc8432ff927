#include "stmatch/evaluation.hpp"

#include "stmatch/errors.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace stmatch {

std::vector<MetricValue> metric_values(const TrajectoryMetrics &m) {
  return {{"E1", m.e1_runtime_s},
          {"E2", m.e2_avg_candidates},
          {"E3", m.e3_total_candidates},
          {"Q1", m.q1_avg_projection_m},
          {"Q2", m.q2_length_metric},
          {"Q3", m.q3_complexity_ratio},
          {"T1", m.t1_revisited_edges},
          {"T2", m.t2_revisited_streets},
          {"T3", m.t3_loops},
          {"S1", m.s1_speed_rel_dev}};
}

TrajectoryMetrics compute_metrics(const Trajectory &traj, const MatchResult &result,
                                  const RoadNetwork &net) {
  TrajectoryMetrics m;
  m.trajectory_id = result.trajectory_id;
  const std::size_t n = traj.points.size();

  m.e1_runtime_s = result.runtime_s;
  double total_candidates = 0;
  for (std::size_t c : result.layer_sizes)
    total_candidates += static_cast<double>(c);
  m.e3_total_candidates = total_candidates;
  m.e2_avg_candidates = n ? total_candidates / static_cast<double>(n) : 0;

  double proj_sum = 0;
  for (double d : result.projection_distances_m)
    proj_sum += d;
  m.q1_avg_projection_m = n ? proj_sum / static_cast<double>(n) : 0;

  double chord_sum = 0;
  for (std::size_t i = 1; i < n; ++i)
    chord_sum += (traj.points[i].pos - traj.points[i - 1].pos).norm();
  double path_sum = 0;
  for (const NetworkPath &p : result.transition_paths)
    path_sum += p.length_m;

  if (path_sum > 0)
    m.q2_length_metric = chord_sum / path_sum;
  if (n >= 2) {
    double end_chord = (traj.points.back().pos - traj.points.front().pos).norm();
    if (end_chord > 0)
      m.q3_complexity_ratio = path_sum / end_chord;
  }

  m.t1_revisited_edges =
      static_cast<double>(count_revisited_edges(result.route_edges));
  m.t2_revisited_streets =
      static_cast<double>(count_revisited_streets(result.route_edges, net));
  m.t3_loops = static_cast<double>(count_loops(result.route_edges, net));

  double elapsed = n >= 2 ? traj.points.back().t - traj.points.front().t : 0;
  if (elapsed > 0 && chord_sum > 0)
    m.s1_speed_rel_dev = std::abs(chord_sum - path_sum) / chord_sum;
  return m;
}

std::size_t count_revisited_edges(std::span<const std::size_t> edges) {
  std::unordered_map<std::size_t, std::size_t> counts;
  for (std::size_t e : edges)
    ++counts[e];
  std::size_t revisited = 0;
  for (auto &[e, c] : counts)
    if (c > 1)
      ++revisited;
  return revisited;
}

std::size_t count_revisited_streets(std::span<const std::size_t> edges,
                                    const RoadNetwork &net) {
  // Compress the path into maximal runs of one street, then count streets
  // with at least two runs.
  std::vector<std::string> runs;
  for (std::size_t ei : edges) {
    const Edge &e = net.edges[ei];
    std::string key =
        e.street_name.empty() ? "edge:" + e.id : "street:" + e.street_name;
    if (runs.empty() || runs.back() != key)
      runs.push_back(key);
  }
  std::map<std::string, std::size_t> run_counts;
  for (const std::string &k : runs)
    ++run_counts[k];
  std::size_t revisited = 0;
  for (auto &[k, c] : run_counts)
    if (c >= 2)
      ++revisited;
  return revisited;
}

std::size_t count_loops(std::span<const std::size_t> edges, const RoadNetwork &net) {
  if (edges.empty())
    return 0;
  std::vector<std::size_t> nodes;
  nodes.push_back(net.edges[edges[0]].from);
  for (std::size_t ei : edges) {
    if (net.edges[ei].from != nodes.back())
      nodes.push_back(net.edges[ei].from);
    nodes.push_back(net.edges[ei].to);
  }
  std::unordered_set<std::size_t> visited{nodes[0]};
  std::size_t loops = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (visited.contains(nodes[i])) {
      ++loops;
      visited.clear();
    }
    visited.insert(nodes[i]);
  }
  return loops;
}

namespace {

struct Moments {
  double mean = 0;
  double var = 0; // sample variance, n - 1
  std::size_t n = 0;
};

Moments moments(std::span<const double> xs) {
  Moments m;
  m.n = xs.size();
  for (double x : xs)
    m.mean += x;
  m.mean /= static_cast<double>(m.n);
  for (double x : xs)
    m.var += (x - m.mean) * (x - m.mean);
  m.var = m.n > 1 ? m.var / static_cast<double>(m.n - 1) : 0;
  return m;
}

double two_sided_p(double t, double df) {
  boost::math::students_t_distribution<double> dist(df);
  return 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

TTestResult from_mean_and_se(double diff, double se, double df_exact,
                             double df_fallback) {
  TTestResult r;
  if (se == 0) {
    r.df = df_fallback;
    if (diff == 0) {
      r.t = 0;
      r.p = 1;
    } else {
      r.t = diff > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      r.p = 0;
    }
    return r;
  }
  r.t = diff / se;
  r.df = df_exact;
  r.p = two_sided_p(r.t, r.df);
  return r;
}

} // namespace

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw StatsError("welch t-test needs at least 2 samples per group");
  Moments ma = moments(a);
  Moments mb = moments(b);
  double va_n = ma.var / static_cast<double>(ma.n);
  double vb_n = mb.var / static_cast<double>(mb.n);
  double se = std::sqrt(va_n + vb_n);
  double df = 0;
  if (se > 0) {
    df = (va_n + vb_n) * (va_n + vb_n) /
         (va_n * va_n / static_cast<double>(ma.n - 1) +
          vb_n * vb_n / static_cast<double>(mb.n - 1));
  }
  return from_mean_and_se(ma.mean - mb.mean, se, df,
                          static_cast<double>(ma.n + mb.n - 2));
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw StatsError("paired t-test needs equally sized samples");
  if (a.size() < 2)
    throw StatsError("paired t-test needs at least 2 pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    d[i] = a[i] - b[i];
  Moments md = moments(d);
  double se = std::sqrt(md.var / static_cast<double>(md.n));
  double df = static_cast<double>(md.n - 1);
  return from_mean_and_se(md.mean, se, df, df);
}

namespace {

template <typename It>
std::size_t overlap_size(It begin, It end,
                         const std::unordered_set<std::string> &reference) {
  std::unordered_set<std::string> seen;
  std::size_t overlap = 0;
  for (It it = begin; it != end; ++it) {
    if (reference.contains(*it) && seen.insert(*it).second)
      ++overlap;
  }
  return overlap;
}

OverlapClass classify(std::size_t oa, std::size_t ob) {
  if (oa == ob)
    return OverlapClass::Equal;
  return oa > ob ? OverlapClass::ACloser : OverlapClass::BCloser;
}

} // namespace

OverlapClass edge_overlap_compare(std::span<const std::string> a,
                                  std::span<const std::string> b,
                                  std::span<const std::string> reference) {
  std::unordered_set<std::string> ref(reference.begin(), reference.end());
  return classify(overlap_size(a.begin(), a.end(), ref),
                  overlap_size(b.begin(), b.end(), ref));
}

OverlapClass edge_overlap_compare(const MatchResult &a, const MatchResult &b,
                                  const MatchResult &reference,
                                  const RoadNetwork &net) {
  std::string ida = original_id(a.trajectory_id);
  std::string idb = original_id(b.trajectory_id);
  std::string idr = original_id(reference.trajectory_id);
  if (ida != idb || ida != idr)
    throw UsageError("overlap comparison across different trajectories: " + ida +
                     ", " + idb + ", " + idr);
  auto ids_of = [&](const MatchResult &r) {
    std::vector<std::string> ids;
    ids.reserve(r.route_edges.size());
    for (std::size_t ei : r.route_edges)
      ids.push_back(net.edges[ei].id);
    return ids;
  };
  auto ia = ids_of(a), ib = ids_of(b), ir = ids_of(reference);
  return edge_overlap_compare(ia, ib, ir);
}

double OverlapTable::pct_equal() const {
  return total() ? 100.0 * static_cast<double>(equal) / static_cast<double>(total())
                 : 0;
}
double OverlapTable::pct_a_closer() const {
  return total()
             ? 100.0 * static_cast<double>(a_closer) / static_cast<double>(total())
             : 0;
}
double OverlapTable::pct_b_closer() const {
  return total()
             ? 100.0 * static_cast<double>(b_closer) / static_cast<double>(total())
             : 0;
}

ComparisonReport aggregate_report(const std::vector<TrajectoryMetrics> &a,
                                  const std::vector<TrajectoryMetrics> &b,
                                  bool paired, const std::string &label_a,
                                  const std::string &label_b) {
  std::map<std::string, const TrajectoryMetrics *> by_id_a, by_id_b;
  for (const TrajectoryMetrics &m : a)
    by_id_a.emplace(original_id(m.trajectory_id), &m);
  for (const TrajectoryMetrics &m : b)
    by_id_b.emplace(original_id(m.trajectory_id), &m);

  ComparisonReport report;
  std::vector<std::pair<const TrajectoryMetrics *, const TrajectoryMetrics *>> pairs;
  for (auto &[id, ma] : by_id_a) {
    auto it = by_id_b.find(id);
    if (it != by_id_b.end())
      pairs.emplace_back(ma, it->second);
    else
      ++report.n_only_a;
  }
  for (auto &[id, mb] : by_id_b) {
    if (!by_id_a.contains(id))
      ++report.n_only_b;
  }
  if (pairs.empty())
    throw UsageError("no shared trajectory ids between the two metric sets");
  report.n_shared = pairs.size();

  for (auto [ma, mb] : pairs) {
    for (const MetricValue &v : metric_values(*ma))
      report.long_rows.push_back({ma->trajectory_id, label_a, v.name, v.value});
    for (const MetricValue &v : metric_values(*mb))
      report.long_rows.push_back({mb->trajectory_id, label_b, v.name, v.value});
  }

  auto names = metric_values(TrajectoryMetrics{});
  for (std::size_t k = 0; k < names.size(); ++k) {
    MetricSummary s;
    s.metric = names[k].name;
    std::vector<double> xs, ys;
    for (auto [ma, mb] : pairs) {
      auto va = metric_values(*ma)[k].value;
      auto vb = metric_values(*mb)[k].value;
      if (!va || !vb)
        continue; // a missing value on either side drops the pair
      xs.push_back(*va);
      ys.push_back(*vb);
    }
    s.n_pairs = xs.size();
    if (!xs.empty()) {
      for (double x : xs)
        s.mean_a += x;
      s.mean_a /= static_cast<double>(xs.size());
      for (double y : ys)
        s.mean_b += y;
      s.mean_b /= static_cast<double>(ys.size());
    }
    if (xs.size() >= 2)
      s.test = paired ? paired_t_test(xs, ys) : welch_t_test(xs, ys);
    report.metrics.push_back(std::move(s));
  }
  return report;
}

} // namespace stmatch
