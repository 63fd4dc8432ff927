#include "stmatch/behavioral.hpp"

#include "stmatch/csv.hpp"
#include "stmatch/errors.hpp"
#include "stmatch/log.hpp"
#include "stmatch/matcher.hpp"
#include "stmatch/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace stmatch {

double normalized_usage(std::uint64_t raw, std::uint64_t max_raw) {
  if (max_raw == 0)
    return 0.0;
  return std::log(static_cast<double>(raw) + 1.0) /
         std::log(static_cast<double>(max_raw) + 1.0);
}

EdgeUsageScores accumulate_edge_usage(const RoadNetwork &net,
                                      const std::vector<Trajectory> &trajectories,
                                      const MatchConfig &config,
                                      const AccumulateOptions &options) {
  config.validate();
  std::size_t workers = std::max<std::size_t>(options.workers, 1);
  // Per-trajectory counts merge by sum, so the split across workers cannot
  // change the totals.
  std::vector<std::vector<std::uint64_t>> partial(
      trajectories.size(), std::vector<std::uint64_t>());
  std::vector<std::size_t> no_candidates(trajectories.size(), 0);

  parallel_for_each(trajectories.size(), workers, [&](std::size_t ti) {
    const Trajectory &t = trajectories[ti];
    std::vector<std::uint64_t> counts(net.edges.size(), 0);
    if (options.matched_path_only) {
      MatchConfig mc = config;
      mc.variant = Variant::Modified;
      try {
        MatchResult r = match_trajectory(net, t, mc);
        for (std::size_t ei : r.route_edges)
          ++counts[ei];
      } catch (const MatchError &e) {
        log::debug("train", t.id, ": skipped (", e.what(), ")");
      }
    } else {
      for (const GpsPoint &p : t.points) {
        CandidateLayer layer =
            prepare_candidates_dynamic(net, p.pos, p.uncertainty_m, config);
        if (layer.candidates.empty()) {
          ++no_candidates[ti];
          continue;
        }
        for (const Candidate &c : layer.candidates)
          ++counts[c.position.edge];
      }
    }
    partial[ti] = std::move(counts);
  });

  EdgeUsageScores scores;
  scores.raw.assign(net.edges.size(), 0);
  std::size_t skipped = 0;
  for (std::size_t ti = 0; ti < trajectories.size(); ++ti) {
    skipped += no_candidates[ti];
    if (partial[ti].empty())
      continue;
    for (std::size_t i = 0; i < net.edges.size(); ++i)
      scores.raw[i] += partial[ti][i];
  }
  if (skipped)
    log::warn("train", skipped, " points had no candidate edges");
  normalize_edge_scores(scores);
  return scores;
}

void normalize_edge_scores(EdgeUsageScores &scores) {
  scores.max_raw = scores.raw.empty()
                       ? 0
                       : *std::max_element(scores.raw.begin(), scores.raw.end());
  scores.normalized.resize(scores.raw.size());
  for (std::size_t i = 0; i < scores.raw.size(); ++i)
    scores.normalized[i] = normalized_usage(scores.raw[i], scores.max_raw);
}

double behavioral_score(const NetworkPath &path, const EdgeUsageScores &scores,
                        std::uint64_t *unknown) {
  const std::vector<std::size_t> *edges = &path.edges;
  std::vector<std::size_t> fallback;
  if (edges->empty()) {
    fallback.push_back(path.entry.edge);
    edges = &fallback;
  }
  double sum = 0;
  for (std::size_t ei : *edges) {
    if (ei < scores.normalized.size()) {
      sum += scores.normalized[ei];
    } else if (unknown) {
      ++*unknown;
    }
  }
  return sum / static_cast<double>(edges->size());
}

void write_edge_scores(const std::string &path, const RoadNetwork &net,
                       const EdgeUsageScores &scores,
                       const std::string &header_comment) {
  if (scores.raw.size() != net.edges.size())
    throw StatsError("edge score table does not match the network");
  auto out = open_output(path);
  if (!header_comment.empty())
    out << "# " << header_comment << "\n";
  out << "edge_id,raw_count,normalized\n";
  std::vector<std::size_t> order(net.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return net.edges[a].id < net.edges[b].id;
  });
  out.precision(12);
  for (std::size_t i : order) {
    out << csv_field(net.edges[i].id) << "," << scores.raw[i] << ","
         << scores.normalized[i] << "\n";
  }
}

EdgeUsageScores load_edge_scores(const std::string &path, RoadNetwork &net) {
  auto in = open_input(path);
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next_row(row))
    throw FormatError(path + ": empty file");
  auto cols = csv_header_indices(row, {"edge_id", "raw_count", "normalized"}, path);
  EdgeUsageScores scores;
  scores.raw.assign(net.edges.size(), 0);
  scores.normalized.assign(net.edges.size(), 0.0);
  while (reader.next_row(row)) {
    if (row.size() <= *std::max_element(cols.begin(), cols.end()))
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": too few fields");
    auto it = net.edge_index.find(row[cols[0]]);
    if (it == net.edge_index.end())
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": unknown edge " + row[cols[0]]);
    try {
      scores.raw[it->second] = std::stoull(row[cols[1]]);
      scores.normalized[it->second] = std::stod(row[cols[2]]);
    } catch (const std::exception &) {
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": bad numeric field");
    }
  }
  scores.max_raw = scores.raw.empty()
                       ? 0
                       : *std::max_element(scores.raw.begin(), scores.raw.end());
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    net.edges[i].usage_count = scores.raw[i];
    net.edges[i].usage_score_norm = scores.normalized[i];
  }
  return scores;
}

} // namespace stmatch
