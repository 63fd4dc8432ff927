#pragma once

#include "stmatch/road_network.hpp"
#include "stmatch/scoring.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace stmatch {

struct RunConfig {
  std::string nodes_path;
  std::string edges_path;
  std::string trajectories_path;
  std::string polygon_path;     // optional
  std::string edge_scores_path; // optional, required for stb matching
  std::string output_dir = "out";

  CoordMode mode = CoordMode::Planar;

  // preprocessing thresholds
  std::size_t n_min = 10;
  double v_min_kmh = 6;
  double min_interval_s = 120;

  std::map<std::string, double> speed_defaults;

  MatchConfig match_st;
  MatchConfig match_modified;
  MatchConfig match_stb;

  std::size_t train_sample = 0; // 0 means the whole corpus
  std::size_t match_sample = 0;
  std::uint64_t seed = 42;
  std::size_t workers = 1;

  const MatchConfig &match_for(Variant v) const;
};

// Parses the JSON config and checks every referenced input path exists.
RunConfig load_run_config(const std::string &path);

// One seeded shuffle drives both subsets, so a train/eval split from the
// same corpus stays disjoint while it fits.
struct SampleSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> eval;
  std::size_t overlap = 0;
};
SampleSplit sample_split(std::size_t n, std::size_t train_k, std::size_t eval_k,
                         std::uint64_t seed);

int cmd_preprocess(const RunConfig &config);
int cmd_downsample(const RunConfig &config);
int cmd_train_scores(const RunConfig &config);
int cmd_match(const RunConfig &config, Variant variant, bool geojson);
int cmd_compare(const RunConfig &config, const std::string &dir_a,
                const std::string &dir_b, const std::string &dir_reference,
                bool paired);
int cmd_network_stats(const RunConfig &config);

} // namespace stmatch
