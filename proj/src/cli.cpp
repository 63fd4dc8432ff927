#include "stmatch/cli.hpp"

#include "stmatch/behavioral.hpp"
#include "stmatch/csv.hpp"
#include "stmatch/errors.hpp"
#include "stmatch/evaluation.hpp"
#include "stmatch/log.hpp"
#include "stmatch/matcher.hpp"
#include "stmatch/parallel.hpp"
#include "stmatch/trajectory.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

namespace stmatch {

namespace fs = std::filesystem;
using nlohmann::json;

const MatchConfig &RunConfig::match_for(Variant v) const {
  switch (v) {
  case Variant::St:
    return match_st;
  case Variant::Modified:
    return match_modified;
  case Variant::Stb:
    return match_stb;
  }
  return match_st;
}

namespace {

void require_exists(const std::string &path, const char *what) {
  if (!path.empty() && !fs::exists(path))
    throw ConfigError(std::string(what) + " path does not exist: " + path);
}

MatchConfig parse_match_section(const json &j, MatchConfig base) {
  if (j.contains("fixed_radius_m"))
    base.fixed_radius_m = j.at("fixed_radius_m").get<double>();
  if (j.contains("sigma_m"))
    base.sigma_m = j.at("sigma_m").get<double>();
  if (j.contains("max_candidates"))
    base.max_candidates = j.at("max_candidates").get<std::size_t>();
  if (j.contains("r_max_m"))
    base.r_max_m = j.at("r_max_m").get<double>();
  if (j.contains("buffer_step_m"))
    base.buffer_step_m = j.at("buffer_step_m").get<double>();
  if (j.contains("sigma_min_m"))
    base.sigma_min_m = j.at("sigma_min_m").get<double>();
  if (j.contains("sigma_max_m"))
    base.sigma_max_m = j.at("sigma_max_m").get<double>();
  if (j.contains("dynamic_max_candidates")) {
    const auto &v = j.at("dynamic_max_candidates");
    if (v.is_null())
      base.dynamic_max_candidates.reset();
    else
      base.dynamic_max_candidates = v.get<std::size_t>();
  }
  if (j.contains("observation_form")) {
    std::string f = j.at("observation_form").get<std::string>();
    if (f == "printed")
      base.observation_form = ObservationForm::Printed;
    else if (f == "standard")
      base.observation_form = ObservationForm::Standard;
    else
      throw ConfigError("unknown observation_form: " + f);
  }
  if (j.contains("dispersion_form")) {
    std::string f = j.at("dispersion_form").get<std::string>();
    if (f == "stddev")
      base.dispersion_form = DispersionForm::StdDev;
    else if (f == "variance")
      base.dispersion_form = DispersionForm::Variance;
    else
      throw ConfigError("unknown dispersion_form: " + f);
  }
  return base;
}

std::string seed_header(const RunConfig &config) {
  return "generator=mt19937_64 seed=" + std::to_string(config.seed);
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string format_optional(const std::optional<double> &v) {
  return v ? format_double(*v) : "NA";
}

PlanarProjection projection_for_trajectories(const RunConfig &config) {
  return projection_from_file(config.trajectories_path);
}

std::vector<Vec2> load_polygon(const RunConfig &config,
                               const PlanarProjection *projection) {
  std::ifstream in(config.polygon_path);
  if (!in)
    throw ConfigError("cannot open polygon file: " + config.polygon_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto raw = parse_wkt_polygon(buffer.str());
  if (config.mode == CoordMode::Planar)
    return raw;
  std::vector<Vec2> projected;
  projected.reserve(raw.size());
  // WKT carries lon lat order
  for (const Vec2 &p : raw)
    projected.push_back(projection->to_planar(p.y(), p.x()));
  return projected;
}

} // namespace

RunConfig load_run_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ConfigError(path + ": " + e.what());
  }

  RunConfig config;
  try {
    if (j.contains("paths")) {
      const json &p = j.at("paths");
      if (p.contains("nodes"))
        config.nodes_path = p.at("nodes").get<std::string>();
      if (p.contains("edges"))
        config.edges_path = p.at("edges").get<std::string>();
      if (p.contains("trajectories"))
        config.trajectories_path = p.at("trajectories").get<std::string>();
      if (p.contains("polygon"))
        config.polygon_path = p.at("polygon").get<std::string>();
      if (p.contains("edge_scores"))
        config.edge_scores_path = p.at("edge_scores").get<std::string>();
      if (p.contains("output_dir"))
        config.output_dir = p.at("output_dir").get<std::string>();
    }
    if (j.contains("projection")) {
      std::string m = j.at("projection").get<std::string>();
      if (m == "planar")
        config.mode = CoordMode::Planar;
      else if (m == "geographic")
        config.mode = CoordMode::Geographic;
      else
        throw ConfigError("unknown projection mode: " + m);
    }
    if (j.contains("preprocess")) {
      const json &p = j.at("preprocess");
      if (p.contains("n_min"))
        config.n_min = p.at("n_min").get<std::size_t>();
      if (p.contains("v_min_kmh"))
        config.v_min_kmh = p.at("v_min_kmh").get<double>();
      if (p.contains("min_interval_s"))
        config.min_interval_s = p.at("min_interval_s").get<double>();
    }
    if (j.contains("speed_defaults")) {
      for (auto &[key, value] : j.at("speed_defaults").items())
        config.speed_defaults[key] = value.get<double>();
    }
    MatchConfig st_base;
    st_base.variant = Variant::St;
    MatchConfig dyn_base;
    dyn_base.variant = Variant::Modified;
    if (j.contains("match")) {
      const json &m = j.at("match");
      if (m.contains("st"))
        config.match_st = parse_match_section(m.at("st"), st_base);
      else
        config.match_st = st_base;
      if (m.contains("modified"))
        config.match_modified = parse_match_section(m.at("modified"), dyn_base);
      else
        config.match_modified = dyn_base;
      MatchConfig stb_base = config.match_modified;
      stb_base.variant = Variant::Stb;
      if (m.contains("stb"))
        config.match_stb = parse_match_section(m.at("stb"), stb_base);
      else
        config.match_stb = stb_base;
    } else {
      config.match_st = st_base;
      config.match_modified = dyn_base;
      config.match_stb = dyn_base;
      config.match_stb.variant = Variant::Stb;
    }
    if (j.contains("sampling")) {
      const json &s = j.at("sampling");
      if (s.contains("train_sample"))
        config.train_sample = s.at("train_sample").get<std::size_t>();
      if (s.contains("match_sample"))
        config.match_sample = s.at("match_sample").get<std::size_t>();
      if (s.contains("seed"))
        config.seed = s.at("seed").get<std::uint64_t>();
    }
    if (j.contains("workers"))
      config.workers = j.at("workers").get<std::size_t>();
  } catch (const json::exception &e) {
    throw ConfigError(path + ": " + e.what());
  }

  if (config.workers == 0)
    config.workers = 1;
  config.match_st.validate();
  config.match_modified.validate();
  config.match_stb.validate();

  require_exists(config.nodes_path, "nodes");
  require_exists(config.edges_path, "edges");
  require_exists(config.trajectories_path, "trajectories");
  require_exists(config.polygon_path, "polygon");
  require_exists(config.edge_scores_path, "edge_scores");
  return config;
}

SampleSplit sample_split(std::size_t n, std::size_t train_k, std::size_t eval_k,
                         std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i)
    perm[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  SampleSplit split;
  if (train_k == 0 || train_k >= n) {
    split.train.assign(perm.begin(), perm.end());
  } else {
    split.train.assign(perm.begin(), perm.begin() + static_cast<long>(train_k));
  }
  if (eval_k == 0 || eval_k >= n) {
    split.eval.assign(perm.begin(), perm.end());
  } else {
    std::size_t start = train_k >= n ? 0 : train_k;
    for (std::size_t i = 0; i < eval_k; ++i)
      split.eval.push_back(perm[(start + i) % n]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.eval.begin(), split.eval.end());

  std::vector<std::size_t> common;
  std::set_intersection(split.train.begin(), split.train.end(), split.eval.begin(),
                        split.eval.end(), std::back_inserter(common));
  split.overlap = common.size();
  return split;
}

int cmd_preprocess(const RunConfig &config) {
  if (config.trajectories_path.empty())
    throw ConfigError("preprocess needs paths.trajectories");

  std::optional<PlanarProjection> projection;
  if (config.mode == CoordMode::Geographic)
    projection = projection_for_trajectories(config);

  auto trajectories = load_trajectories(config.trajectories_path, config.mode,
                                        projection ? &*projection : nullptr);
  std::size_t input_count = trajectories.size();

  std::size_t removed_polygon = 0;
  if (!config.polygon_path.empty()) {
    auto polygon = load_polygon(config, projection ? &*projection : nullptr);
    std::size_t before = trajectories.size();
    trajectories = filter_by_polygon(std::move(trajectories), polygon);
    removed_polygon = before - trajectories.size();
  }

  std::size_t before = trajectories.size();
  trajectories = filter_min_points(std::move(trajectories), config.n_min);
  std::size_t removed_points = before - trajectories.size();

  before = trajectories.size();
  trajectories = filter_min_avg_speed(std::move(trajectories), config.v_min_kmh);
  std::size_t removed_speed = before - trajectories.size();

  std::string out_path = config.output_dir + "/preprocessed.csv";
  write_trajectories(out_path, trajectories, config.mode,
                     projection ? &*projection : nullptr);

  std::cout << "input_trajectories=" << input_count << "\n"
            << "removed_polygon=" << removed_polygon << "\n"
            << "removed_min_points=" << removed_points << "\n"
            << "removed_min_speed=" << removed_speed << "\n"
            << "kept=" << trajectories.size() << "\n"
            << "mean_sampling_interval_s="
            << format_double(corpus_mean_interval(trajectories)) << "\n"
            << "output=" << out_path << "\n";

  if (trajectories.empty()) {
    log::error("preprocess", "no trajectories survive the filters");
    return 1;
  }
  return 0;
}

int cmd_downsample(const RunConfig &config) {
  if (config.trajectories_path.empty())
    throw ConfigError("downsample needs paths.trajectories");

  std::optional<PlanarProjection> projection;
  if (config.mode == CoordMode::Geographic)
    projection = projection_for_trajectories(config);

  auto trajectories = load_trajectories(config.trajectories_path, config.mode,
                                        projection ? &*projection : nullptr);
  std::vector<Trajectory> kept;
  std::size_t dropped = 0;
  for (const Trajectory &t : trajectories) {
    auto down = downsample_low_frequency(t, config.min_interval_s);
    if (down)
      kept.push_back(std::move(*down));
    else
      ++dropped;
  }
  std::string out_path = config.output_dir + "/downsampled.csv";
  write_trajectories(out_path, kept, config.mode,
                     projection ? &*projection : nullptr);
  std::cout << "input_trajectories=" << trajectories.size() << "\n"
            << "kept=" << kept.size() << "\n"
            << "dropped=" << dropped << "\n"
            << "min_interval_s=" << format_double(config.min_interval_s) << "\n"
            << "output=" << out_path << "\n";
  return 0;
}

int cmd_train_scores(const RunConfig &config) {
  if (config.nodes_path.empty() || config.edges_path.empty())
    throw ConfigError("train-scores needs paths.nodes and paths.edges");
  if (config.trajectories_path.empty())
    throw ConfigError("train-scores needs paths.trajectories");

  RoadNetwork net =
      load_network(config.nodes_path, config.edges_path, config.mode);
  auto trajectories =
      load_trajectories(config.trajectories_path, config.mode,
                        net.projection ? &*net.projection : nullptr);

  auto split = sample_split(trajectories.size(), config.train_sample,
                            config.match_sample, config.seed);
  if (split.overlap > 0)
    log::warn("train", split.overlap,
              " trajectories appear in both the training and evaluation samples");

  std::vector<Trajectory> selected;
  selected.reserve(split.train.size());
  for (std::size_t i : split.train)
    selected.push_back(trajectories[i]);
  if (selected.empty())
    log::warn("train", "no training trajectories; scores will be all zero");

  AccumulateOptions options;
  options.workers = config.workers;
  EdgeUsageScores scores =
      accumulate_edge_usage(net, selected, config.match_modified, options);

  std::string out_path = config.output_dir + "/edge_scores.csv";
  write_edge_scores(out_path, net, scores, seed_header(config));
  std::cout << "trained_on=" << selected.size() << "\n"
            << "max_raw=" << scores.max_raw << "\n"
            << "output=" << out_path << "\n";
  return 0;
}

namespace {

struct MatchOutcome {
  bool ok = false;
  MatchResult result;
  TrajectoryMetrics metrics;
  std::string error;
  long gps_index = -1;
};

void write_match_outputs(const RunConfig &config, Variant variant,
                         const RoadNetwork &net,
                         const std::vector<Trajectory> &trajectories,
                         const std::vector<MatchOutcome> &outcomes, bool geojson) {
  std::string dir = config.output_dir + "/match_" + to_string(variant);
  std::string seed_line = seed_header(config);

  // Runtime is deliberately absent here; it lives only in the metrics file
  // (e1 column) so every other output is byte-stable across reruns.
  auto summary = open_output(dir + "/summary.csv");
  summary << "# " << seed_line << "\n"
           << "trajectory_id,variant,points,total_candidates,route_edges,"
              "matched_length_m,total_score\n";
  auto paths = open_output(dir + "/paths.csv");
  paths << "# " << seed_line << "\n"
         << "trajectory_id,edge_ids\n";
  auto metrics = open_output(dir + "/metrics.csv");
  metrics << "# " << seed_line << "\n"
           << "trajectory_id,variant,e1_runtime_s,e2_avg_candidates,"
              "e3_total_candidates,q1_avg_projection_m,q2_length_metric,"
              "q3_complexity_ratio,t1_revisited_edges,t2_revisited_streets,"
              "t3_loops,s1_speed_rel_dev\n";
  auto failures = open_output(dir + "/failures.csv");
  failures << "# " << seed_line << "\n"
            << "trajectory_id,gps_index,reason\n";

  json features = json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const MatchOutcome &o = outcomes[i];
    const Trajectory &t = trajectories[i];
    if (!o.ok) {
      failures << csv_field(t.id) << "," << o.gps_index << ","
                << csv_field(o.error) << "\n";
      continue;
    }
    double length = 0;
    for (const NetworkPath &p : o.result.transition_paths)
      length += p.length_m;
    std::size_t total_candidates = 0;
    for (std::size_t c : o.result.layer_sizes)
      total_candidates += c;
    summary << csv_field(t.id) << "," << to_string(variant) << ","
             << t.points.size() << "," << total_candidates << ","
             << o.result.route_edges.size() << "," << format_double(length) << ","
             << format_double(o.result.total_score) << "\n";

    std::string joined;
    for (std::size_t ei : o.result.route_edges) {
      if (!joined.empty())
        joined += ";";
      joined += net.edges[ei].id;
    }
    paths << csv_field(t.id) << "," << csv_field(joined) << "\n";

    const TrajectoryMetrics &m = o.metrics;
    metrics << csv_field(t.id) << "," << to_string(variant);
    for (const MetricValue &v : metric_values(m))
      metrics << "," << format_optional(v.value);
    metrics << "\n";

    if (geojson) {
      std::vector<Vec2> geometry;
      for (const NetworkPath &p : o.result.transition_paths) {
        auto part = path_geometry(net, p);
        for (const Vec2 &pt : part) {
          if (geometry.empty() || (geometry.back() - pt).norm() > 1e-9)
            geometry.push_back(pt);
        }
      }
      json coords = json::array();
      for (const Vec2 &pt : geometry) {
        if (net.projection) {
          double lat, lon;
          net.projection->to_geographic(pt, lat, lon);
          coords.push_back({lon, lat});
        } else {
          coords.push_back({pt.x(), pt.y()});
        }
      }
      features.push_back({{"type", "Feature"},
                          {"properties", {{"trajectory_id", t.id}}},
                          {"geometry",
                           {{"type", "LineString"}, {"coordinates", coords}}}});
    }
  }

  if (geojson) {
    json fc = {{"type", "FeatureCollection"}, {"features", features}};
    auto out = open_output(dir + "/matched.geojson");
    out << fc.dump(2) << "\n";
  }
}

} // namespace

int cmd_match(const RunConfig &config, Variant variant, bool geojson) {
  if (config.nodes_path.empty() || config.edges_path.empty())
    throw ConfigError("match needs paths.nodes and paths.edges");
  if (config.trajectories_path.empty())
    throw ConfigError("match needs paths.trajectories");
  if (variant == Variant::Stb && config.edge_scores_path.empty())
    throw ConfigError("stb matching needs paths.edge_scores");

  RoadNetwork net =
      load_network(config.nodes_path, config.edges_path, config.mode);
  impute_speed_limits(net, config.speed_defaults);

  EdgeUsageScores scores;
  bool have_scores = false;
  if (variant == Variant::Stb) {
    scores = load_edge_scores(config.edge_scores_path, net);
    have_scores = true;
  }

  auto all = load_trajectories(config.trajectories_path, config.mode,
                               net.projection ? &*net.projection : nullptr);
  auto split = sample_split(all.size(), config.train_sample, config.match_sample,
                            config.seed);
  if (config.match_sample > 0 && split.overlap > 0)
    log::warn("match", split.overlap,
              " trajectories appear in both the training and evaluation samples");

  std::vector<Trajectory> selected;
  if (config.match_sample == 0) {
    selected = std::move(all);
  } else {
    selected.reserve(split.eval.size());
    for (std::size_t i : split.eval)
      selected.push_back(all[i]);
  }

  const MatchConfig &mc = config.match_for(variant);
  std::vector<MatchOutcome> outcomes(selected.size());
  parallel_for_each(selected.size(), config.workers, [&](std::size_t i) {
    MatchOutcome &o = outcomes[i];
    try {
      RouteCache cache;
      o.result = match_trajectory(net, selected[i], mc,
                                  have_scores ? &scores : nullptr, &cache);
      o.metrics = compute_metrics(selected[i], o.result, net);
      o.ok = true;
    } catch (const MatchError &e) {
      o.error = e.what();
      o.gps_index = e.gps_index();
    }
  });

  write_match_outputs(config, variant, net, selected, outcomes, geojson);

  std::size_t failed = 0;
  for (const MatchOutcome &o : outcomes)
    if (!o.ok)
      ++failed;
  std::cout << "variant=" << to_string(variant) << "\n"
            << "matched=" << outcomes.size() - failed << "\n"
            << "failed=" << failed << "\n"
            << "output_dir=" << config.output_dir + "/match_" + to_string(variant)
            << "\n";
  return failed == 0 ? 0 : 1;
}

namespace {

std::vector<TrajectoryMetrics> read_metrics_file(const std::string &dir,
                                                 std::string *variant_label) {
  std::string path = dir + "/metrics.csv";
  auto in = open_input(path);
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next_row(row))
    throw FormatError(path + ": empty file");
  auto cols = csv_header_indices(
      row,
      {"trajectory_id", "variant", "e1_runtime_s", "e2_avg_candidates",
       "e3_total_candidates", "q1_avg_projection_m", "q2_length_metric",
       "q3_complexity_ratio", "t1_revisited_edges", "t2_revisited_streets",
       "t3_loops", "s1_speed_rel_dev"},
      path);
  std::vector<TrajectoryMetrics> out;
  auto parse_opt = [&](const std::string &field) -> std::optional<double> {
    if (field == "NA" || field.empty())
      return std::nullopt;
    return std::stod(field);
  };
  while (reader.next_row(row)) {
    if (row.size() <= *std::max_element(cols.begin(), cols.end()))
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": too few fields");
    TrajectoryMetrics m;
    m.trajectory_id = row[cols[0]];
    if (variant_label && variant_label->empty())
      *variant_label = row[cols[1]];
    try {
      m.e1_runtime_s = std::stod(row[cols[2]]);
      m.e2_avg_candidates = std::stod(row[cols[3]]);
      m.e3_total_candidates = std::stod(row[cols[4]]);
      m.q1_avg_projection_m = std::stod(row[cols[5]]);
      m.q2_length_metric = parse_opt(row[cols[6]]);
      m.q3_complexity_ratio = parse_opt(row[cols[7]]);
      m.t1_revisited_edges = std::stod(row[cols[8]]);
      m.t2_revisited_streets = std::stod(row[cols[9]]);
      m.t3_loops = std::stod(row[cols[10]]);
      m.s1_speed_rel_dev = parse_opt(row[cols[11]]);
    } catch (const std::exception &) {
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": bad numeric field");
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::map<std::string, std::vector<std::string>>
read_paths_file(const std::string &dir) {
  std::string path = dir + "/paths.csv";
  auto in = open_input(path);
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next_row(row))
    throw FormatError(path + ": empty file");
  auto cols = csv_header_indices(row, {"trajectory_id", "edge_ids"}, path);
  std::map<std::string, std::vector<std::string>> out;
  while (reader.next_row(row)) {
    if (row.size() <= std::max(cols[0], cols[1]))
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": too few fields");
    std::vector<std::string> ids;
    std::istringstream ss(row[cols[1]]);
    std::string id;
    while (std::getline(ss, id, ';'))
      ids.push_back(id);
    out[original_id(row[cols[0]])] = std::move(ids);
  }
  return out;
}

} // namespace

int cmd_compare(const RunConfig &config, const std::string &dir_a,
                const std::string &dir_b, const std::string &dir_reference,
                bool paired) {
  std::string label_a, label_b;
  auto metrics_a = read_metrics_file(dir_a, &label_a);
  auto metrics_b = read_metrics_file(dir_b, &label_b);
  if (label_a.empty())
    label_a = "a";
  if (label_b.empty())
    label_b = "b";
  if (label_a == label_b) {
    label_a += "_a";
    label_b += "_b";
  }

  ComparisonReport report =
      aggregate_report(metrics_a, metrics_b, paired, label_a, label_b);

  std::string dir = config.output_dir + "/compare";
  auto rep = open_output(dir + "/report.csv");
  rep << "metric,mean_a,mean_b,t,p,n_pairs\n";
  for (const MetricSummary &s : report.metrics) {
    rep << s.metric << "," << format_double(s.mean_a) << ","
         << format_double(s.mean_b) << ",";
    if (s.test)
      rep << format_double(s.test->t) << "," << format_double(s.test->p);
    else
      rep << "NA,NA";
    rep << "," << s.n_pairs << "\n";
  }

  auto long_out = open_output(dir + "/long.csv");
  long_out << "trajectory_id,variant,metric,value\n";
  for (const LongRow &r : report.long_rows) {
    long_out << csv_field(r.trajectory_id) << "," << csv_field(r.variant) << ","
              << r.metric << "," << format_optional(r.value) << "\n";
  }

  std::cout << "shared_trajectories=" << report.n_shared << "\n"
            << "only_a=" << report.n_only_a << "\n"
            << "only_b=" << report.n_only_b << "\n";

  if (!dir_reference.empty()) {
    auto paths_a = read_paths_file(dir_a);
    auto paths_b = read_paths_file(dir_b);
    auto paths_ref = read_paths_file(dir_reference);
    OverlapTable table;
    for (auto &[id, ref_edges] : paths_ref) {
      auto ia = paths_a.find(id);
      auto ib = paths_b.find(id);
      if (ia == paths_a.end() || ib == paths_b.end())
        continue;
      switch (edge_overlap_compare(ia->second, ib->second, ref_edges)) {
      case OverlapClass::Equal:
        ++table.equal;
        break;
      case OverlapClass::ACloser:
        ++table.a_closer;
        break;
      case OverlapClass::BCloser:
        ++table.b_closer;
        break;
      }
    }
    if (table.total() == 0)
      throw UsageError("no trajectory ids shared by both results and the reference");
    auto overlap_out = open_output(dir + "/overlap.csv");
    overlap_out << "classification,count,percentage\n";
    overlap_out << "equal," << table.equal << ","
                 << format_double(table.pct_equal()) << "\n";
    overlap_out << "a_closer," << table.a_closer << ","
                 << format_double(table.pct_a_closer()) << "\n";
    overlap_out << "b_closer," << table.b_closer << ","
                 << format_double(table.pct_b_closer()) << "\n";
    std::cout << "overlap_equal=" << table.equal << "\n"
              << "overlap_a_closer=" << table.a_closer << "\n"
              << "overlap_b_closer=" << table.b_closer << "\n";
  }
  std::cout << "output_dir=" << dir << "\n";
  return 0;
}

int cmd_network_stats(const RunConfig &config) {
  if (config.nodes_path.empty() || config.edges_path.empty())
    throw ConfigError("network-stats needs paths.nodes and paths.edges");
  RoadNetwork net =
      load_network(config.nodes_path, config.edges_path, config.mode);
  double total_length = 0;
  for (const Edge &e : net.edges)
    total_length += e.length_m;
  std::cout << "nodes=" << net.nodes.size() << "\n"
            << "edges=" << net.edges.size() << "\n"
            << "total_length_km=" << format_double(total_length / 1000.0) << "\n"
            << "mean_edge_length_m="
            << format_double(net.edges.empty()
                                 ? 0
                                 : total_length /
                                       static_cast<double>(net.edges.size()))
            << "\n"
            << "hop_diameter=" << hop_diameter(net) << "\n";
  return 0;
}

} // namespace stmatch
