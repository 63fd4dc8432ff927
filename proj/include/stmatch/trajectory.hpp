#pragma once

#include "stmatch/geometry.hpp"
#include "stmatch/road_network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stmatch {

struct GpsPoint {
  Vec2 pos = Vec2::Zero();
  double t = 0; // seconds since the Unix epoch
  double uncertainty_m = 0;
};

struct Trajectory {
  std::string id;
  std::vector<GpsPoint> points;
};

struct LoadStats {
  std::size_t rows = 0;
  std::size_t duplicate_timestamps = 0;
  std::size_t dropped_short = 0; // trajectories with fewer than 2 points
};

// Parses "YYYY-MM-DDTHH:MM:SS[.fff][Z]" or raw epoch seconds.
double parse_timestamp(const std::string &text);
std::string format_timestamp(double t);

// Computes the projection origin from the mean lat/lon across all rows.
PlanarProjection projection_from_file(const std::string &path);

// Loads trajectories sorted by id; points sorted by time within each.
// projection is required in Geographic mode and ignored in Planar mode.
std::vector<Trajectory> load_trajectories(const std::string &path, CoordMode mode,
                                          const PlanarProjection *projection,
                                          LoadStats *stats = nullptr);

void write_trajectories(const std::string &path,
                        const std::vector<Trajectory> &trajectories, CoordMode mode,
                        const PlanarProjection *projection,
                        const std::string &header_comment = "");

// Drops points outside the polygon; trajectories left with fewer than 2
// points are removed entirely.
std::vector<Trajectory> filter_by_polygon(std::vector<Trajectory> trajectories,
                                          const std::vector<Vec2> &polygon);

std::vector<Trajectory> filter_min_points(std::vector<Trajectory> trajectories,
                                          std::size_t n_min);

// Average speed = straight-line chord sum / elapsed time.
std::vector<Trajectory> filter_min_avg_speed(std::vector<Trajectory> trajectories,
                                             double v_min_kmh);

double mean_sampling_interval(const Trajectory &t);
double corpus_mean_interval(const std::vector<Trajectory> &trajectories);

// Keeps the first point, then greedily each next point at least
// min_interval_s after the last kept one. nullopt when the result would
// have fewer than 2 points. The id gains a "_lf<interval>" suffix.
std::optional<Trajectory> downsample_low_frequency(const Trajectory &t,
                                                   double min_interval_s);

// Strips a "_lf<interval>" suffix if present.
std::string original_id(const std::string &trajectory_id);

} // namespace stmatch
