#include "stmatch/trajectory.hpp"

#include "stmatch/csv.hpp"
#include "stmatch/errors.hpp"
#include "stmatch/log.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace stmatch {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// days-from-civil algorithm).
long long days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

void civil_from_days(long long z, int &y, unsigned &m, unsigned &d) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

} // namespace

double parse_timestamp(const std::string &text) {
  if (text.empty())
    throw FormatError("empty timestamp");
  bool iso = text.find('T') != std::string::npos || text.find('-') == 4;
  if (!iso) {
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used == text.size())
        return v;
    } catch (const std::exception &) {
    }
    throw FormatError("bad timestamp: " + text);
  }
  int y, mo, d, h, mi;
  double sec;
  char sep;
  if (std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%lf", &y, &mo, &d, &sep, &h, &mi,
                  &sec) != 7 ||
      (sep != 'T' && sep != ' '))
    throw FormatError("bad timestamp: " + text);
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || sec < 0 || sec >= 61)
    throw FormatError("timestamp out of range: " + text);
  return static_cast<double>(days_from_civil(y, static_cast<unsigned>(mo),
                                             static_cast<unsigned>(d))) *
             86400.0 +
         h * 3600.0 + mi * 60.0 + sec;
}

std::string format_timestamp(double t) {
  long long total = static_cast<long long>(std::floor(t));
  double frac = t - static_cast<double>(total);
  long long days = total / 86400;
  long long rem = total % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int y;
  unsigned mo, d;
  civil_from_days(days, y, mo, d);
  int h = static_cast<int>(rem / 3600);
  int mi = static_cast<int>((rem % 3600) / 60);
  int s = static_cast<int>(rem % 60);
  char buf[64];
  if (frac > 1e-4) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%06.3fZ", y, mo, d, h,
                  mi, s + frac);
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", y, mo, d, h,
                  mi, s);
  }
  return buf;
}

PlanarProjection projection_from_file(const std::string &path) {
  auto in = open_input(path);
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next_row(row))
    throw FormatError(path + ": empty file");
  auto cols = csv_header_indices(row, {"lat", "lon"}, path);
  double lat = 0, lon = 0;
  std::size_t n = 0;
  while (reader.next_row(row)) {
    if (row.size() <= std::max(cols[0], cols[1]))
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": too few fields");
    try {
      lat += std::stod(row[cols[0]]);
      lon += std::stod(row[cols[1]]);
    } catch (const std::exception &) {
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": bad coordinate");
    }
    ++n;
  }
  if (n == 0)
    throw FormatError(path + ": no data rows");
  return PlanarProjection(lat / static_cast<double>(n),
                          lon / static_cast<double>(n));
}

std::vector<Trajectory> load_trajectories(const std::string &path, CoordMode mode,
                                          const PlanarProjection *projection,
                                          LoadStats *stats) {
  if (mode == CoordMode::Geographic && !projection)
    throw ConfigError("geographic trajectories need a projection");

  auto in = open_input(path);
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next_row(row))
    throw FormatError(path + ": empty file");
  const char *xcol = mode == CoordMode::Planar ? "x" : "lat";
  const char *ycol = mode == CoordMode::Planar ? "y" : "lon";
  auto cols = csv_header_indices(
      row, {"trajectory_id", xcol, ycol, "uncertainty", "timestamp"}, path);

  std::map<std::string, std::vector<GpsPoint>> grouped;
  LoadStats local;
  while (reader.next_row(row)) {
    std::size_t need = *std::max_element(cols.begin(), cols.end());
    if (row.size() <= need)
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": too few fields");
    GpsPoint p;
    double a, b;
    try {
      a = std::stod(row[cols[1]]);
      b = std::stod(row[cols[2]]);
      p.uncertainty_m = std::stod(row[cols[3]]);
    } catch (const std::exception &) {
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": bad numeric field");
    }
    try {
      p.t = parse_timestamp(row[cols[4]]);
    } catch (const FormatError &e) {
      throw FormatError(path + " line " + std::to_string(reader.row_line()) + ": " +
                        e.what());
    }
    if (p.uncertainty_m < 0)
      throw FormatError(path + " line " + std::to_string(reader.row_line()) +
                        ": negative uncertainty");
    p.pos = mode == CoordMode::Geographic ? projection->to_planar(a, b) : Vec2{a, b};
    grouped[row[cols[0]]].push_back(p);
    ++local.rows;
  }

  std::vector<Trajectory> out;
  for (auto &[id, points] : grouped) {
    std::stable_sort(points.begin(), points.end(),
                     [](const GpsPoint &x, const GpsPoint &y) { return x.t < y.t; });
    std::vector<GpsPoint> unique;
    for (const GpsPoint &p : points) {
      if (!unique.empty() && p.t == unique.back().t) {
        ++local.duplicate_timestamps;
        continue;
      }
      unique.push_back(p);
    }
    if (unique.size() < 2) {
      ++local.dropped_short;
      continue;
    }
    out.push_back({id, std::move(unique)});
  }
  if (local.duplicate_timestamps)
    log::warn("trajectory", "dropped ", local.duplicate_timestamps,
              " duplicate-timestamp points");
  if (local.dropped_short)
    log::warn("trajectory", "dropped ", local.dropped_short,
              " trajectories with fewer than 2 points");
  if (stats)
    *stats = local;
  return out;
}

void write_trajectories(const std::string &path,
                        const std::vector<Trajectory> &trajectories, CoordMode mode,
                        const PlanarProjection *projection,
                        const std::string &header_comment) {
  if (mode == CoordMode::Geographic && !projection)
    throw ConfigError("geographic trajectories need a projection");
  auto out = open_output(path);
  if (!header_comment.empty())
    out << "# " << header_comment << "\n";
  if (mode == CoordMode::Geographic)
    out << "trajectory_id,lat,lon,uncertainty,timestamp\n";
  else
    out << "trajectory_id,x,y,uncertainty,timestamp\n";
  out.precision(10);
  for (const Trajectory &t : trajectories) {
    for (const GpsPoint &p : t.points) {
      double a = p.pos.x(), b = p.pos.y();
      if (mode == CoordMode::Geographic)
        projection->to_geographic(p.pos, a, b);
      out << csv_field(t.id) << "," << a << "," << b << "," << p.uncertainty_m
           << "," << format_timestamp(p.t) << "\n";
    }
  }
}

std::vector<Trajectory> filter_by_polygon(std::vector<Trajectory> trajectories,
                                          const std::vector<Vec2> &polygon) {
  if (polygon.size() < 3)
    throw ConfigError("polygon needs at least 3 vertices");
  for (Trajectory &t : trajectories) {
    std::erase_if(t.points, [&](const GpsPoint &p) {
      return !point_in_ring(p.pos, polygon);
    });
  }
  std::erase_if(trajectories,
                [](const Trajectory &t) { return t.points.size() < 2; });
  return trajectories;
}

std::vector<Trajectory> filter_min_points(std::vector<Trajectory> trajectories,
                                          std::size_t n_min) {
  std::erase_if(trajectories,
                [&](const Trajectory &t) { return t.points.size() < n_min; });
  return trajectories;
}

std::vector<Trajectory> filter_min_avg_speed(std::vector<Trajectory> trajectories,
                                             double v_min_kmh) {
  std::erase_if(trajectories, [&](const Trajectory &t) {
    double dist = 0;
    for (std::size_t i = 1; i < t.points.size(); ++i)
      dist += (t.points[i].pos - t.points[i - 1].pos).norm();
    double elapsed = t.points.back().t - t.points.front().t;
    if (elapsed <= 0) {
      log::warn("trajectory", t.id, ": zero elapsed time, dropping");
      return true;
    }
    return dist / elapsed * 3.6 < v_min_kmh;
  });
  return trajectories;
}

double mean_sampling_interval(const Trajectory &t) {
  if (t.points.size() < 2)
    return 0;
  return (t.points.back().t - t.points.front().t) /
         static_cast<double>(t.points.size() - 1);
}

double corpus_mean_interval(const std::vector<Trajectory> &trajectories) {
  double sum = 0;
  std::size_t n = 0;
  for (const Trajectory &t : trajectories) {
    for (std::size_t i = 1; i < t.points.size(); ++i) {
      sum += t.points[i].t - t.points[i - 1].t;
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0;
}

std::optional<Trajectory> downsample_low_frequency(const Trajectory &t,
                                                   double min_interval_s) {
  if (t.points.empty())
    return std::nullopt;
  Trajectory out;
  out.id = t.id + "_lf" + std::to_string(static_cast<long long>(min_interval_s));
  out.points.push_back(t.points.front());
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    if (t.points[i].t - out.points.back().t >= min_interval_s)
      out.points.push_back(t.points[i]);
  }
  if (out.points.size() < 2)
    return std::nullopt;
  return out;
}

std::string original_id(const std::string &trajectory_id) {
  std::size_t pos = trajectory_id.rfind("_lf");
  if (pos == std::string::npos)
    return trajectory_id;
  std::string tail = trajectory_id.substr(pos + 3);
  if (tail.empty() ||
      !std::all_of(tail.begin(), tail.end(), [](char c) { return std::isdigit(c); }))
    return trajectory_id;
  return trajectory_id.substr(0, pos);
}

} // namespace stmatch
