#include "stmatch/geometry.hpp"

#include "stmatch/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace stmatch {

std::vector<double> cumulative_lengths(std::span<const Vec2> points) {
  std::vector<double> cum(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i)
    cum[i] = cum[i - 1] + (points[i] - points[i - 1]).norm();
  return cum;
}

double polyline_length(std::span<const Vec2> points) {
  double total = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    total += (points[i] - points[i - 1]).norm();
  return total;
}

Vec2 point_at_offset(std::span<const Vec2> points, std::span<const double> cum,
                     double offset_m) {
  if (points.empty())
    return Vec2::Zero();
  if (offset_m <= 0)
    return points.front();
  if (offset_m >= cum.back())
    return points.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), offset_m);
  std::size_t seg = static_cast<std::size_t>(it - cum.begin()); // cum[seg-1] <= offset < cum[seg]
  double seg_len = cum[seg] - cum[seg - 1];
  double t = seg_len > 0 ? (offset_m - cum[seg - 1]) / seg_len : 0.0;
  return points[seg - 1] + t * (points[seg] - points[seg - 1]);
}

PolylineProjection project_to_polyline(const Vec2 &p, std::span<const Vec2> points,
                                       std::span<const double> cum) {
  PolylineProjection best;
  best.distance_m = std::numeric_limits<double>::infinity();
  if (points.empty())
    return best;
  if (points.size() == 1) {
    return {0.0, points[0], (p - points[0]).norm()};
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Vec2 &a = points[i];
    const Vec2 &b = points[i + 1];
    Vec2 ab = b - a;
    double len2 = ab.squaredNorm();
    double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    Vec2 q = a + t * ab;
    double d = (p - q).norm();
    if (d < best.distance_m) {
      best.distance_m = d;
      best.point = q;
      best.offset_m = cum[i] + t * std::sqrt(len2);
    }
  }
  return best;
}

double min_distance_to_polyline(const Vec2 &p, std::span<const Vec2> points) {
  auto cum = cumulative_lengths(points);
  return project_to_polyline(p, points, cum).distance_m;
}

bool point_in_ring(const Vec2 &p, std::span<const Vec2> ring) {
  std::size_t n = ring.size();
  if (n > 1 && (ring[n - 1] - ring[0]).norm() == 0.0)
    --n; // ignore an explicit closing vertex
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 &a = ring[i];
    const Vec2 &b = ring[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      double x_cross = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x_cross)
        inside = !inside;
    }
  }
  return inside;
}

PlanarProjection::PlanarProjection(double lat0_deg, double lon0_deg)
    : lat0_(lat0_deg), lon0_(lon0_deg),
      cos_lat0_(std::cos(lat0_deg * M_PI / 180.0)) {}

Vec2 PlanarProjection::to_planar(double lat_deg, double lon_deg) const {
  double x = kEarthRadiusM * (lon_deg - lon0_) * (M_PI / 180.0) * cos_lat0_;
  double y = kEarthRadiusM * (lat_deg - lat0_) * (M_PI / 180.0);
  return {x, y};
}

void PlanarProjection::to_geographic(const Vec2 &p, double &lat_deg,
                                     double &lon_deg) const {
  lon_deg = lon0_ + p.x() / (kEarthRadiusM * cos_lat0_) * (180.0 / M_PI);
  lat_deg = lat0_ + p.y() / kEarthRadiusM * (180.0 / M_PI);
}

namespace {

// Parses "x1 y1, x2 y2, ..." between the outermost parentheses.
std::vector<Vec2> parse_coord_list(const std::string &body, const std::string &wkt) {
  std::vector<Vec2> out;
  std::istringstream ss(body);
  std::string pair;
  while (std::getline(ss, pair, ',')) {
    std::istringstream ps(pair);
    double x, y;
    if (!(ps >> x >> y))
      throw FormatError("malformed WKT coordinate pair in: " + wkt);
    std::string rest;
    if (ps >> rest)
      throw FormatError("unexpected token '" + rest + "' in WKT: " + wkt);
    out.push_back(Vec2{x, y});
  }
  return out;
}

std::string strip(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace

std::vector<Vec2> parse_wkt_linestring(const std::string &wkt) {
  std::string s = strip(wkt);
  std::string upper;
  for (char c : s)
    upper.push_back(static_cast<char>(std::toupper(c)));
  if (upper.rfind("LINESTRING", 0) != 0)
    throw FormatError("expected LINESTRING, got: " + wkt);
  std::size_t open = s.find('(');
  std::size_t close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw FormatError("malformed LINESTRING: " + wkt);
  return parse_coord_list(s.substr(open + 1, close - open - 1), wkt);
}

std::vector<Vec2> parse_wkt_polygon(const std::string &wkt) {
  std::string s = strip(wkt);
  std::string upper;
  for (char c : s)
    upper.push_back(static_cast<char>(std::toupper(c)));
  if (upper.rfind("POLYGON", 0) != 0)
    throw FormatError("expected POLYGON, got: " + wkt);
  std::size_t open = s.find("((");
  if (open == std::string::npos)
    throw FormatError("malformed POLYGON: " + wkt);
  std::size_t close = s.find(')', open + 2); // end of the outer ring
  if (close == std::string::npos)
    throw FormatError("malformed POLYGON: " + wkt);
  auto ring = parse_coord_list(s.substr(open + 2, close - open - 2), wkt);
  if (ring.size() > 1 && (ring.back() - ring.front()).norm() == 0.0)
    ring.pop_back();
  return ring;
}

std::string to_wkt_linestring(std::span<const Vec2> points) {
  std::ostringstream os;
  os.precision(10);
  os << "LINESTRING(";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i)
      os << ", ";
    os << points[i].x() << " " << points[i].y();
  }
  os << ")";
  return os.str();
}

} // namespace stmatch
