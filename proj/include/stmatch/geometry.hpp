#ifndef STMATCH_GEOMETRY_HPP
#define STMATCH_GEOMETRY_HPP

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace stmatch {

// Planar working frame: meters east (x) and north (y).
using Vec2 = Eigen::Vector2d;

// Cumulative arc lengths of a polyline: out[0] = 0, out[n-1] = total length.
std::vector<double> cumulative_lengths(std::span<const Vec2> points);

double polyline_length(std::span<const Vec2> points);

// Point at a given arc-length offset; the offset is clamped to [0, length].
Vec2 point_at_offset(std::span<const Vec2> points, std::span<const double> cum,
                     double offset_m);

struct PolylineProjection {
  double offset_m = 0;   // arc length from the polyline start
  Vec2 point{0, 0};      // nearest point on the polyline
  double distance_m = 0; // Euclidean distance from the query to `point`
};

// Nearest point on a polyline: per-segment orthogonal projection clamped to
// the segment ends; smallest offset wins on exact distance ties.
PolylineProjection project_to_polyline(const Vec2 &p, std::span<const Vec2> points,
                                       std::span<const double> cum);

double min_distance_to_polyline(const Vec2 &p, std::span<const Vec2> points);

// Even-odd (ray casting) point-in-ring test. The ring may or may not repeat
// its first vertex; boundary behavior follows the half-open crossing rule.
bool point_in_ring(const Vec2 &p, std::span<const Vec2> ring);

// Local equirectangular projection about (lat0, lon0):
//   x = R * (lon - lon0) * cos(lat0),  y = R * (lat - lat0),  R = 6371 km.
// Sub-meter accuracy at city scale, exact round trip with to_geographic.
class PlanarProjection {
public:
  PlanarProjection(double lat0_deg, double lon0_deg);

  Vec2 to_planar(double lat_deg, double lon_deg) const;
  void to_geographic(const Vec2 &p, double &lat_deg, double &lon_deg) const;

  double origin_lat() const { return lat0_; }
  double origin_lon() const { return lon0_; }

  static constexpr double kEarthRadiusM = 6'371'000.0;

private:
  double lat0_;
  double lon0_;
  double cos_lat0_;
};

// WKT helpers. Coordinates are read as "x y" pairs in whatever frame the
// file uses; callers project afterwards if needed.
std::vector<Vec2> parse_wkt_linestring(const std::string &wkt);
// Outer ring only; a trailing duplicate of the first vertex is dropped.
std::vector<Vec2> parse_wkt_polygon(const std::string &wkt);
std::string to_wkt_linestring(std::span<const Vec2> points);

} // namespace stmatch

#endif
