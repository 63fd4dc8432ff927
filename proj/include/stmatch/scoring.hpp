#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>

namespace stmatch {

enum class Variant { St, Modified, Stb };

// The observation density is configurable: Printed keeps 1/sqrt(2*pi*sigma),
// Standard uses the usual 1/(sigma*sqrt(2*pi)) normalization. Both share the
// exp(-d^2 / (2*sigma^2)) kernel and the default is Printed.
enum class ObservationForm { Printed, Standard };

// Dispersion of speed limits along a route: StdDev uses sigma = standard
// deviation (default), Variance uses sigma = population variance.
enum class DispersionForm { StdDev, Variance };

Variant variant_from_string(const std::string &name);
std::string to_string(Variant v);

struct MatchConfig {
  Variant variant = Variant::St;

  // fixed candidate search (baseline)
  double fixed_radius_m = 50;
  double sigma_m = 20;
  std::size_t max_candidates = 5;

  // dynamic candidate search (modified / stb)
  double r_max_m = 50;
  double buffer_step_m = 2;
  double sigma_min_m = 5;
  double sigma_max_m = 50;
  std::optional<std::size_t> dynamic_max_candidates; // no cap by default

  ObservationForm observation_form = ObservationForm::Printed;
  DispersionForm dispersion_form = DispersionForm::StdDev;

  void validate() const; // throws ConfigError
};

// N(d): density of observing a GPS point at distance d from its true
// road position.
double observation_probability(double distance_m, double sigma_m,
                               ObservationForm form = ObservationForm::Printed);

// V = euclid / path, clamped to 1. A zero-length path means the two
// positions coincide, which transmission treats as certain; a zero chord
// with a positive path scores 0.
double transmission_probability(double euclid_m, double path_m);

// Cosine similarity between the per-edge speed-limit vector and a constant
// vector at the average travel speed. Scale-invariant in v; empty limits
// score 1.
double speed_cosine(std::span<const double> limits_kmh, double v_kmh);

// exp(-ln^2(dt_est / dt_obs)); symmetric in the ratio's direction.
double travel_time_factor(double dt_est_s, double dt_obs_s);

// 1 when travelling at or below the limit, exp(-ln^2(v/v_lim)) above it.
double speeding_factor(double v_avg_kmh, double v_lim_kmh);

// 1 / (1 + sigma/mu) over the route's speed limits; empty limits score 1.
double dispersion_factor(std::span<const double> limits_kmh,
                         DispersionForm form = DispersionForm::StdDev);

struct ScoreComponents {
  double observation = std::numeric_limits<double>::quiet_NaN();
  double transmission = std::numeric_limits<double>::quiet_NaN();
  double temporal = std::numeric_limits<double>::quiet_NaN();
  double behavioral = std::numeric_limits<double>::quiet_NaN();
};

// Combines the components a variant requires into one transition score.
// Missing (NaN) required components raise ConfigError.
double transition_score(Variant variant, const ScoreComponents &c);

} // namespace stmatch
