#include "stmatch/scoring.hpp"

#include "stmatch/errors.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stmatch {

Variant variant_from_string(const std::string &name) {
  if (name == "st")
    return Variant::St;
  if (name == "modified")
    return Variant::Modified;
  if (name == "stb")
    return Variant::Stb;
  throw ConfigError("unknown variant: " + name);
}

std::string to_string(Variant v) {
  switch (v) {
  case Variant::St:
    return "st";
  case Variant::Modified:
    return "modified";
  case Variant::Stb:
    return "stb";
  }
  return "?";
}

void MatchConfig::validate() const {
  if (fixed_radius_m <= 0)
    throw ConfigError("fixed_radius_m must be positive");
  if (sigma_m <= 0)
    throw ConfigError("sigma_m must be positive");
  if (max_candidates == 0)
    throw ConfigError("max_candidates must be positive");
  if (r_max_m <= 0)
    throw ConfigError("r_max_m must be positive");
  if (buffer_step_m <= 0)
    throw ConfigError("buffer_step_m must be positive");
  if (sigma_min_m <= 0 || sigma_max_m < sigma_min_m)
    throw ConfigError("need 0 < sigma_min_m <= sigma_max_m");
  if (dynamic_max_candidates && *dynamic_max_candidates == 0)
    throw ConfigError("dynamic_max_candidates must be positive when set");
}

double observation_probability(double distance_m, double sigma_m,
                               ObservationForm form) {
  if (distance_m < 0)
    throw std::invalid_argument("observation distance must be >= 0");
  if (sigma_m <= 0)
    throw std::invalid_argument("sigma must be > 0");
  double kernel = std::exp(-distance_m * distance_m / (2 * sigma_m * sigma_m));
  double norm = form == ObservationForm::Printed
                    ? 1.0 / std::sqrt(2 * M_PI * sigma_m)
                    : 1.0 / (sigma_m * std::sqrt(2 * M_PI));
  return norm * kernel;
}

double transmission_probability(double euclid_m, double path_m) {
  if (euclid_m < 0 || path_m < 0)
    throw std::invalid_argument("distances must be >= 0");
  if (path_m == 0)
    return 1.0;
  if (euclid_m == 0)
    return 0.0;
  return std::min(1.0, euclid_m / path_m);
}

double speed_cosine(std::span<const double> limits_kmh, double v_kmh) {
  if (v_kmh < 0)
    throw std::invalid_argument("speed must be >= 0");
  if (limits_kmh.empty())
    return 1.0;
  if (v_kmh == 0)
    return 0.0;
  double dot = 0, norm_l = 0;
  for (double l : limits_kmh) {
    if (l <= 0)
      throw std::invalid_argument("speed limits must be > 0");
    dot += l * v_kmh;
    norm_l += l * l;
  }
  double n = static_cast<double>(limits_kmh.size());
  return dot / (std::sqrt(norm_l) * v_kmh * std::sqrt(n));
}

double travel_time_factor(double dt_est_s, double dt_obs_s) {
  if (dt_est_s <= 0 || dt_obs_s <= 0)
    throw std::invalid_argument("durations must be > 0");
  double r = std::log(dt_est_s / dt_obs_s);
  return std::exp(-r * r);
}

double speeding_factor(double v_avg_kmh, double v_lim_kmh) {
  if (v_avg_kmh < 0 || v_lim_kmh <= 0)
    throw std::invalid_argument("speeds must be positive");
  if (v_avg_kmh <= v_lim_kmh)
    return 1.0;
  double r = std::log(v_avg_kmh / v_lim_kmh);
  return std::exp(-r * r);
}

double dispersion_factor(std::span<const double> limits_kmh, DispersionForm form) {
  if (limits_kmh.empty())
    return 1.0;
  double n = static_cast<double>(limits_kmh.size());
  double mu = std::accumulate(limits_kmh.begin(), limits_kmh.end(), 0.0) / n;
  if (mu <= 0)
    throw std::invalid_argument("speed limits must be > 0");
  double var = 0;
  for (double l : limits_kmh)
    var += (l - mu) * (l - mu);
  var /= n;
  double sigma = form == DispersionForm::StdDev ? std::sqrt(var) : var;
  return 1.0 / (1.0 + sigma / mu);
}

double transition_score(Variant variant, const ScoreComponents &c) {
  auto require = [](double v, const char *name) {
    if (std::isnan(v))
      throw ConfigError(std::string("transition score missing component: ") + name);
    return v;
  };
  double s = require(c.observation, "observation") *
             require(c.transmission, "transmission") *
             require(c.temporal, "temporal");
  if (variant == Variant::Stb)
    s *= require(c.behavioral, "behavioral");
  return s;
}

} // namespace stmatch
