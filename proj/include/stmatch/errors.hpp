#ifndef STMATCH_ERRORS_HPP
#define STMATCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stmatch {

// Malformed input data: bad CSV row, unparseable WKT, duplicate ids.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string &msg) : std::runtime_error(msg) {}
};

// Referential integrity broken: edge pointing at a missing node, geometry
// not anchored at its end nodes.
class StructuralError : public std::runtime_error {
public:
  explicit StructuralError(const std::string &msg) : std::runtime_error(msg) {}
};

// Speed-limit imputation left edges unresolved.
class ImputationError : public std::runtime_error {
public:
  explicit ImputationError(const std::string &msg) : std::runtime_error(msg) {}
};

// Invalid configuration (bad parameter values, missing required inputs).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// Caller misuse of a command-level operation (disjoint id sets, mismatched
// result files).
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string &msg) : std::runtime_error(msg) {}
};

// Statistics contract violations (undersized samples).
class StatsError : public std::runtime_error {
public:
  explicit StatsError(const std::string &msg) : std::runtime_error(msg) {}
};

// Trajectory-level matching failure. Matching is all-or-nothing per
// trajectory; the failing GPS index is carried when known (-1 otherwise).
class MatchError : public std::runtime_error {
public:
  MatchError(const std::string &msg, int gps_index = -1)
      : std::runtime_error(msg), gps_index_(gps_index) {}
  int gps_index() const { return gps_index_; }

private:
  int gps_index_;
};

} // namespace stmatch

#endif
