#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "kane/hydro.hpp"

namespace kane {

/// Configuration error with the dotted path of the offending key.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct UniformProfile {
  double value = 0.0;
  bool operator==(const UniformProfile&) const = default;
};

/// baseline + amplitude exp(-(x - center)^2 / (2 width^2))
struct GaussianPulseProfile {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
  double baseline = 0.0;
  bool operator==(const GaussianPulseProfile&) const = default;
};

/// `left` for x < position, `right` otherwise.
struct StepProfile {
  double left = 0.0;
  double right = 0.0;
  double position = 0.0;
  bool operator==(const StepProfile&) const = default;
};

using Profile = std::variant<UniformProfile, GaussianPulseProfile, StepProfile>;

double evaluate(const Profile& profile, double x);

struct BandInitial {
  Profile n = UniformProfile{1.0};
  std::array<Profile, 3> u{UniformProfile{}, UniformProfile{}, UniformProfile{}};
  bool operator==(const BandInitial&) const = default;
};

struct OutputConfig {
  double t_end = 1.0;
  int snapshot_every = 10;
  std::string out_dir = "out";
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  Grid1D grid;
  BandInitial plus;
  BandInitial minus;
  ModelConfig model;
  OutputConfig output;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses and validates a JSON run configuration, applying defaults.
/// Unknown keys are rejected. Throws ParseError.
RunConfig parse_config(const std::string& text);

/// Canonical JSON form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Initial per-cell moments of one band.
std::vector<BandMoments> initial_moments(const BandInitial& initial, const Grid1D& grid);

}  // namespace kane
