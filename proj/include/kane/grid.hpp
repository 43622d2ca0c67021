#pragma once

#include <cstddef>

namespace kane {

enum class Boundary { periodic, outflow };

/// Uniform cell-centred 1D grid; cell i covers [x_min + i dx, x_min + (i+1) dx].
struct Grid1D {
  int n_cells = 64;
  double x_min = 0.0;
  double x_max = 1.0;
  Boundary boundary = Boundary::periodic;

  double dx() const { return (x_max - x_min) / n_cells; }
  double center(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
  double face(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }

  /// Throws std::invalid_argument unless n_cells >= 4 and x_max > x_min.
  void validate() const;
  bool operator==(const Grid1D&) const = default;
};

}  // namespace kane
