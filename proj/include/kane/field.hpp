#pragma once

#include <variant>
#include <vector>

#include "kane/grid.hpp"

namespace kane {

struct ZeroPotential {
  bool operator==(const ZeroPotential&) const = default;
};

/// V(x) = slope x.
struct LinearPotential {
  double slope = 0.0;
  bool operator==(const LinearPotential&) const = default;
};

/// Smooth bump V(x) = height exp(-(x - center)^2 / (2 width^2)).
struct BarrierPotential {
  double height = 0.0;
  double center = 0.0;
  double width = 1.0;
  bool operator==(const BarrierPotential&) const = default;
};

/// One sample per cell centre.
struct TabulatedPotential {
  std::vector<double> samples;
  bool operator==(const TabulatedPotential&) const = default;
};

using ExternalPotential =
    std::variant<ZeroPotential, LinearPotential, BarrierPotential, TabulatedPotential>;

struct PotentialConfig {
  ExternalPotential v_ext = ZeroPotential{};
  bool poisson_enabled = false;
  double eps_q = 0.0;  ///< q / eps_s in scaled units
  double v_left = 0.0;
  double v_right = 0.0;

  void validate(const Grid1D& grid) const;
  bool operator==(const PotentialConfig&) const = default;
};

struct FieldState {
  std::vector<double> v_ext;    ///< per cell
  std::vector<double> v_int;    ///< per cell
  std::vector<double> v_total;  ///< per cell
  std::vector<double> force_x;  ///< per face (n_cells + 1), -dV/dx
};

/// External potential at the cell centres.
std::vector<double> external_potential(const PotentialConfig& cfg, const Grid1D& grid);

/// Solves V'' = -eps_q rho on the cell centres with V(x_min) = v_left and
/// V(x_max) = v_right. Uses a three-point stencil with the half-cell spacing
/// at the boundary cells, so quadratic solutions are reproduced exactly.
std::vector<double> solve_poisson(const PotentialConfig& cfg, const std::vector<double>& rho,
                                  const Grid1D& grid);

/// Face forces F = -dV/dx from field.v_total (and field.v_int for the
/// Dirichlet boundary values). Exact for quadratic V.
std::vector<double> force(const PotentialConfig& cfg, const FieldState& field, const Grid1D& grid);

/// v_ext, v_int (Poisson or zero), v_total and the face forces in one call.
FieldState compute_field(const PotentialConfig& cfg, const std::vector<double>& rho,
                         const Grid1D& grid);

}  // namespace kane
