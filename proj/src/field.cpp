#include "kane/field.hpp"

#include <cmath>
#include <stdexcept>

namespace kane {

void Grid1D::validate() const {
  if (n_cells < 4) throw std::invalid_argument("grid needs at least 4 cells");
  if (!(x_max > x_min)) throw std::invalid_argument("grid needs x_max > x_min");
}

void PotentialConfig::validate(const Grid1D& grid) const {
  if (!(eps_q >= 0.0)) throw std::invalid_argument("eps_q must be non-negative");
  if (const auto* tab = std::get_if<TabulatedPotential>(&v_ext)) {
    if (tab->samples.size() != static_cast<std::size_t>(grid.n_cells))
      throw std::invalid_argument("tabulated potential needs one sample per cell");
  }
  if (const auto* bar = std::get_if<BarrierPotential>(&v_ext)) {
    if (!(bar->width > 0.0)) throw std::invalid_argument("barrier width must be positive");
  }
  if (poisson_enabled && grid.boundary == Boundary::periodic)
    throw std::invalid_argument("Poisson coupling requires outflow (Dirichlet) boundaries");
}

namespace {

struct ProfileAt {
  double x;
  double operator()(const ZeroPotential&) const { return 0.0; }
  double operator()(const LinearPotential& p) const { return p.slope * x; }
  double operator()(const BarrierPotential& p) const {
    const double z = (x - p.center) / p.width;
    return p.height * std::exp(-0.5 * z * z);
  }
  double operator()(const TabulatedPotential&) const {
    throw std::logic_error("tabulated potential has no pointwise value");
  }
};

// V_ext on the boundary faces. Tabulated data is extrapolated linearly.
std::pair<double, double> external_boundary_values(const PotentialConfig& cfg,
                                                   const std::vector<double>& v_ext,
                                                   const Grid1D& grid) {
  if (std::holds_alternative<TabulatedPotential>(cfg.v_ext)) {
    const std::size_t n = v_ext.size();
    return {1.5 * v_ext[0] - 0.5 * v_ext[1], 1.5 * v_ext[n - 1] - 0.5 * v_ext[n - 2]};
  }
  return {std::visit(ProfileAt{grid.x_min}, cfg.v_ext),
          std::visit(ProfileAt{grid.x_max}, cfg.v_ext)};
}

// Thomas algorithm for a tridiagonal system (sub, diag, super), in place.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> super, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) throw std::logic_error("singular tridiagonal system");
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * super[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - super[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace

std::vector<double> external_potential(const PotentialConfig& cfg, const Grid1D& grid) {
  const auto n = static_cast<std::size_t>(grid.n_cells);
  if (const auto* tab = std::get_if<TabulatedPotential>(&cfg.v_ext)) {
    if (tab->samples.size() != n)
      throw std::invalid_argument("tabulated potential needs one sample per cell");
    return tab->samples;
  }
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::visit(ProfileAt{grid.center(i)}, cfg.v_ext);
  return v;
}

std::vector<double> solve_poisson(const PotentialConfig& cfg, const std::vector<double>& rho,
                                  const Grid1D& grid) {
  const std::size_t n = rho.size();
  if (n < 3 || n != static_cast<std::size_t>(grid.n_cells))
    throw std::invalid_argument("Poisson solve needs one density per cell and >= 3 cells");
  const double dx = grid.dx();
  // Interior rows: V[i-1] - 2 V[i] + V[i+1] = -eps_q rho dx^2.
  // Boundary rows use the boundary value half a cell away:
  //   (4/3)(V[1] - 3 V[0] + 2 V_left) = -eps_q rho[0] dx^2.
  std::vector<double> sub(n, 1.0), diag(n, -2.0), super(n, 1.0), rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -cfg.eps_q * rho[i] * dx * dx;
  sub[0] = 0.0;
  diag[0] = -4.0;
  super[0] = 4.0 / 3.0;
  rhs[0] -= 8.0 / 3.0 * cfg.v_left;
  super[n - 1] = 0.0;
  diag[n - 1] = -4.0;
  sub[n - 1] = 4.0 / 3.0;
  rhs[n - 1] -= 8.0 / 3.0 * cfg.v_right;
  return solve_tridiagonal(std::move(sub), std::move(diag), std::move(super), std::move(rhs));
}

std::vector<double> force(const PotentialConfig& cfg, const FieldState& field, const Grid1D& grid) {
  const std::vector<double>& v = field.v_total;
  const std::size_t n = v.size();
  if (n < 3 || n != static_cast<std::size_t>(grid.n_cells))
    throw std::invalid_argument("force needs v_total on every cell");
  const double dx = grid.dx();
  std::vector<double> f(n + 1);
  for (std::size_t i = 1; i < n; ++i) f[i] = -(v[i] - v[i - 1]) / dx;

  const auto [ext_left, ext_right] = external_boundary_values(cfg, field.v_ext, grid);
  if (grid.boundary == Boundary::periodic) {
    // Periodic images of V carry the ramp V_ext(x_max) - V_ext(x_min), which
    // keeps a linear potential's force uniform across the wrap.
    const double jump = std::holds_alternative<TabulatedPotential>(cfg.v_ext) ? 0.0
                                                                              : ext_right - ext_left;
    f[0] = f[n] = -(v[0] + jump - v[n - 1]) / dx;
    return f;
  }
  // Second-order one-sided derivative through the boundary value and the
  // two nearest centres (distances 0, dx/2, 3dx/2).
  const double v_left = ext_left + (cfg.poisson_enabled ? cfg.v_left : 0.0);
  const double v_right = ext_right + (cfg.poisson_enabled ? cfg.v_right : 0.0);
  f[0] = -(-8.0 / 3.0 * v_left + 3.0 * v[0] - v[1] / 3.0) / dx;
  f[n] = -(8.0 / 3.0 * v_right - 3.0 * v[n - 1] + v[n - 2] / 3.0) / dx;
  return f;
}

FieldState compute_field(const PotentialConfig& cfg, const std::vector<double>& rho,
                         const Grid1D& grid) {
  FieldState field;
  field.v_ext = external_potential(cfg, grid);
  field.v_int = cfg.poisson_enabled ? solve_poisson(cfg, rho, grid)
                                    : std::vector<double>(field.v_ext.size(), 0.0);
  field.v_total.resize(field.v_ext.size());
  for (std::size_t i = 0; i < field.v_ext.size(); ++i)
    field.v_total[i] = field.v_ext[i] + field.v_int[i];
  field.force_x = force(cfg, field, grid);
  return field;
}

}  // namespace kane
