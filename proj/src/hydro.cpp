#include "kane/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kane {

void NumericsConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(wave_factor > 0.0)) throw std::invalid_argument("wave_factor must be positive");
  if (!(vacuum_floor > 0.0)) throw std::invalid_argument("vacuum_floor must be positive");
  solver.validate();
  quadrature.validate();
}

void ModelConfig::validate(const Grid1D& grid) const {
  material.validate();
  potential.validate(grid);
  coupling.validate();
  numerics.validate();
}

Eigen::Vector4d CellClosure::physical_flux() const {
  const Mat3& p = tensors.pressure;
  return {state.mom.x(), p(0, 0), p(0, 1), p(0, 2)};
}

double CellClosure::wave_speed(double wave_factor) const {
  return std::abs(u.x()) + std::sqrt(wave_factor * std::max(tensors.t(0, 0), 0.0));
}

Eigen::Vector4d rusanov_flux(const CellClosure& left, const CellClosure& right,
                             double wave_factor) {
  const double lambda = std::max(left.wave_speed(wave_factor), right.wave_speed(wave_factor));
  const Eigen::Vector4d jump(right.state.n - left.state.n, right.state.mom.x() - left.state.mom.x(),
                             right.state.mom.y() - left.state.mom.y(),
                             right.state.mom.z() - left.state.mom.z());
  return 0.5 * (left.physical_flux() + right.physical_flux()) - 0.5 * lambda * jump;
}

CellClosure close_cell(const MaterialParams& params, Band band, const Conserved& state,
                       Multipliers& warm, const NumericsConfig& numerics) {
  if (!(state.n >= numerics.vacuum_floor)) throw PositivityLost(-1, state.n);
  const BandMoments target = state.moments();
  const Multipliers fallback{0.0, params.mass * params.beta * target.u};
  const Multipliers candidates[] = {warm, fallback, Multipliers{}};
  for (std::size_t k = 0;; ++k) {
    try {
      const SolveReport report = solve_multipliers_report(params, band, target, numerics.solver,
                                                          candidates[k], numerics.quadrature);
      warm = report.mult;
      // P = n u u + n T with the state's own u, so the solver tolerance only
      // enters through T.
      ClosureTensors tensors = closure_tensors(report, state.n);
      tensors.pressure = state.n * (target.u * target.u.transpose() + tensors.t);
      return CellClosure{state, target.u, tensors, report.iterations};
    } catch (const NoConvergence&) {
      if (k + 1 == std::size(candidates)) throw;
    }
  }
}

namespace {

struct BandClosures {
  std::vector<CellClosure> plus;
  std::vector<CellClosure> minus;
  int iterations_max = 0;
};

std::string band_context(Band band, std::size_t cell) {
  std::ostringstream os;
  os << "cell " << cell << ", " << to_string(band) << " band";
  return os.str();
}

std::vector<CellClosure> close_band(const MaterialParams& params, Band band,
                                    const std::vector<Conserved>& cells,
                                    std::vector<Multipliers>& warm,
                                    const NumericsConfig& numerics, int& iterations_max) {
  std::vector<CellClosure> out;
  out.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    try {
      out.push_back(close_cell(params, band, cells[i], warm[i], numerics));
    } catch (const NoConvergence& e) {
      throw NoConvergence(e.iterations(), e.residual(), band_context(band, i));
    } catch (const PositivityLost& e) {
      throw PositivityLost(static_cast<std::ptrdiff_t>(i), e.density(), band_context(band, i));
    }
    iterations_max = std::max(iterations_max, out.back().iterations);
  }
  return out;
}

BandClosures close_all(SimState& s, const ModelConfig& model) {
  BandClosures c;
  c.plus = close_band(model.material, Band::upper, s.plus, s.warm_plus, model.numerics,
                      c.iterations_max);
  c.minus = close_band(model.material, Band::lower, s.minus, s.warm_minus, model.numerics,
                       c.iterations_max);
  return c;
}

void check_floor(const std::vector<Conserved>& cells, Band band, double floor) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!(cells[i].n >= floor))
      throw PositivityLost(static_cast<std::ptrdiff_t>(i), cells[i].n, band_context(band, i));
}

void relax(SimState& s, const CouplingConfig& coupling, double dt, double floor) {
  if (coupling.mechanism == CouplingMechanism::none) return;
  for (std::size_t i = 0; i < s.size(); ++i) {
    try {
      std::tie(s.plus[i], s.minus[i]) = exact_relax(coupling, s.plus[i], s.minus[i], dt);
    } catch (const StatePositivityLost& e) {
      throw PositivityLost(static_cast<std::ptrdiff_t>(i), e.density(), e.context());
    }
  }
  check_floor(s.plus, Band::upper, floor);
  check_floor(s.minus, Band::lower, floor);
}

// Time derivative of one band's conserved variables: flux divergence plus
// the cell-centred force term F_x Q_x. on the momentum rows.
std::vector<Conserved> transport_rate(const std::vector<CellClosure>& cells,
                                      const std::vector<double>& cell_force, const Grid1D& grid,
                                      double wave_factor) {
  const std::size_t n = cells.size();
  const bool periodic = grid.boundary == Boundary::periodic;
  std::vector<Eigen::Vector4d> face_flux(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    const CellClosure& left = f == 0 ? (periodic ? cells[n - 1] : cells[0]) : cells[f - 1];
    const CellClosure& right = f == n ? (periodic ? cells[0] : cells[n - 1]) : cells[f];
    face_flux[f] = rusanov_flux(left, right, wave_factor);
  }
  const double inv_dx = 1.0 / grid.dx();
  std::vector<Conserved> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector4d div = (face_flux[i + 1] - face_flux[i]) * inv_dx;
    rate[i].n = -div[0];
    rate[i].mom = -div.tail<3>() + cell_force[i] * cells[i].tensors.qmass.row(0).transpose();
  }
  return rate;
}

std::vector<Conserved> axpy(const std::vector<Conserved>& u, double dt,
                            const std::vector<Conserved>& rate) {
  std::vector<Conserved> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i].n = u[i].n + dt * rate[i].n;
    out[i].mom = u[i].mom + dt * rate[i].mom;
  }
  return out;
}

// 0.5 u + 0.5 (v + dt rate)
std::vector<Conserved> ssp_average(const std::vector<Conserved>& u, const std::vector<Conserved>& v,
                                   double dt, const std::vector<Conserved>& rate) {
  std::vector<Conserved> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i].n = 0.5 * u[i].n + 0.5 * (v[i].n + dt * rate[i].n);
    out[i].mom = 0.5 * u[i].mom + 0.5 * (v[i].mom + dt * rate[i].mom);
  }
  return out;
}

std::vector<double> total_density(const SimState& s) {
  std::vector<double> rho(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) rho[i] = s.plus[i].n + s.minus[i].n;
  return rho;
}

double max_wave_speed(const BandClosures& c, double wave_factor) {
  double lambda = 0.0;
  for (const auto* band : {&c.plus, &c.minus})
    for (const CellClosure& cell : *band) lambda = std::max(lambda, cell.wave_speed(wave_factor));
  return lambda;
}

}  // namespace

SimState make_state(const Grid1D& grid, const ModelConfig& model,
                    const std::vector<BandMoments>& plus, const std::vector<BandMoments>& minus,
                    double t) {
  const auto n = static_cast<std::size_t>(grid.n_cells);
  if (plus.size() != n || minus.size() != n)
    throw std::invalid_argument("initial data needs one value per cell and band");
  SimState s;
  s.t = t;
  for (std::size_t i = 0; i < n; ++i) {
    s.plus.push_back(Conserved::from(plus[i]));
    s.minus.push_back(Conserved::from(minus[i]));
    const double mb = model.material.mass * model.material.beta;
    s.warm_plus.push_back({0.0, mb * plus[i].u});
    s.warm_minus.push_back({0.0, mb * minus[i].u});
  }
  check_floor(s.plus, Band::upper, model.numerics.vacuum_floor);
  check_floor(s.minus, Band::lower, model.numerics.vacuum_floor);
  close_all(s, model);
  s.field = compute_field(model.potential, total_density(s), grid);
  return s;
}

StepReport totals(const SimState& state, const Grid1D& grid) {
  StepReport r;
  const double dx = grid.dx();
  for (std::size_t i = 0; i < state.size(); ++i) {
    r.mass_total_plus += state.plus[i].n * dx;
    r.mass_total_minus += state.minus[i].n * dx;
    r.momentum_total += (state.plus[i].mom + state.minus[i].mom) * dx;
  }
  return r;
}

StepResult step(const SimState& state, const Grid1D& grid, const ModelConfig& model,
                double dt_max) {
  const NumericsConfig& num = model.numerics;
  SimState s = state;
  BandClosures closures = close_all(s, model);
  int iterations_max = closures.iterations_max;
  const double lambda = max_wave_speed(closures, num.wave_factor);
  if (!(lambda > 0.0)) throw Error("non-positive maximum wave speed");
  const bool capped = num.cfl * grid.dx() / lambda >= dt_max;
  const double dt = capped ? dt_max : num.cfl * grid.dx() / lambda;
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");

  const bool coupled = model.coupling.mechanism != CouplingMechanism::none;
  if (coupled) {
    relax(s, model.coupling, 0.5 * dt, num.vacuum_floor);
    closures = close_all(s, model);
    iterations_max = std::max(iterations_max, closures.iterations_max);
  }

  s.field = compute_field(model.potential, total_density(s), grid);
  std::vector<double> cell_force(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    cell_force[i] = 0.5 * (s.field.force_x[i] + s.field.force_x[i + 1]);

  // SSP-RK2 (Heun) on both bands.
  const auto rate_plus = transport_rate(closures.plus, cell_force, grid, num.wave_factor);
  const auto rate_minus = transport_rate(closures.minus, cell_force, grid, num.wave_factor);
  SimState stage = s;
  stage.plus = axpy(s.plus, dt, rate_plus);
  stage.minus = axpy(s.minus, dt, rate_minus);
  check_floor(stage.plus, Band::upper, num.vacuum_floor);
  check_floor(stage.minus, Band::lower, num.vacuum_floor);
  const BandClosures stage_closures = close_all(stage, model);
  iterations_max = std::max(iterations_max, stage_closures.iterations_max);
  const auto stage_rate_plus =
      transport_rate(stage_closures.plus, cell_force, grid, num.wave_factor);
  const auto stage_rate_minus =
      transport_rate(stage_closures.minus, cell_force, grid, num.wave_factor);
  s.plus = ssp_average(s.plus, stage.plus, dt, stage_rate_plus);
  s.minus = ssp_average(s.minus, stage.minus, dt, stage_rate_minus);
  s.warm_plus = std::move(stage.warm_plus);
  s.warm_minus = std::move(stage.warm_minus);
  check_floor(s.plus, Band::upper, num.vacuum_floor);
  check_floor(s.minus, Band::lower, num.vacuum_floor);

  if (coupled) relax(s, model.coupling, 0.5 * dt, num.vacuum_floor);
  s.t = state.t + dt;
  s.field = compute_field(model.potential, total_density(s), grid);

  StepResult out{std::move(s), {}};
  out.report = totals(out.state, grid);
  out.report.dt_taken = dt;
  out.report.max_wave_speed = lambda;
  out.report.closure_iterations_max = iterations_max;
  return out;
}

namespace {

std::string time_context(const std::string& inner, double t) {
  std::ostringstream os;
  os << inner << (inner.empty() ? "" : ", ") << "step starting at t=" << t;
  return os.str();
}

}  // namespace

RunSummary run(const SimState& initial, const Grid1D& grid, const ModelConfig& model,
               double t_end, int snapshot_every, const SnapshotSink& sink) {
  if (!(t_end >= initial.t)) throw std::invalid_argument("t_end must not precede the state time");
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
  RunSummary summary;
  sink(summary.snapshots++, initial);
  SimState state = initial;
  while (state.t < t_end) {
    StepResult res;
    const double remaining = t_end - state.t;
    try {
      res = step(state, grid, model, remaining);
    } catch (const NoConvergence& e) {
      throw NoConvergence(e.iterations(), e.residual(), time_context(e.context(), state.t));
    } catch (const PositivityLost& e) {
      throw PositivityLost(e.cell(), e.density(), time_context(e.context(), state.t));
    }
    state = std::move(res.state);
    if (res.report.dt_taken == remaining) state.t = t_end;
    ++summary.steps;
    summary.closure_iterations_max =
        std::max(summary.closure_iterations_max, res.report.closure_iterations_max);
    summary.max_wave_speed = std::max(summary.max_wave_speed, res.report.max_wave_speed);
    if (summary.steps % snapshot_every == 0 || state.t >= t_end) sink(summary.snapshots++, state);
  }
  return summary;
}

std::vector<SimState> run(const SimState& initial, const Grid1D& grid, const ModelConfig& model,
                          double t_end, int snapshot_every) {
  std::vector<SimState> snapshots;
  run(initial, grid, model, t_end, snapshot_every,
      [&](int, const SimState& s) { snapshots.push_back(s); });
  return snapshots;
}

}  // namespace kane
