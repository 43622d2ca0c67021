#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "kane/closure.hpp"
#include "kane/coupling.hpp"
#include "kane/field.hpp"
#include "kane/grid.hpp"
#include "kane/material.hpp"
#include "kane/moments.hpp"

namespace kane {

struct NumericsConfig {
  double cfl = 0.4;
  /// Rusanov wave-speed bound |u_x| + sqrt(wave_factor * T_xx).
  double wave_factor = 3.0;
  /// Densities below this abort the run with PositivityLost.
  double vacuum_floor = 1e-12;
  SolverConfig solver{.tol_u = 1e-8};
  QuadratureSpec quadrature{};

  void validate() const;
  bool operator==(const NumericsConfig&) const = default;
};

/// Everything except the grid and the state that a run depends on.
struct ModelConfig {
  MaterialParams material;
  PotentialConfig potential;
  CouplingConfig coupling;
  NumericsConfig numerics;

  void validate(const Grid1D& grid) const;
  bool operator==(const ModelConfig&) const = default;
};

struct SimState {
  std::vector<Conserved> plus;
  std::vector<Conserved> minus;
  FieldState field;
  /// Warm starts for the closure solve, one per cell and band.
  std::vector<Multipliers> warm_plus;
  std::vector<Multipliers> warm_minus;
  double t = 0.0;

  std::size_t size() const { return plus.size(); }
};

struct StepReport {
  double dt_taken = 0.0;
  double max_wave_speed = 0.0;
  int closure_iterations_max = 0;
  double mass_total_plus = 0.0;
  double mass_total_minus = 0.0;
  Vec3 momentum_total = Vec3::Zero();
};

/// Closed state of one band in one cell.
struct CellClosure {
  Conserved state;
  Vec3 u = Vec3::Zero();
  ClosureTensors tensors;
  int iterations = 0;

  /// Physical x-flux (n u_x, P_x0, P_x1, P_x2).
  Eigen::Vector4d physical_flux() const;
  double wave_speed(double wave_factor) const;
};

/// Rusanov (local Lax-Friedrichs) flux between two closed states.
Eigen::Vector4d rusanov_flux(const CellClosure& left, const CellClosure& right,
                             double wave_factor = 3.0);

/// Solves the closure for one cell, falling back from the warm start to
/// B = m beta u and then to B = 0 before giving up. Updates `warm`.
CellClosure close_cell(const MaterialParams& params, Band band, const Conserved& state,
                       Multipliers& warm, const NumericsConfig& numerics);

/// Builds a state from per-cell moments and fills the field and warm starts.
SimState make_state(const Grid1D& grid, const ModelConfig& model,
                    const std::vector<BandMoments>& plus, const std::vector<BandMoments>& minus,
                    double t = 0.0);

struct StepResult {
  SimState state;
  StepReport report;
};

/// One Strang-split step: relax(dt/2), Poisson, SSP-RK2 transport with the
/// -F.Q source, relax(dt/2). dt = cfl dx / max wave speed, capped at dt_max.
StepResult step(const SimState& state, const Grid1D& grid, const ModelConfig& model,
                double dt_max = std::numeric_limits<double>::infinity());

/// Totals over the grid (sum of cell values times dx).
StepReport totals(const SimState& state, const Grid1D& grid);

struct RunSummary {
  int steps = 0;
  int snapshots = 0;
  int closure_iterations_max = 0;
  double max_wave_speed = 0.0;
};

using SnapshotSink = std::function<void(int index, const SimState& state)>;

/// Steps until t_end, emitting the initial state, every `snapshot_every`-th
/// step and the final state. Errors carry the time of the failing step.
RunSummary run(const SimState& initial, const Grid1D& grid, const ModelConfig& model,
               double t_end, int snapshot_every, const SnapshotSink& sink);

/// Same, collecting deep copies of the snapshots.
std::vector<SimState> run(const SimState& initial, const Grid1D& grid, const ModelConfig& model,
                          double t_end, int snapshot_every);

}  // namespace kane
