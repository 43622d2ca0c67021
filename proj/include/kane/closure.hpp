#pragma once

#include <optional>

#include "kane/material.hpp"
#include "kane/moments.hpp"
#include "kane/types.hpp"

namespace kane {

/// Lagrange multipliers (A, B) of the local equilibrium exp(-beta E + B.v + A).
struct Multipliers {
  double a = 0.0;
  Vec3 b = Vec3::Zero();
};

/// Hydrodynamic state of one band at one point.
struct BandMoments {
  double n = 1.0;
  Vec3 u = Vec3::Zero();
};

struct ClosureTensors {
  Mat3 pressure = Mat3::Zero();  ///< int v (x) v g dp
  Mat3 qmass = Mat3::Zero();     ///< int M^-1 g dp
  Mat3 t = Mat3::Zero();         ///< Hess f(B); pressure = n u(x)u + n t
};

struct SolverConfig {
  double tol_u = 1e-10;  ///< stop once |grad f(B) - u| <= tol_u
  int max_iter = 100;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

/// Outcome of a multiplier solve, including the normalised moments at the
/// returned B so that callers can assemble closure tensors without another
/// quadrature pass.
struct SolveReport {
  Multipliers mult;
  int iterations = 0;
  double residual = 0.0;
  /// Smallest Hessian eigenvalue seen over all Newton iterates.
  double min_hessian_eigenvalue = 0.0;
  ScaledMoments moments;
};

/// f(B) = log int exp(-beta E(p) + B.v(p)) dp.
double log_partition_f(const MaterialParams& params, Band band, const Vec3& b,
                       const QuadratureSpec& spec = {});

/// grad f(B): the mean velocity of the B-tilted equilibrium.
Vec3 grad_f(const MaterialParams& params, Band band, const Vec3& b,
            const QuadratureSpec& spec = {});

/// Hess f(B): the velocity covariance of the B-tilted equilibrium.
Mat3 hess_f(const MaterialParams& params, Band band, const Vec3& b,
            const QuadratureSpec& spec = {});

/// Solves grad f(B) = target.u by damped Newton (Jacobian hess_f), then sets
/// A = log n - f(B). Throws std::invalid_argument if target.n <= 0 and
/// NoConvergence if max_iter is exhausted.
SolveReport solve_multipliers_report(const MaterialParams& params, Band band,
                                     const BandMoments& target, const SolverConfig& cfg,
                                     const std::optional<Multipliers>& warm_start = std::nullopt,
                                     const QuadratureSpec& spec = {});

Multipliers solve_multipliers(const MaterialParams& params, Band band, const BandMoments& target,
                              const SolverConfig& cfg,
                              const std::optional<Multipliers>& warm_start = std::nullopt,
                              const QuadratureSpec& spec = {});

/// Evaluates pressure = e^A m2(0,B), qmass = e^A q(0,B) and t = hess_f(B).
ClosureTensors closure_tensors(const MaterialParams& params, Band band, const Multipliers& mult,
                               const BandMoments& moments, const QuadratureSpec& spec = {});

/// Closure tensors from a converged solve, reusing its moments.
ClosureTensors closure_tensors(const SolveReport& report, double n);

}  // namespace kane
