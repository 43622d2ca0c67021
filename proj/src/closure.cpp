#include "kane/closure.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace kane {

void SolverConfig::validate() const {
  if (!(tol_u > 0.0)) throw std::invalid_argument("tol_u must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("backtrack must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 0.5)) throw std::invalid_argument("armijo must lie in (0, 0.5)");
  if (max_backtracks < 0) throw std::invalid_argument("max_backtracks must be >= 0");
}

double log_partition_f(const MaterialParams& params, Band band, const Vec3& b,
                       const QuadratureSpec& spec) {
  return integrate_scaled(params, band, b, spec).log_m0();
}

Vec3 grad_f(const MaterialParams& params, Band band, const Vec3& b, const QuadratureSpec& spec) {
  return integrate_scaled(params, band, b, spec).mean_velocity();
}

Mat3 hess_f(const MaterialParams& params, Band band, const Vec3& b, const QuadratureSpec& spec) {
  return integrate_scaled(params, band, b, spec).covariance();
}

SolveReport solve_multipliers_report(const MaterialParams& params, Band band,
                                     const BandMoments& target, const SolverConfig& cfg,
                                     const std::optional<Multipliers>& warm_start,
                                     const QuadratureSpec& spec) {
  if (!(target.n > 0.0) || !std::isfinite(target.n))
    throw std::invalid_argument("target density must be positive and finite");
  if (!target.u.allFinite()) throw std::invalid_argument("target velocity must be finite");

  SolveReport report;
  Vec3 b = warm_start ? warm_start->b : Vec3::Zero();
  ScaledMoments sm = integrate_scaled(params, band, b, spec);
  Vec3 r = sm.mean_velocity() - target.u;
  double merit = 0.5 * r.squaredNorm();
  report.min_hessian_eigenvalue = std::numeric_limits<double>::infinity();

  int iter = 0;
  while (std::sqrt(2.0 * merit) > cfg.tol_u) {
    if (iter == cfg.max_iter) throw NoConvergence(iter, std::sqrt(2.0 * merit));
    const Mat3 hess = sm.covariance();
    const double lambda_min = Eigen::SelfAdjointEigenSolver<Mat3>(hess, Eigen::EigenvaluesOnly)
                                  .eigenvalues()
                                  .minCoeff();
    report.min_hessian_eigenvalue = std::min(report.min_hessian_eigenvalue, lambda_min);
    const Eigen::LLT<Mat3> llt(hess);
    if (llt.info() != Eigen::Success || !(lambda_min > 0.0))
      throw Error("Hessian of f lost positive definiteness during the multiplier solve");
    const Vec3 step = llt.solve(-r);

    // Backtracking on 0.5|grad f - u|^2; along the Newton step its
    // directional derivative is -|r|^2.
    double t = 1.0;
    for (int k = 0;; ++k) {
      const Vec3 trial_b = b + t * step;
      ScaledMoments trial = integrate_scaled(params, band, trial_b, spec);
      const Vec3 trial_r = trial.mean_velocity() - target.u;
      const double trial_merit = 0.5 * trial_r.squaredNorm();
      if (trial_merit <= (1.0 - 2.0 * cfg.armijo * t) * merit || k == cfg.max_backtracks) {
        b = trial_b;
        sm = std::move(trial);
        r = trial_r;
        merit = trial_merit;
        break;
      }
      t *= cfg.backtrack;
    }
    ++iter;
  }
  if (iter == 0) {
    report.min_hessian_eigenvalue = Eigen::SelfAdjointEigenSolver<Mat3>(sm.covariance(),
                                                                        Eigen::EigenvaluesOnly)
                                        .eigenvalues()
                                        .minCoeff();
  }

  report.mult.b = b;
  report.mult.a = std::log(target.n) - sm.log_m0();
  report.iterations = iter;
  report.residual = std::sqrt(2.0 * merit);
  report.moments = std::move(sm);
  return report;
}

Multipliers solve_multipliers(const MaterialParams& params, Band band, const BandMoments& target,
                              const SolverConfig& cfg, const std::optional<Multipliers>& warm_start,
                              const QuadratureSpec& spec) {
  return solve_multipliers_report(params, band, target, cfg, warm_start, spec).mult;
}

ClosureTensors closure_tensors(const MaterialParams& params, Band band, const Multipliers& mult,
                               const BandMoments& moments, const QuadratureSpec& spec) {
  if (!(moments.n > 0.0)) throw std::invalid_argument("density must be positive");
  const ScaledMoments sm = integrate_scaled(params, band, mult.b, spec);
  const double exponent = mult.a + sm.log_scale;
  if (exponent > spec.exponent_cap) throw QuadratureOverflow(exponent, spec.exponent_cap);
  const double factor = std::exp(exponent);
  ClosureTensors out;
  out.pressure = factor * sm.scaled.m2;
  out.qmass = factor * sm.scaled.q;
  out.t = sm.covariance();
  return out;
}

ClosureTensors closure_tensors(const SolveReport& report, double n) {
  ClosureTensors out;
  out.pressure = n * report.moments.second_moment();
  out.qmass = n * report.moments.mean_inverse_mass();
  out.t = report.moments.covariance();
  return out;
}

}  // namespace kane
