#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace kane {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Band label of the two-band model: upper (+) or lower (-).
enum class Band { upper, lower };

/// +1 for the upper band, -1 for the lower band.
constexpr double sign(Band band) { return band == Band::upper ? 1.0 : -1.0; }

constexpr const char* to_string(Band band) {
  return band == Band::upper ? "upper" : "lower";
}

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The shifted quadrature exponent exceeded the overflow cap.
class QuadratureOverflow : public Error {
 public:
  QuadratureOverflow(double exponent, double cap)
      : Error("quadrature exponent " + std::to_string(exponent) +
              " exceeds cap " + std::to_string(cap)),
        exponent_(exponent) {}
  double exponent() const { return exponent_; }

 private:
  double exponent_;
};

/// Newton iteration for the multipliers hit max_iter.
class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double residual, const std::string& context = {})
      : Error("closure solve did not converge after " + std::to_string(iterations) +
              " iterations (residual " + std::to_string(residual) + ")" +
              (context.empty() ? std::string{} : ", " + context)),
        iterations_(iterations),
        residual_(residual),
        context_(context) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  const std::string& context() const { return context_; }

 private:
  int iterations_;
  double residual_;
  std::string context_;
};

/// A band density became non-positive (or fell below the vacuum floor).
class PositivityLost : public Error {
 public:
  PositivityLost(std::ptrdiff_t cell, double density, const std::string& context = {})
      : Error("density " + std::to_string(density) + " lost positivity" +
              (cell >= 0 ? " in cell " + std::to_string(cell) : std::string{}) +
              (context.empty() ? std::string{} : ", " + context)),
        cell_(cell),
        density_(density),
        context_(context) {}
  /// Cell index, or -1 for a pointwise (cell-free) operation.
  std::ptrdiff_t cell() const { return cell_; }
  double density() const { return density_; }
  const std::string& context() const { return context_; }

 private:
  std::ptrdiff_t cell_;
  double density_;
  std::string context_;
};

/// Raised by exact_relax when a band would be emptied.
class StatePositivityLost : public PositivityLost {
 public:
  using PositivityLost::PositivityLost;
};

}  // namespace kane
