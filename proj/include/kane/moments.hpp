#pragma once

#include "kane/material.hpp"
#include "kane/types.hpp"

namespace kane {

enum class QuadratureBackend {
  /// Rotated frame with the two directions normal to alpha integrated in
  /// closed form; one graded composite Gauss-Legendre sum along alpha.
  reduced1d,
  /// Full three-dimensional product rule over the raw integrand. Slow; kept
  /// as the cross-validation oracle for reduced1d.
  full3d,
};

struct QuadratureSpec {
  QuadratureBackend backend = QuadratureBackend::reduced1d;
  /// Gauss-Legendre nodes per panel of the reduced rule.
  int nodes_1d = 16;
  /// Gauss-Hermite nodes per transverse axis of the full3d rule.
  int nodes_3d_per_axis = 32;
  /// Largest exponent allowed when the max-shift is re-applied.
  double exponent_cap = 700.0;

  /// Throws std::invalid_argument unless both node counts are >= 8.
  void validate() const;
  bool operator==(const QuadratureSpec&) const = default;
};

/// Momentum-space moments of phi = exp(-beta E(p) + B.v(p) + A).
struct MomentSet {
  double m0 = 0.0;             ///< int phi dp
  Vec3 m1 = Vec3::Zero();      ///< int v phi dp
  Mat3 m2 = Mat3::Zero();      ///< int v (x) v phi dp
  Mat3 q = Mat3::Zero();       ///< int M^-1 phi dp
};

/// Moments at A = 0 stored as exp(-log_scale) * true value, so that large
/// |B| never overflows. Normalised quantities (m1/m0 etc.) are scale-free.
struct ScaledMoments {
  MomentSet scaled;
  double log_scale = 0.0;

  double log_m0() const;
  Vec3 mean_velocity() const;      ///< m1 / m0
  Mat3 second_moment() const;      ///< m2 / m0
  Mat3 mean_inverse_mass() const;  ///< q / m0
  Mat3 covariance() const;         ///< m2/m0 - (m1/m0)(x)(m1/m0)
};

/// Moments at A = 0 with the max-shift kept separate (never overflows).
ScaledMoments integrate_scaled(const MaterialParams& params, Band band, const Vec3& b,
                               const QuadratureSpec& spec = {});

/// All four moments of phi(A, B, p). e^A is factored analytically.
/// Throws QuadratureOverflow when A + shift exceeds spec.exponent_cap.
MomentSet integrate_moments(const MaterialParams& params, Band band, double a,
                            const Vec3& b, const QuadratureSpec& spec = {});

/// z = int exp(-beta E(p)) dp.
double partition_z(const MaterialParams& params, Band band, const QuadratureSpec& spec = {});

}  // namespace kane
