#pragma once

#include "kane/types.hpp"

namespace kane {

/// Constants of the two-band k.p symbol.
///
/// `alpha` is the interband coupling vector (hbar K / m, velocity units) and
/// `gamma` the half gap. The default scaled units are m = 1, beta = 1, with
/// velocities measured in sqrt(k_B T / m).
struct MaterialParams {
  Vec3 alpha = Vec3::Zero();
  double gamma = 1.0;
  double mass = 1.0;
  double beta = 1.0;

  /// Throws std::invalid_argument when gamma, mass or beta is not positive.
  void validate() const;
  bool operator==(const MaterialParams&) const = default;
};

/// |h(p)| = sqrt((alpha.p)^2 + gamma^2), half the band separation.
double half_gap(const MaterialParams& params, const Vec3& p);

/// Band energy p^2/2m +- |h(p)|.
double energy(const MaterialParams& params, Band band, const Vec3& p);

/// Unit pseudo-spin direction (0, alpha.p, gamma) / |h(p)|.
Vec3 nu(const MaterialParams& params, const Vec3& p);

/// Semiclassical velocity p/m +- nu_2(p) alpha (gradient of the energy).
Vec3 velocity(const MaterialParams& params, Band band, const Vec3& p);

/// Inverse effective-mass tensor I/m +- gamma^2 alpha(x)alpha / |h(p)|^3
/// (Hessian of the energy).
Mat3 inverse_mass(const MaterialParams& params, Band band, const Vec3& p);

}  // namespace kane
