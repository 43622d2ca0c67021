#include "kane/material.hpp"

#include <cmath>
#include <stdexcept>

namespace kane {

void MaterialParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!alpha.allFinite()) throw std::invalid_argument("alpha must be finite");
}

double half_gap(const MaterialParams& params, const Vec3& p) {
  return std::hypot(params.alpha.dot(p), params.gamma);
}

double energy(const MaterialParams& params, Band band, const Vec3& p) {
  return p.squaredNorm() / (2.0 * params.mass) + sign(band) * half_gap(params, p);
}

Vec3 nu(const MaterialParams& params, const Vec3& p) {
  const double h = half_gap(params, p);
  return Vec3(0.0, params.alpha.dot(p) / h, params.gamma / h);
}

Vec3 velocity(const MaterialParams& params, Band band, const Vec3& p) {
  const double nu2 = params.alpha.dot(p) / half_gap(params, p);
  return p / params.mass + sign(band) * nu2 * params.alpha;
}

Mat3 inverse_mass(const MaterialParams& params, Band band, const Vec3& p) {
  const double h = half_gap(params, p);
  const double g2 = params.gamma * params.gamma;
  return Mat3::Identity() / params.mass +
         (sign(band) * g2 / (h * h * h)) * params.alpha * params.alpha.transpose();
}

}  // namespace kane
