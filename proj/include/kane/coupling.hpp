#pragma once

#include <utility>

#include "kane/closure.hpp"
#include "kane/types.hpp"

namespace kane {

enum class CouplingMechanism { none, band_flip, band_relaxation, isotropic };

struct CouplingConfig {
  CouplingMechanism mechanism = CouplingMechanism::none;
  double tau = 1.0;  ///< tau_bf, tau_br or tau_is; unused for `none`

  void validate() const;
  bool operator==(const CouplingConfig&) const = default;
};

/// Interband rates of density (N) and momentum density (U) per band.
struct SourceTerms {
  double n_dot_plus = 0.0;
  double n_dot_minus = 0.0;
  Vec3 mom_dot_plus = Vec3::Zero();
  Vec3 mom_dot_minus = Vec3::Zero();
};

/// Conserved variables of one band: density and momentum density n u.
struct Conserved {
  double n = 1.0;
  Vec3 mom = Vec3::Zero();

  static Conserved from(const BandMoments& m) { return {m.n, m.n * m.u}; }
  BandMoments moments() const { return {n, mom / n}; }
};

SourceTerms sources(const CouplingConfig& cfg, const BandMoments& plus, const BandMoments& minus);

/// Exact flow of d/dt (n, n u)_+- = (N, U)_+- over a time dt >= 0.
/// Throws StatePositivityLost if a density ends non-positive.
std::pair<Conserved, Conserved> exact_relax(const CouplingConfig& cfg, const Conserved& plus,
                                            const Conserved& minus, double dt);

std::pair<BandMoments, BandMoments> exact_relax(const CouplingConfig& cfg, const BandMoments& plus,
                                                const BandMoments& minus, double dt);

}  // namespace kane
