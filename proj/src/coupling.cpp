#include "kane/coupling.hpp"

#include <cmath>
#include <stdexcept>

namespace kane {

void CouplingConfig::validate() const {
  if (mechanism != CouplingMechanism::none && !(tau > 0.0 && std::isfinite(tau)))
    throw std::invalid_argument("coupling tau must be positive");
}

SourceTerms sources(const CouplingConfig& cfg, const BandMoments& plus, const BandMoments& minus) {
  SourceTerms out;
  const Vec3 j_plus = plus.n * plus.u;
  const Vec3 j_minus = minus.n * minus.u;
  switch (cfg.mechanism) {
    case CouplingMechanism::none:
      break;
    case CouplingMechanism::band_flip:
      out.n_dot_plus = -(plus.n - minus.n) / cfg.tau;
      out.mom_dot_plus = -(j_plus - j_minus) / cfg.tau;
      out.n_dot_minus = -out.n_dot_plus;
      out.mom_dot_minus = -out.mom_dot_plus;
      break;
    case CouplingMechanism::band_relaxation:
      out.n_dot_plus = -plus.n / cfg.tau;
      out.mom_dot_plus = -j_plus / cfg.tau;
      out.n_dot_minus = -out.n_dot_plus;
      out.mom_dot_minus = -out.mom_dot_plus;
      break;
    case CouplingMechanism::isotropic:
      out.n_dot_plus = -(plus.n - minus.n) / cfg.tau;
      out.n_dot_minus = -out.n_dot_plus;
      out.mom_dot_plus = -j_plus / cfg.tau;
      out.mom_dot_minus = -j_minus / cfg.tau;
      break;
  }
  return out;
}

namespace {

// Antisymmetric pair exchange x+' = -k (x+ - x-), x-' = +k (x+ - x-):
// the sum is invariant and the difference decays as exp(-2 k t).
template <typename T>
std::pair<T, T> exchange(const T& plus, const T& minus, double decay) {
  const T half_sum = 0.5 * (plus + minus);
  const T half_diff = 0.5 * (plus - minus) * decay;
  return {half_sum + half_diff, half_sum - half_diff};
}

// One-way drain x+' = -k x+, x-' = +k x+.
template <typename T>
std::pair<T, T> drain(const T& plus, const T& minus, double decay, double expm1) {
  return {plus * decay, minus - plus * expm1};
}

}  // namespace

std::pair<Conserved, Conserved> exact_relax(const CouplingConfig& cfg, const Conserved& plus,
                                            const Conserved& minus, double dt) {
  if (!(dt >= 0.0)) throw std::invalid_argument("relaxation step must be non-negative");
  Conserved p = plus;
  Conserved m = minus;
  switch (cfg.mechanism) {
    case CouplingMechanism::none:
      return {p, m};
    case CouplingMechanism::band_flip: {
      const double decay = std::exp(-2.0 * dt / cfg.tau);
      std::tie(p.n, m.n) = exchange(plus.n, minus.n, decay);
      std::tie(p.mom, m.mom) = exchange<Vec3>(plus.mom, minus.mom, decay);
      break;
    }
    case CouplingMechanism::band_relaxation: {
      const double decay = std::exp(-dt / cfg.tau);
      const double em1 = std::expm1(-dt / cfg.tau);
      std::tie(p.n, m.n) = drain(plus.n, minus.n, decay, em1);
      std::tie(p.mom, m.mom) = drain<Vec3>(plus.mom, minus.mom, decay, em1);
      break;
    }
    case CouplingMechanism::isotropic: {
      std::tie(p.n, m.n) = exchange(plus.n, minus.n, std::exp(-2.0 * dt / cfg.tau));
      const double decay = std::exp(-dt / cfg.tau);
      p.mom = plus.mom * decay;
      m.mom = minus.mom * decay;
      break;
    }
  }
  if (!(p.n > 0.0)) throw StatePositivityLost(-1, p.n, "upper band after relaxation");
  if (!(m.n > 0.0)) throw StatePositivityLost(-1, m.n, "lower band after relaxation");
  return {p, m};
}

std::pair<BandMoments, BandMoments> exact_relax(const CouplingConfig& cfg, const BandMoments& plus,
                                                const BandMoments& minus, double dt) {
  const auto [p, m] = exact_relax(cfg, Conserved::from(plus), Conserved::from(minus), dt);
  return {p.moments(), m.moments()};
}

}  // namespace kane
