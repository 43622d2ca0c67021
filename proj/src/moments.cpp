#include "kane/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Geometry>

#include "kane/quadrature_rules.hpp"

namespace kane {

void QuadratureSpec::validate() const {
  if (nodes_1d < 8) throw std::invalid_argument("nodes_1d must be >= 8");
  if (nodes_3d_per_axis < 8) throw std::invalid_argument("nodes_3d_per_axis must be >= 8");
  if (!(exponent_cap > 0.0)) throw std::invalid_argument("exponent_cap must be positive");
}

double ScaledMoments::log_m0() const { return std::log(scaled.m0) + log_scale; }
Vec3 ScaledMoments::mean_velocity() const { return scaled.m1 / scaled.m0; }
Mat3 ScaledMoments::second_moment() const { return scaled.m2 / scaled.m0; }
Mat3 ScaledMoments::mean_inverse_mass() const { return scaled.q / scaled.m0; }

Mat3 ScaledMoments::covariance() const {
  const Vec3 u = mean_velocity();
  Mat3 t = second_moment() - u * u.transpose();
  return 0.5 * (t + t.transpose());
}

namespace {

// Tail contributions below exp(-kTruncation) of the peak are dropped.
constexpr double kTruncation = 46.0;

constexpr double kPi = std::numbers::pi;

// alpha = 0: phi is an isotropic Gaussian in p with mean B/beta and variance
// m/beta per axis, and v = p/m.
ScaledMoments gaussian_moments(const MaterialParams& params, Band band, const Vec3& b) {
  const double m = params.mass;
  const double beta = params.beta;
  const Vec3 mean_p = b / beta;
  ScaledMoments out;
  out.log_scale = 1.5 * std::log(2.0 * kPi * m / beta) + b.squaredNorm() / (2.0 * m * beta) -
                  sign(band) * beta * params.gamma;
  out.scaled.m0 = 1.0;
  out.scaled.m1 = mean_p / m;
  out.scaled.m2 = Mat3::Identity() / (m * beta) + mean_p * mean_p.transpose() / (m * m);
  out.scaled.q = Mat3::Identity() / m;
  return out;
}

// Along the unit vector e = alpha/|alpha|, with s = e.p, the exponent of phi
// splits into a transverse Gaussian and the one-dimensional log-weight
//   g(s) = -beta s^2/2m + B_par s/m -+ beta h(s) +- |alpha| B_par nu(s),
// h(s) = sqrt(|alpha|^2 s^2 + gamma^2), nu(s) = |alpha| s / h(s).
struct AxialWeight {
  double beta, mass, a, gamma, sgn, b_par;

  double operator()(double s) const {
    const double h = std::hypot(a * s, gamma);
    return -beta * s * s / (2.0 * mass) + b_par * s / mass - sgn * beta * h +
           sgn * a * b_par * (a * s / h);
  }
};

// {s on one half-line : -beta s^2/2m + k s + c >= floor}, clipped to that
// half-line (side = +1 for s >= 0, -1 for s <= 0).
std::optional<std::pair<double, double>> half_line_window(double beta, double mass, double k,
                                                         double c, double floor, int side) {
  const double qa = beta / (2.0 * mass);
  const double disc = k * k + 4.0 * qa * (c - floor);
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  double lo = (k - root) / (2.0 * qa);
  double hi = (k + root) / (2.0 * qa);
  if (side > 0) lo = std::max(lo, 0.0);
  else hi = std::min(hi, 0.0);
  if (lo >= hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

// Panel breakpoints: widths double away from s = 0 starting at eps/4 (eps
// = gamma/|alpha| is the distance of the branch points of h from the real
// axis), capped at `width`. The layout is fixed relative to the origin and
// only clipped to [lo, hi], so it moves continuously with B.
std::vector<double> panel_breaks(double lo, double hi, double eps, double width) {
  std::vector<double> positive{0.0};
  const double reach = std::max(std::abs(lo), std::abs(hi));
  while (positive.back() < reach) {
    const double x = positive.back();
    positive.push_back(x + std::min(width, std::max(x, 0.25 * eps)));
  }
  std::vector<double> breaks{lo};
  for (auto it = positive.rbegin(); it != positive.rend(); ++it)
    if (-*it > lo && -*it < hi && *it != 0.0) breaks.push_back(-*it);
  for (double x : positive)
    if (x > lo && x < hi) breaks.push_back(x);
  breaks.push_back(hi);
  return breaks;
}

ScaledMoments reduced_moments(const MaterialParams& params, Band band, const Vec3& b,
                              const QuadratureSpec& spec) {
  const double a = params.alpha.norm();
  if (a == 0.0) return gaussian_moments(params, band, b);

  const double m = params.mass;
  const double beta = params.beta;
  const double gamma = params.gamma;
  const double sgn = sign(band);
  const Vec3 e = params.alpha / a;
  const double b_par = b.dot(e);
  const Vec3 b_perp = b - b_par * e;
  const AxialWeight weight{beta, m, a, gamma, sgn, b_par};

  // Lower bound on max g from a few candidate points, then the window where
  // an upper bound of g (per half-line) is within kTruncation of it.
  const double c = b_par / beta;
  double peak = weight(0.0);
  for (double s : {c, c + m * a, c - m * a}) peak = std::max(peak, weight(s));
  const double floor = peak - kTruncation;
  const double gap_term = sgn < 0 ? beta * gamma : 0.0;
  const auto right = half_line_window(beta, m, b_par / m - sgn * beta * a,
                                      gap_term + std::max(0.0, sgn * a * b_par), floor, +1);
  const auto left = half_line_window(beta, m, b_par / m + sgn * beta * a,
                                     gap_term + std::max(0.0, -sgn * a * b_par), floor, -1);
  if (!left && !right) throw std::logic_error("empty quadrature window");
  const double lo = left ? left->first : right->first;
  const double hi = right ? right->second : left->second;

  const double sigma = std::sqrt(m / beta);
  const auto breaks = panel_breaks(lo, hi, gamma / a, sigma);
  const auto& rule = quadrature::gauss_legendre(spec.nodes_1d);

  const std::size_t order = rule.nodes.size();
  std::vector<double> nodes;
  std::vector<double> log_w;
  nodes.reserve((breaks.size() - 1) * order);
  log_w.reserve(nodes.capacity());
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    const double mid = 0.5 * (breaks[j] + breaks[j + 1]);
    const double half = 0.5 * (breaks[j + 1] - breaks[j]);
    for (std::size_t k = 0; k < order; ++k) {
      const double s = mid + half * rule.nodes[k];
      const double lw = std::log(half * rule.weights[k]) + weight(s);
      nodes.push_back(s);
      log_w.push_back(lw);
      shift = std::max(shift, lw);
    }
  }

  // Axial integrals of 1, v_par, v_par^2 and gamma^2 a^2 / h^3, where
  // v_par = s/m +- a nu(s) is the velocity component along e.
  double i0 = 0.0, i1 = 0.0, i2 = 0.0, ic = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double s = nodes[k];
    const double w = std::exp(log_w[k] - shift);
    const double h = std::hypot(a * s, gamma);
    const double v_par = s / m + sgn * a * (a * s / h);
    i0 += w;
    i1 += w * v_par;
    i2 += w * v_par * v_par;
    ic += w * gamma * gamma * a * a / (h * h * h);
  }

  // Transverse directions: Gaussian with mean mu = B_perp/beta and variance
  // m/beta per axis, total mass (2 pi m/beta) exp(|B_perp|^2 / 2 m beta).
  // With v = v_par e + p_perp/m the moments assemble as
  //   m1 = i1 e + i0 mu/m
  //   m2 = i2 e(x)e + (i1/m)(e(x)mu + mu(x)e) + i0 [(I - e(x)e)/(m beta) + mu(x)mu/m^2]
  //   q  = i0 I/m +- ic e(x)e
  const Vec3 mu = b_perp / beta;
  const Mat3 ee = e * e.transpose();
  const Mat3 emu = e * mu.transpose();
  ScaledMoments out;
  out.log_scale = shift + std::log(2.0 * kPi * m / beta) + b_perp.squaredNorm() / (2.0 * m * beta);
  out.scaled.m0 = i0;
  out.scaled.m1 = i1 * e + (i0 / m) * mu;
  out.scaled.m2 = i2 * ee + (i1 / m) * (emu + emu.transpose()) +
                  i0 * ((Mat3::Identity() - ee) / (m * beta) + mu * mu.transpose() / (m * m));
  out.scaled.q = (i0 / m) * Mat3::Identity() + sgn * ic * ee;
  return out;
}

// Running sums with an online max-shift: values are stored relative to
// exp(shift) and rescaled whenever a larger exponent shows up.
struct ShiftedAccumulator {
  double shift = -std::numeric_limits<double>::infinity();
  MomentSet sum;

  void add(double log_weight, const Vec3& v, const Mat3& inv_mass) {
    if (log_weight > shift) {
      const double r = std::exp(shift - log_weight);
      sum.m0 *= r;
      sum.m1 *= r;
      sum.m2 *= r;
      sum.q *= r;
      shift = log_weight;
    }
    const double w = std::exp(log_weight - shift);
    sum.m0 += w;
    sum.m1 += w * v;
    sum.m2 += w * (v * v.transpose());
    sum.q += w * inv_mass;
  }
};

// Oracle route: evaluates the raw integrand through the material kernels at
// every node of a three-dimensional product rule.
ScaledMoments full3d_moments(const MaterialParams& params, Band band, const Vec3& b,
                             const QuadratureSpec& spec) {
  const double m = params.mass;
  const double beta = params.beta;
  const double sigma = std::sqrt(m / beta);
  const double scale = std::sqrt(2.0) * sigma;
  const auto& gh = quadrature::gauss_hermite(spec.nodes_3d_per_axis);
  const std::size_t n = gh.nodes.size();
  std::vector<double> gh_log_w(n);
  for (std::size_t i = 0; i < n; ++i)
    gh_log_w[i] = std::log(gh.weights[i]) + gh.nodes[i] * gh.nodes[i] + std::log(scale);

  auto log_integrand = [&](const Vec3& p) {
    return -beta * energy(params, band, p) + b.dot(velocity(params, band, p));
  };

  ShiftedAccumulator acc;
  const double a = params.alpha.norm();
  if (a == 0.0) {
    // Gauss-Hermite in all three lab axes, recentred at B/beta.
    const Vec3 centre = b / beta;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const Vec3 p = centre + scale * Vec3(gh.nodes[i], gh.nodes[j], gh.nodes[k]);
          acc.add(gh_log_w[i] + gh_log_w[j] + gh_log_w[k] + log_integrand(p),
                  velocity(params, band, p), inverse_mass(params, band, p));
        }
    return {acc.sum, acc.shift};
  }

  // Orthonormal frame (e, e2, e3) with e along alpha.
  const Vec3 e = params.alpha / a;
  Eigen::Index smallest = 0;
  e.cwiseAbs().minCoeff(&smallest);
  const Vec3 e2 = e.cross(Vec3::Unit(smallest)).normalized();
  const Vec3 e3 = e.cross(e2);

  // Along e: trapezoid rule in t with s = eps sinh(t), which maps the branch
  // points of sqrt(|alpha|^2 s^2 + gamma^2) to infinity. Window from the
  // Lipschitz bound g(s) - g(c) <= -beta d^2/2m + beta|alpha| d + 2|alpha||B_par|.
  const double eps = params.gamma / a;
  const double b_par = b.dot(e);
  const double c = b_par / beta;
  const double d = m * a + std::sqrt(m * m * a * a + (2.0 * m / beta) *
                                                         (2.0 * a * std::abs(b_par) + kTruncation));
  const double t_lo = std::asinh((c - d) / eps);
  const double t_hi = std::asinh((c + d) / eps);
  const double s_far = std::max(std::abs(c - d), std::abs(c + d));
  const double h_target = sigma / (3.0 * (s_far + eps));
  const auto steps = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / h_target));
  const double h = (t_hi - t_lo) / static_cast<double>(steps);

  const Vec3 mu_perp = (b - b_par * e) / beta;
  for (std::size_t it = 0; it <= steps; ++it) {
    const double t = t_lo + h * static_cast<double>(it);
    const double end_factor = (it == 0 || it == steps) ? 0.5 : 1.0;
    const double s = eps * std::sinh(t);
    const double log_ds = std::log(end_factor * h * eps * std::cosh(t));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Vec3 p = s * e + mu_perp + scale * (gh.nodes[j] * e2 + gh.nodes[k] * e3);
        acc.add(log_ds + gh_log_w[j] + gh_log_w[k] + log_integrand(p),
                velocity(params, band, p), inverse_mass(params, band, p));
      }
  }
  return {acc.sum, acc.shift};
}

}  // namespace

ScaledMoments integrate_scaled(const MaterialParams& params, Band band, const Vec3& b,
                               const QuadratureSpec& spec) {
  if (!b.allFinite()) throw std::invalid_argument("multiplier B must be finite");
  switch (spec.backend) {
    case QuadratureBackend::reduced1d:
      return reduced_moments(params, band, b, spec);
    case QuadratureBackend::full3d:
      return full3d_moments(params, band, b, spec);
  }
  throw std::logic_error("unknown quadrature backend");
}

MomentSet integrate_moments(const MaterialParams& params, Band band, double a, const Vec3& b,
                            const QuadratureSpec& spec) {
  const ScaledMoments sm = integrate_scaled(params, band, b, spec);
  const double exponent = a + sm.log_scale;
  if (exponent > spec.exponent_cap) throw QuadratureOverflow(exponent, spec.exponent_cap);
  const double factor = std::exp(exponent);
  MomentSet out = sm.scaled;
  out.m0 *= factor;
  out.m1 *= factor;
  out.m2 *= factor;
  out.q *= factor;
  return out;
}

double partition_z(const MaterialParams& params, Band band, const QuadratureSpec& spec) {
  return integrate_moments(params, band, 0.0, Vec3::Zero(), spec).m0;
}

}  // namespace kane
