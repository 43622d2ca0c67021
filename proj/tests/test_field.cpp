#include <doctest.h>

#include "kane/field.hpp"
#include "test_util.hpp"

using namespace kane;

namespace {

Grid1D outflow(int n, double x0 = 0.0, double x1 = 1.0) {
  return {.n_cells = n, .x_min = x0, .x_max = x1, .boundary = Boundary::outflow};
}

PotentialConfig poisson(double eps_q, double left, double right) {
  PotentialConfig c;
  c.poisson_enabled = true;
  c.eps_q = eps_q;
  c.v_left = left;
  c.v_right = right;
  return c;
}

double max_abs_err(const std::vector<double>& v, const Grid1D& g, double (*exact)(double)) {
  double e = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) e = std::max(e, std::abs(v[i] - exact(g.center(i))));
  return e;
}

}  // namespace

TEST_CASE("Poisson: homogeneous, harmonic and quadratic solutions") {
  const Grid1D g = outflow(37);
  const std::vector<double> zero(37, 0.0), two(37, 2.0);
  for (double v : solve_poisson(poisson(1.0, 0.0, 0.0), zero, g)) CHECK(v == 0.0);
  CHECK(max_abs_err(solve_poisson(poisson(1.0, 0.0, 1.0), zero, g), g,
                    [](double x) { return x; }) < 1e-13);
  CHECK(max_abs_err(solve_poisson(poisson(1.0, 0.0, 0.0), two, g), g,
                    [](double x) { return x * (1 - x); }) < 1e-12);

  // shifted domain with both boundary values
  const Grid1D h = outflow(20, -1.0, 2.0);
  const std::vector<double> rho(20, 0.5);  // V'' = -1 with eps_q = 2
  const auto v = solve_poisson(poisson(2.0, 1.0, -0.5), rho, h);
  CHECK(max_abs_err(v, h, [](double x) { return 1.5 - 0.5 * x * x; }) < 1e-12);
}

TEST_CASE("Poisson residual") {
  const Grid1D g = outflow(50);
  std::vector<double> rho(50);
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::sin(7.0 * g.center(i)) + 1.5;
  const PotentialConfig c = poisson(3.0, 0.2, -0.4);
  const auto v = solve_poisson(c, rho, g);
  const double dx2 = g.dx() * g.dx();
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double left = i == 0 ? 0.0 : v[i - 1];
    const double right = i + 1 == v.size() ? 0.0 : v[i + 1];
    double lhs;
    if (i == 0) lhs = 4.0 / 3.0 * (v[1] - 3 * v[0] + 2 * c.v_left);
    else if (i + 1 == v.size()) lhs = 4.0 / 3.0 * (v[i - 1] - 3 * v[i] + 2 * c.v_right);
    else lhs = left - 2 * v[i] + right;
    const double rhs = -c.eps_q * rho[i] * dx2;
    worst = std::max(worst, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  CHECK(worst / scale < 1e-12);
}

TEST_CASE("Poisson converges at second order on a quartic") {
  // V = x^4 - x on [0, 1]: V'' = 12 x^2, V(0) = 0, V(1) = 0.
  double err[3];
  int k = 0;
  for (int n : {32, 64, 128}) {
    const Grid1D g = outflow(n);
    std::vector<double> rho(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = -12.0 * std::pow(g.center(i), 2);
    err[k++] = max_abs_err(solve_poisson(poisson(1.0, 0.0, 0.0), rho, g), g,
                           [](double x) { return x * x * x * x - x; });
  }
  for (int i = 0; i < 2; ++i) {
    const double order = std::log2(err[i] / err[i + 1]);
    CHECK(order >= 1.9);
    CHECK(order <= 2.1);
  }
}

TEST_CASE("forces from the potential") {
  const Grid1D g = outflow(16);
  PotentialConfig c;
  c.v_ext = TabulatedPotential{std::vector<double>(16, 3.0)};
  for (double f : compute_field(c, std::vector<double>(16, 1.0), g).force_x) CHECK(f == 0.0);

  c.v_ext = LinearPotential{2.0};
  for (Boundary b : {Boundary::outflow, Boundary::periodic}) {
    Grid1D gb = g;
    gb.boundary = b;
    for (double f : compute_field(c, std::vector<double>(16, 1.0), gb).force_x)
      CHECK(f == doctest::Approx(-2.0).epsilon(1e-12));
  }

  // V = x (1 - x) through Poisson: F = 2x - 1 on every face, boundaries included.
  const PotentialConfig p = poisson(1.0, 0.0, 0.0);
  const FieldState field = compute_field(p, std::vector<double>(16, 2.0), g);
  REQUIRE(field.force_x.size() == 17);
  for (std::size_t i = 0; i <= 16; ++i)
    CHECK(field.force_x[i] == doctest::Approx(2.0 * g.face(i) - 1.0).epsilon(1e-10));
}

TEST_CASE("external profiles") {
  const Grid1D g{.n_cells = 8};
  PotentialConfig c;
  c.v_ext = BarrierPotential{2.0, 0.5, 0.1};
  const auto v = external_potential(c, g);
  for (std::size_t i = 0; i < 8; ++i) {
    const double z = (g.center(i) - 0.5) / 0.1;
    CHECK(v[i] == doctest::Approx(2.0 * std::exp(-0.5 * z * z)));
    CHECK(v[i] == doctest::Approx(v[7 - i]).epsilon(1e-14));
  }
}

TEST_CASE("potential validation") {
  const Grid1D periodic{.n_cells = 8};
  PotentialConfig c;
  c.poisson_enabled = true;
  CHECK_THROWS_AS(c.validate(periodic), std::invalid_argument);
  CHECK_NOTHROW(c.validate(outflow(8)));
  c.eps_q = -1.0;
  CHECK_THROWS_AS(c.validate(outflow(8)), std::invalid_argument);
  PotentialConfig t;
  t.v_ext = TabulatedPotential{{1.0, 2.0}};
  CHECK_THROWS_AS(t.validate(periodic), std::invalid_argument);
  CHECK_THROWS_AS((Grid1D{.n_cells = 2}.validate()), std::invalid_argument);
}
