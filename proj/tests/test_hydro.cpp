#include <doctest.h>

#include <numbers>

#include "kane/hydro.hpp"
#include "test_util.hpp"

using namespace kane;

namespace {

ModelConfig model_with(Vec3 alpha, double gamma) {
  ModelConfig m;
  m.material.alpha = alpha;
  m.material.gamma = gamma;
  return m;
}

std::vector<BandMoments> uniform(const Grid1D& g, double n, Vec3 u) {
  return std::vector<BandMoments>(static_cast<std::size_t>(g.n_cells), BandMoments{n, u});
}

std::vector<BandMoments> pulse(const Grid1D& g, double base, double amp, Vec3 u) {
  std::vector<BandMoments> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(g.n_cells); ++i) {
    const double z = (g.center(i) - 0.5) / 0.08;
    out.push_back({base + amp * std::exp(-0.5 * z * z), u});
  }
  return out;
}

SimState advance(SimState s, const Grid1D& g, const ModelConfig& m, int steps) {
  for (int k = 0; k < steps; ++k) s = step(s, g, m).state;
  return s;
}

double state_diff(const SimState& a, const SimState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a.plus[i].n - b.plus[i].n) + (a.plus[i].mom - b.plus[i].mom).norm());
    d = std::max(d,
                 std::abs(a.minus[i].n - b.minus[i].n) + (a.minus[i].mom - b.minus[i].mom).norm());
  }
  return d;
}

}  // namespace

TEST_CASE("Rusanov flux") {
  const ModelConfig m = model_with(Vec3::Zero(), 1.0);
  Multipliers warm;
  const CellClosure rest =
      close_cell(m.material, Band::upper, Conserved{1.0, Vec3::Zero()}, warm, m.numerics);
  const Eigen::Vector4d f = rusanov_flux(rest, rest);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f[2] == doctest::Approx(0.0));

  const ModelConfig k = model_with({0.0, 1.0, 0.4}, 0.3);
  const Conserved l{1.2, Vec3(0.3, -0.2, 0.5)};
  const Conserved r{0.8, Vec3(-0.1, 0.4, 0.1)};
  auto mirror = [](Conserved c) {
    c.mom.x() = -c.mom.x();
    return c;
  };
  auto closed = [&](const Conserved& c) {
    Multipliers w;
    return close_cell(k.material, Band::lower, c, w, k.numerics);
  };
  const CellClosure cl = closed(l), cr = closed(r);
  const Eigen::Vector4d same = rusanov_flux(cl, cl);
  CHECK((same - cl.physical_flux()).norm() == 0.0);
  const Eigen::Vector4d fwd = rusanov_flux(cl, cr);
  const Eigen::Vector4d back = rusanov_flux(closed(mirror(r)), closed(mirror(l)));
  CHECK(fwd[0] == doctest::Approx(-back[0]).epsilon(1e-9));
  CHECK(fwd[1] == doctest::Approx(back[1]).epsilon(1e-9));
}

TEST_CASE("parabolic pressure") {
  ModelConfig m = model_with(Vec3::Zero(), 1.0);
  m.material.mass = 2.0;
  m.material.beta = 0.5;
  Multipliers warm;
  const BandMoments s{1.5, Vec3(0.3, -0.7, 0.2)};
  const CellClosure c =
      close_cell(m.material, Band::lower, Conserved::from(s), warm, m.numerics);
  const Mat3 want = s.n * s.u * s.u.transpose() + s.n / (2.0 * 0.5) * Mat3::Identity();
  CHECK(testutil::rel_err(c.tensors.pressure, want) < 1e-8);
  CHECK(testutil::rel_err(c.tensors.qmass, Mat3(s.n / 2.0 * Mat3::Identity())) < 1e-12);
}

TEST_CASE("uniform state is preserved") {
  const Grid1D g{.n_cells = 16};
  const ModelConfig m = model_with({0.6, -0.8, 0.3}, 0.25);
  const SimState s0 =
      make_state(g, m, uniform(g, 1.3, Vec3(0.4, 0.1, -0.2)), uniform(g, 0.7, Vec3(-0.5, 0, 0)));
  const SimState s = advance(s0, g, m, 20);
  CHECK(state_diff(s, s0) < 1e-14);
  CHECK(s.t > 0.0);
}

TEST_CASE("periodic conservation over 100 steps") {
  const Grid1D g{.n_cells = 32};
  ModelConfig m = model_with({1.0, 0.3, 0.0}, 0.2);
  const SimState s0 =
      make_state(g, m, pulse(g, 1.0, 0.5, Vec3(0.2, 0, 0)), pulse(g, 0.8, -0.3, Vec3(0, 0.1, 0)));
  const StepReport r0 = totals(s0, g);
  for (CouplingMechanism mech : {CouplingMechanism::none, CouplingMechanism::band_flip,
                                 CouplingMechanism::band_relaxation}) {
    m.coupling = {mech, 0.3};
    const StepReport r = totals(advance(s0, g, m, 100), g);
    const double mass0 = r0.mass_total_plus + r0.mass_total_minus;
    CHECK(std::abs(r.mass_total_plus + r.mass_total_minus - mass0) / mass0 < 1e-12);
    CHECK((r.momentum_total - r0.momentum_total).norm() / r0.momentum_total.norm() < 1e-12);
    if (mech == CouplingMechanism::none) {
      CHECK(std::abs(r.mass_total_plus - r0.mass_total_plus) / r0.mass_total_plus < 1e-12);
      CHECK(std::abs(r.mass_total_minus - r0.mass_total_minus) / r0.mass_total_minus < 1e-12);
    }
  }
}

TEST_CASE("band-flip polarization decays monotonically") {
  const Grid1D g{.n_cells = 24};
  ModelConfig m = model_with({0.8, 0.0, 0.0}, 0.3);
  m.coupling = {CouplingMechanism::band_flip, 0.2};
  SimState s = make_state(g, m, pulse(g, 1.2, 0.4, Vec3::Zero()), uniform(g, 0.5, Vec3::Zero()));
  double prev = totals(s, g).mass_total_plus - totals(s, g).mass_total_minus;
  for (int k = 0; k < 30; ++k) {
    s = step(s, g, m).state;
    const StepReport r = totals(s, g);
    const double pol = r.mass_total_plus - r.mass_total_minus;
    CHECK(pol < prev);
    CHECK(pol > 0.0);
    prev = pol;
  }
}

TEST_CASE("homogeneous band relaxation follows exp(-t / tau)") {
  const Grid1D g{.n_cells = 8};
  ModelConfig m = model_with({1.0, 0.0, 0.0}, 0.2);
  m.coupling = {CouplingMechanism::band_relaxation, 1.0};
  const SimState s0 =
      make_state(g, m, uniform(g, 1.0, Vec3(0.3, 0, 0)), uniform(g, 1.0, Vec3::Zero()));
  const auto snaps = run(s0, g, m, 1.0, 1000);
  const SimState& end = snaps.back();
  CHECK(end.t == 1.0);
  for (std::size_t i = 0; i < end.size(); ++i) {
    CHECK(std::abs(end.plus[i].n / s0.plus[i].n - std::exp(-1.0)) < 1e-10 * std::exp(-1.0));
    CHECK(std::abs(end.plus[i].n + end.minus[i].n - 2.0) < 1e-13);
  }
}

TEST_CASE("mirror symmetry with alpha normal to x") {
  const Grid1D g{.n_cells = 40};
  const ModelConfig m = model_with({0.0, 1.0, 0.5}, 0.3);
  std::vector<BandMoments> plus, minus;
  for (std::size_t i = 0; i < 40; ++i) {
    const double z = g.center(i) - 0.5;
    plus.push_back({1.0 + 0.4 * std::exp(-z * z / 0.01), Vec3(0.5 * z, 0.2, -0.1)});
    minus.push_back({0.6 + 0.2 * std::cos(2 * std::numbers::pi * z), Vec3(-z, 0.0, 0.3)});
  }
  const SimState s = advance(make_state(g, m, plus, minus), g, m, 60);
  double asym = 0.0;
  for (std::size_t i = 0; i < 40; ++i) {
    const std::size_t j = 39 - i;
    for (const auto* band : {&s.plus, &s.minus}) {
      const Conserved& a = (*band)[i];
      const Conserved& b = (*band)[j];
      asym = std::max({asym, std::abs(a.n - b.n), std::abs(a.mom.x() + b.mom.x()),
                       std::abs(a.mom.y() - b.mom.y()), std::abs(a.mom.z() - b.mom.z())});
    }
  }
  CHECK(asym < 1e-10);
}

TEST_CASE("a boost along x shifts the profile") {
  const Grid1D g{.n_cells = 64};
  ModelConfig m = model_with({0.0, 0.0, 1.0}, 0.4);
  const double c = 0.5, t_end = 0.25;  // shift = 8 cells
  const auto rest = run(make_state(g, m, pulse(g, 1.0, 0.3, Vec3::Zero()),
                                   pulse(g, 1.0, 0.3, Vec3::Zero())),
                        g, m, t_end, 1000)
                        .back();
  const auto moving = run(make_state(g, m, pulse(g, 1.0, 0.3, Vec3(c, 0, 0)),
                                     pulse(g, 1.0, 0.3, Vec3(c, 0, 0))),
                          g, m, t_end, 1000)
                          .back();
  int best = 0;
  double best_corr = -1e300;
  for (int shift = -32; shift < 32; ++shift) {
    double corr = 0.0;
    for (int i = 0; i < 64; ++i)
      corr += (rest.plus[static_cast<std::size_t>(i)].n - 1.0) *
              (moving.plus[static_cast<std::size_t>((i + shift + 64) % 64)].n - 1.0);
    if (corr > best_corr) best_corr = corr, best = shift;
  }
  CHECK(std::abs(best - 8) <= 1);
}

TEST_CASE("run cadence and final time") {
  const Grid1D g{.n_cells = 8};
  const ModelConfig m = model_with({1.0, 0.0, 0.0}, 0.5);
  const SimState s0 = make_state(g, m, pulse(g, 1.0, 0.2, Vec3::Zero()),
                                 uniform(g, 1.0, Vec3::Zero()));
  CHECK(run(s0, g, m, 0.0, 5).size() == 1);
  std::vector<int> indices;
  const RunSummary sum = run(s0, g, m, 0.3, 3, [&](int k, const SimState& s) {
    indices.push_back(k);
    CHECK(s.field.v_total.size() == 8);
  });
  CHECK(sum.steps > 3);
  CHECK(sum.snapshots == static_cast<int>(indices.size()));
  CHECK(sum.snapshots == 1 + sum.steps / 3 + (sum.steps % 3 != 0));
  CHECK(run(s0, g, m, 0.3, 3).back().t == 0.3);
  CHECK_THROWS_AS(run(s0, g, m, 0.3, 0), std::invalid_argument);
}

TEST_CASE("field forcing with Poisson on an outflow grid") {
  const Grid1D g{.n_cells = 32, .boundary = Boundary::outflow};
  ModelConfig m = model_with({0.7, 0.0, 0.0}, 0.3);
  m.potential.v_ext = BarrierPotential{0.5, 0.5, 0.1};
  m.potential.poisson_enabled = true;
  m.potential.eps_q = 0.5;
  m.potential.v_right = -0.2;
  const SimState s0 =
      make_state(g, m, uniform(g, 1.0, Vec3::Zero()), uniform(g, 1.0, Vec3::Zero()));
  CHECK(*std::max_element(s0.field.v_int.begin(), s0.field.v_int.end()) > 0.0);
  const StepResult r = step(s0, g, m);
  // the barrier pushes carriers away from its centre
  CHECK(r.state.plus[8].mom.x() < 0.0);
  CHECK(r.state.plus[23].mom.x() > 0.0);
  for (std::size_t i = 0; i < 32; ++i)
    CHECK(r.state.field.v_total[i] ==
          doctest::Approx(r.state.field.v_ext[i] + r.state.field.v_int[i]));
}

TEST_CASE("failures carry the cell") {
  const Grid1D g{.n_cells = 8};
  ModelConfig m = model_with({1.0, 0.0, 0.0}, 0.2);
  auto plus = uniform(g, 1.0, Vec3::Zero());
  plus[5].n = 1e-14;
  try {
    make_state(g, m, plus, uniform(g, 1.0, Vec3::Zero()));
    FAIL("expected PositivityLost");
  } catch (const PositivityLost& e) {
    CHECK(e.cell() == 5);
  }

  m.numerics.solver.max_iter = 1;
  m.numerics.solver.tol_u = 1e-14;
  auto moving = uniform(g, 1.0, Vec3::Zero());
  moving[3].u = Vec3(6.0, 0.0, 0.0);
  try {
    make_state(g, m, moving, uniform(g, 1.0, Vec3::Zero()));
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& e) {
    CHECK(e.context().find("cell 3") != std::string::npos);
  }
}
