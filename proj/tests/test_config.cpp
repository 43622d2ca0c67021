#include <doctest.h>

#include "kane/config.hpp"

using namespace kane;

namespace {

const char* minimal = R"({
  "material": {"alpha": [1.0, 0.0, 0.0], "gamma": 0.2},
  "grid": {"n_cells": 16},
  "initial": {
    "plus": {"n": {"type": "uniform", "value": 1.0}},
    "minus": {"n": {"type": "uniform", "value": 0.5}}
  }
})";

const char* full = R"({
  "material": {"alpha": [0.3, -0.4, 1.2], "gamma": 0.7, "mass": 0.5, "beta": 2.0},
  "grid": {"n_cells": 20, "x_min": -1.0, "x_max": 3.0, "boundary": "outflow"},
  "initial": {
    "plus": {
      "n": {"type": "gaussian_pulse", "amplitude": 0.4, "center": 1.0, "width": 0.2, "baseline": 1.0},
      "u": {"x": {"type": "step", "left": 0.3, "right": -0.1}, "z": {"type": "uniform", "value": 0.2}}
    },
    "minus": {"n": {"type": "step", "left": 1.0, "right": 0.4, "position": 0.25}}
  },
  "potential": {"v_ext": {"type": "barrier", "height": 0.3, "center": 1.0, "width": 0.5},
                "poisson": true, "eps_q": 0.1, "v_left": 0.5, "v_right": -0.5},
  "coupling": {"mechanism": "band_flip", "tau": 0.25},
  "numerics": {"cfl": 0.3, "tol_u": 1e-9, "max_iter": 60, "wave_factor": 4.0,
               "quadrature": {"backend": "full3d", "nodes_1d": 24, "nodes_3d_per_axis": 40}},
  "output": {"t_end": 0.5, "snapshot_every": 7, "out_dir": "results"}
})";

std::string path_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.path();
  }
  return "";
}

std::string with(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const RunConfig c = parse_config(minimal);
  CHECK(c.model.material.mass == 1.0);
  CHECK(c.model.material.beta == 1.0);
  CHECK(c.model.numerics.cfl == 0.4);
  CHECK(c.model.numerics.solver.tol_u == 1e-8);
  CHECK(c.model.numerics.quadrature == QuadratureSpec{});
  CHECK(c.model.coupling.mechanism == CouplingMechanism::none);
  CHECK(!c.model.potential.poisson_enabled);
  CHECK(c.grid.boundary == Boundary::periodic);
  CHECK(c.grid.x_min == 0.0);
  CHECK(c.grid.x_max == 1.0);
  CHECK(c.output == OutputConfig{});
  const auto minus = initial_moments(c.minus, c.grid);
  CHECK(minus.size() == 16);
  CHECK(minus[3].n == 0.5);
  CHECK(minus[3].u.norm() == 0.0);
}

TEST_CASE("full config") {
  const RunConfig c = parse_config(full);
  CHECK(c.model.material.alpha == Vec3(0.3, -0.4, 1.2));
  CHECK(c.grid.boundary == Boundary::outflow);
  CHECK(c.model.numerics.quadrature.backend == QuadratureBackend::full3d);
  CHECK(c.model.coupling.tau == 0.25);
  CHECK(std::get<StepProfile>(c.plus.u[0]).position == 1.0);  // grid midpoint
  const auto plus = initial_moments(c.plus, c.grid);
  CHECK(plus[0].u.x() == 0.3);
  CHECK(plus[19].u.x() == -0.1);
  CHECK(plus[7].u.z() == 0.2);
  CHECK(plus[0].u.y() == 0.0);
  const double x = c.grid.center(9);
  CHECK(plus[9].n == doctest::Approx(1.0 + 0.4 * std::exp(-0.5 * std::pow((x - 1.0) / 0.2, 2))));
}

TEST_CASE("serialize then parse is the identity") {
  for (const char* text : {minimal, full}) {
    const RunConfig c = parse_config(text);
    const std::string s = serialize_config(c);
    const RunConfig back = parse_config(s);
    CHECK(back == c);
    CHECK(serialize_config(back) == s);
  }
  RunConfig tab = parse_config(minimal);
  tab.model.potential.v_ext = TabulatedPotential{std::vector<double>(16, 0.1234567890123456789)};
  tab.model.material.gamma = 0.1 + 0.2;
  CHECK(parse_config(serialize_config(tab)) == tab);
}

TEST_CASE("invalid values name the offending key") {
  const std::string m = minimal;
  CHECK(path_of(with(m, "\"gamma\": 0.2", "\"gamma\": -1")) == "material.gamma");
  CHECK(path_of(with(m, "\"n_cells\": 16", "\"n_cells\": 2")) == "grid.n_cells");
  CHECK(path_of(with(m, "\"n_cells\": 16", "\"n_cells\": 16, \"colour\": 1")) == "grid.colour");
  CHECK(path_of(with(m, "\"value\": 0.5", "\"value\": -0.5")) == "initial.minus.n");
  CHECK(path_of(with(m, "\"type\": \"uniform\", \"value\": 1.0", "\"type\": \"sawtooth\"")) ==
        "initial.plus.n.type");
  CHECK(path_of(with(m, "\"alpha\": [1.0, 0.0, 0.0]", "\"alpha\": [1.0, 0.0]")) ==
        "material.alpha");
  CHECK(path_of(with(m, "\"grid\"", "\"coupling\": {\"tau\": 1.0}, \"grid\"")) == "coupling.tau");
  CHECK(path_of(with(m, "\"grid\"",
                     "\"coupling\": {\"mechanism\": \"isotropic\"}, \"grid\"")) == "coupling.tau");
  CHECK(path_of(with(m, "\"grid\"", "\"potential\": {\"poisson\": true}, \"grid\"")) ==
        "potential.poisson");
  CHECK(path_of(with(m, "\"grid\"",
                     "\"numerics\": {\"quadrature\": {\"nodes_1d\": 4}}, \"grid\"")) ==
        "numerics.quadrature.nodes_1d");
  CHECK(path_of(with(m, "\"grid\"", "\"output\": {\"snapshot_every\": 0}, \"grid\"")) ==
        "output.snapshot_every");
  CHECK(path_of(with(m, "\"grid\"", "\"seed\": 3, \"grid\"")) == "seed");
  CHECK(path_of("{\"material\": ") == "<document>");
  CHECK(path_of("{}") == "material");
}
