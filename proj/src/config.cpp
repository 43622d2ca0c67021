#include "kane/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace kane {

using nlohmann::json;

double evaluate(const Profile& profile, double x) {
  struct Visitor {
    double x;
    double operator()(const UniformProfile& p) const { return p.value; }
    double operator()(const GaussianPulseProfile& p) const {
      const double z = (x - p.center) / p.width;
      return p.baseline + p.amplitude * std::exp(-0.5 * z * z);
    }
    double operator()(const StepProfile& p) const { return x < p.position ? p.left : p.right; }
  };
  return std::visit(Visitor{x}, profile);
}

std::vector<BandMoments> initial_moments(const BandInitial& initial, const Grid1D& grid) {
  std::vector<BandMoments> out(static_cast<std::size_t>(grid.n_cells));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = grid.center(i);
    out[i].n = evaluate(initial.n, x);
    for (int k = 0; k < 3; ++k) out[i].u[k] = evaluate(initial.u[static_cast<std::size_t>(k)], x);
  }
  return out;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.grid == b.grid && a.plus == b.plus && a.minus == b.minus && a.model == b.model &&
         a.output == b.output;
}

namespace {

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(path_, "expected an object");
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) throw ParseError(child(key), "missing required key");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ParseError(child(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(child(key), "expected a finite number");
    return x;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) throw ParseError(child(key), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ParseError(child(key), "expected a boolean");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ParseError(child(key), "expected a string");
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.contains(key)) throw ParseError(child(key), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ParseError(path, message);
}

MaterialParams parse_material(const json& j) {
  ObjectReader r(j, "material");
  MaterialParams m;
  const json& alpha = r.at("alpha");
  require(alpha.is_array() && alpha.size() == 3, "material.alpha", "expected 3 numbers");
  for (std::size_t k = 0; k < 3; ++k) {
    require(alpha[k].is_number(), "material.alpha", "expected 3 numbers");
    m.alpha[static_cast<Eigen::Index>(k)] = alpha[k].get<double>();
  }
  require(m.alpha.allFinite(), "material.alpha", "expected finite values");
  m.gamma = r.number("gamma");
  m.mass = r.number("mass", 1.0);
  m.beta = r.number("beta", 1.0);
  r.finish();
  require(m.gamma > 0.0, "material.gamma", "must be positive");
  require(m.mass > 0.0, "material.mass", "must be positive");
  require(m.beta > 0.0, "material.beta", "must be positive");
  return m;
}

Grid1D parse_grid(const json& j) {
  ObjectReader r(j, "grid");
  Grid1D g;
  g.n_cells = r.integer("n_cells", g.n_cells);
  g.x_min = r.number("x_min", g.x_min);
  g.x_max = r.number("x_max", g.x_max);
  const std::string boundary = r.string("boundary", "periodic");
  r.finish();
  if (boundary == "periodic") g.boundary = Boundary::periodic;
  else if (boundary == "outflow") g.boundary = Boundary::outflow;
  else throw ParseError("grid.boundary", "expected \"periodic\" or \"outflow\"");
  require(g.n_cells >= 4, "grid.n_cells", "must be >= 4");
  require(g.x_max > g.x_min, "grid.x_max", "must exceed x_min");
  return g;
}

Profile parse_profile(const json& j, const std::string& path, const Grid1D& grid) {
  ObjectReader r(j, path);
  const std::string type = r.string("type");
  Profile out;
  if (type == "uniform") {
    out = UniformProfile{r.number("value")};
  } else if (type == "gaussian_pulse") {
    GaussianPulseProfile p;
    p.amplitude = r.number("amplitude");
    p.center = r.number("center");
    p.width = r.number("width");
    p.baseline = r.number("baseline", 0.0);
    require(p.width > 0.0, r.child("width"), "must be positive");
    out = p;
  } else if (type == "step") {
    StepProfile p;
    p.left = r.number("left");
    p.right = r.number("right");
    p.position = r.number("position", 0.5 * (grid.x_min + grid.x_max));
    out = p;
  } else {
    throw ParseError(r.child("type"), "expected uniform, gaussian_pulse or step");
  }
  r.finish();
  return out;
}

BandInitial parse_band_initial(const json& j, const std::string& path, const Grid1D& grid) {
  ObjectReader r(j, path);
  BandInitial b;
  b.n = parse_profile(r.at("n"), r.child("n"), grid);
  if (r.has("u")) {
    ObjectReader ru(r.at("u"), r.child("u"));
    const char* axes[] = {"x", "y", "z"};
    for (std::size_t k = 0; k < 3; ++k)
      if (ru.has(axes[k])) b.u[k] = parse_profile(ru.at(axes[k]), ru.child(axes[k]), grid);
    ru.finish();
  }
  r.finish();
  for (const BandMoments& m : initial_moments(b, grid))
    require(m.n > 0.0 && std::isfinite(m.n), r.child("n"), "density must be positive in every cell");
  return b;
}

PotentialConfig parse_potential(const json& j, const Grid1D& grid) {
  ObjectReader r(j, "potential");
  PotentialConfig p;
  if (r.has("v_ext")) {
    ObjectReader rv(r.at("v_ext"), "potential.v_ext");
    const std::string type = rv.string("type");
    if (type == "zero") {
      p.v_ext = ZeroPotential{};
    } else if (type == "linear") {
      p.v_ext = LinearPotential{rv.number("slope")};
    } else if (type == "barrier") {
      BarrierPotential b{rv.number("height"), rv.number("center"), rv.number("width")};
      require(b.width > 0.0, "potential.v_ext.width", "must be positive");
      p.v_ext = b;
    } else if (type == "tabulated") {
      const json& s = rv.at("samples");
      require(s.is_array(), "potential.v_ext.samples", "expected an array of numbers");
      TabulatedPotential t;
      for (const json& x : s) {
        require(x.is_number(), "potential.v_ext.samples", "expected an array of numbers");
        t.samples.push_back(x.get<double>());
      }
      require(t.samples.size() == static_cast<std::size_t>(grid.n_cells),
              "potential.v_ext.samples", "length must equal grid.n_cells");
      p.v_ext = std::move(t);
    } else {
      throw ParseError("potential.v_ext.type", "expected zero, linear, barrier or tabulated");
    }
    rv.finish();
  }
  p.poisson_enabled = r.boolean("poisson", false);
  p.eps_q = r.number("eps_q", 0.0);
  p.v_left = r.number("v_left", 0.0);
  p.v_right = r.number("v_right", 0.0);
  r.finish();
  require(p.eps_q >= 0.0, "potential.eps_q", "must be non-negative");
  require(!(p.poisson_enabled && grid.boundary == Boundary::periodic), "potential.poisson",
          "requires outflow boundaries");
  return p;
}

CouplingConfig parse_coupling(const json& j) {
  ObjectReader r(j, "coupling");
  CouplingConfig c;
  const std::string mech = r.string("mechanism", "none");
  if (mech == "none") c.mechanism = CouplingMechanism::none;
  else if (mech == "band_flip") c.mechanism = CouplingMechanism::band_flip;
  else if (mech == "band_relaxation") c.mechanism = CouplingMechanism::band_relaxation;
  else if (mech == "isotropic") c.mechanism = CouplingMechanism::isotropic;
  else throw ParseError("coupling.mechanism", "expected none, band_flip, band_relaxation or isotropic");
  if (c.mechanism == CouplingMechanism::none) {
    require(!r.has("tau"), "coupling.tau", "not allowed when mechanism is none");
  } else {
    c.tau = r.number("tau");
    require(c.tau > 0.0, "coupling.tau", "must be positive");
  }
  r.finish();
  return c;
}

NumericsConfig parse_numerics(const json& j) {
  ObjectReader r(j, "numerics");
  NumericsConfig n;
  n.cfl = r.number("cfl", n.cfl);
  n.wave_factor = r.number("wave_factor", n.wave_factor);
  n.solver.tol_u = r.number("tol_u", n.solver.tol_u);
  n.solver.max_iter = r.integer("max_iter", n.solver.max_iter);
  if (r.has("quadrature")) {
    ObjectReader rq(r.at("quadrature"), "numerics.quadrature");
    const std::string backend = rq.string("backend", "reduced1d");
    if (backend == "reduced1d") n.quadrature.backend = QuadratureBackend::reduced1d;
    else if (backend == "full3d") n.quadrature.backend = QuadratureBackend::full3d;
    else throw ParseError("numerics.quadrature.backend", "expected reduced1d or full3d");
    n.quadrature.nodes_1d = rq.integer("nodes_1d", n.quadrature.nodes_1d);
    n.quadrature.nodes_3d_per_axis = rq.integer("nodes_3d_per_axis", n.quadrature.nodes_3d_per_axis);
    rq.finish();
  }
  r.finish();
  require(n.cfl > 0.0 && n.cfl <= 1.0, "numerics.cfl", "must lie in (0, 1]");
  require(n.wave_factor > 0.0, "numerics.wave_factor", "must be positive");
  require(n.solver.tol_u > 0.0, "numerics.tol_u", "must be positive");
  require(n.solver.max_iter >= 1, "numerics.max_iter", "must be >= 1");
  require(n.quadrature.nodes_1d >= 8, "numerics.quadrature.nodes_1d", "must be >= 8");
  require(n.quadrature.nodes_3d_per_axis >= 8, "numerics.quadrature.nodes_3d_per_axis",
          "must be >= 8");
  return n;
}

OutputConfig parse_output(const json& j) {
  ObjectReader r(j, "output");
  OutputConfig o;
  o.t_end = r.number("t_end", o.t_end);
  o.snapshot_every = r.integer("snapshot_every", o.snapshot_every);
  o.out_dir = r.string("out_dir", o.out_dir);
  r.finish();
  require(o.t_end >= 0.0, "output.t_end", "must be non-negative");
  require(o.snapshot_every >= 1, "output.snapshot_every", "must be >= 1");
  return o;
}

json profile_json(const Profile& profile) {
  struct Visitor {
    json operator()(const UniformProfile& p) const {
      return {{"type", "uniform"}, {"value", p.value}};
    }
    json operator()(const GaussianPulseProfile& p) const {
      return {{"type", "gaussian_pulse"}, {"amplitude", p.amplitude}, {"center", p.center},
              {"width", p.width}, {"baseline", p.baseline}};
    }
    json operator()(const StepProfile& p) const {
      return {{"type", "step"}, {"left", p.left}, {"right", p.right}, {"position", p.position}};
    }
  };
  return std::visit(Visitor{}, profile);
}

json band_json(const BandInitial& b) {
  return {{"n", profile_json(b.n)},
          {"u", {{"x", profile_json(b.u[0])}, {"y", profile_json(b.u[1])}, {"z", profile_json(b.u[2])}}}};
}

json potential_json(const PotentialConfig& p) {
  struct Visitor {
    json operator()(const ZeroPotential&) const { return {{"type", "zero"}}; }
    json operator()(const LinearPotential& v) const { return {{"type", "linear"}, {"slope", v.slope}}; }
    json operator()(const BarrierPotential& v) const {
      return {{"type", "barrier"}, {"height", v.height}, {"center", v.center}, {"width", v.width}};
    }
    json operator()(const TabulatedPotential& v) const {
      return {{"type", "tabulated"}, {"samples", v.samples}};
    }
  };
  return {{"v_ext", std::visit(Visitor{}, p.v_ext)},
          {"poisson", p.poisson_enabled},
          {"eps_q", p.eps_q},
          {"v_left", p.v_left},
          {"v_right", p.v_right}};
}

const char* mechanism_name(CouplingMechanism m) {
  switch (m) {
    case CouplingMechanism::none: return "none";
    case CouplingMechanism::band_flip: return "band_flip";
    case CouplingMechanism::band_relaxation: return "band_relaxation";
    case CouplingMechanism::isotropic: return "isotropic";
  }
  return "none";
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
  ObjectReader r(root, "");
  RunConfig c;
  c.model.material = parse_material(r.at("material"));
  c.grid = parse_grid(r.at("grid"));
  {
    ObjectReader ri(r.at("initial"), "initial");
    c.plus = parse_band_initial(ri.at("plus"), "initial.plus", c.grid);
    c.minus = parse_band_initial(ri.at("minus"), "initial.minus", c.grid);
    ri.finish();
  }
  if (r.has("potential")) c.model.potential = parse_potential(r.at("potential"), c.grid);
  if (r.has("coupling")) c.model.coupling = parse_coupling(r.at("coupling"));
  if (r.has("numerics")) c.model.numerics = parse_numerics(r.at("numerics"));
  if (r.has("output")) c.output = parse_output(r.at("output"));
  r.finish();
  try {
    c.model.validate(c.grid);
  } catch (const std::invalid_argument& e) {
    throw ParseError("<document>", e.what());
  }
  return c;
}

std::string serialize_config(const RunConfig& c) {
  const MaterialParams& m = c.model.material;
  const NumericsConfig& n = c.model.numerics;
  json coupling = {{"mechanism", mechanism_name(c.model.coupling.mechanism)}};
  if (c.model.coupling.mechanism != CouplingMechanism::none) coupling["tau"] = c.model.coupling.tau;
  const json root = {
      {"material", {{"alpha", {m.alpha.x(), m.alpha.y(), m.alpha.z()}},
                    {"gamma", m.gamma},
                    {"mass", m.mass},
                    {"beta", m.beta}}},
      {"grid", {{"n_cells", c.grid.n_cells},
                {"x_min", c.grid.x_min},
                {"x_max", c.grid.x_max},
                {"boundary", c.grid.boundary == Boundary::periodic ? "periodic" : "outflow"}}},
      {"initial", {{"plus", band_json(c.plus)}, {"minus", band_json(c.minus)}}},
      {"potential", potential_json(c.model.potential)},
      {"coupling", coupling},
      {"numerics",
       {{"cfl", n.cfl},
        {"wave_factor", n.wave_factor},
        {"tol_u", n.solver.tol_u},
        {"max_iter", n.solver.max_iter},
        {"quadrature",
         {{"backend", n.quadrature.backend == QuadratureBackend::reduced1d ? "reduced1d" : "full3d"},
          {"nodes_1d", n.quadrature.nodes_1d},
          {"nodes_3d_per_axis", n.quadrature.nodes_3d_per_axis}}}}},
      {"output", {{"t_end", c.output.t_end},
                  {"snapshot_every", c.output.snapshot_every},
                  {"out_dir", c.output.out_dir}}},
  };
  return root.dump(2) + "\n";
}

}  // namespace kane
