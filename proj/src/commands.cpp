#include "kane/commands.hpp"

#include <Eigen/Eigenvalues>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kane {

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

void write_snapshot(std::ostream& out, const SimState& state, const Grid1D& grid) {
  out << snapshot_header << '\n';
  const std::string t = format_double(state.t);
  for (std::size_t i = 0; i < state.size(); ++i) {
    const BandMoments p = state.plus[i].moments();
    const BandMoments m = state.minus[i].moments();
    const double row[] = {grid.center(i), p.n,   p.u.x(), p.u.y(), p.u.z(),
                          m.n,            m.u.x(), m.u.y(), m.u.z(), state.field.v_int[i],
                          state.field.v_total[i]};
    for (double v : row) out << format_double(v) << ',';
    out << t << '\n';
  }
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const NoConvergence& e) {
    err << "no convergence: " << e.what() << '\n';
    return exit_runtime;
  } catch (const PositivityLost& e) {
    err << "positivity lost: " << e.what() << '\n';
    return exit_runtime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}

namespace {

void print_row(std::ostream& out, const char* label, const std::string& value) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%-12s", label);
  out << buf << value << '\n';
}

std::string join(const Vec3& v) {
  return format_double(v.x()) + ' ' + format_double(v.y()) + ' ' + format_double(v.z());
}

void print_matrix(std::ostream& out, const char* label, const Mat3& m) {
  for (int r = 0; r < 3; ++r) print_row(out, r == 0 ? label : "", join(m.row(r).transpose()));
}

}  // namespace

int cmd_closure(const RunConfig& config, double n, const Vec3& u, Band band, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("--n must be positive");
    if (!u.allFinite()) throw std::invalid_argument("--u must be finite");
    const ModelConfig& model = config.model;
    const SolveReport rep = solve_multipliers_report(model.material, band, {n, u},
                                                     model.numerics.solver, std::nullopt,
                                                     model.numerics.quadrature);
    const ClosureTensors ct = closure_tensors(rep, n);
    print_row(out, "band", to_string(band));
    print_row(out, "n", format_double(n));
    print_row(out, "u", join(u));
    print_row(out, "A", format_double(rep.mult.a));
    print_row(out, "B", join(rep.mult.b));
    print_row(out, "iterations", std::to_string(rep.iterations));
    print_row(out, "residual", format_double(rep.residual));
    print_matrix(out, "P", ct.pressure);
    print_matrix(out, "Q", ct.qmass);
    print_matrix(out, "T", ct.t);
    return int(exit_ok);
  });
}

int cmd_sweep(const RunConfig& config, Band band, double b_max, int steps,
              const std::optional<Vec3>& direction, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (steps < 2) throw std::invalid_argument("--steps must be >= 2");
    if (!(b_max >= 0.0) || !std::isfinite(b_max))
      throw std::invalid_argument("--b-max must be non-negative");
    const ModelConfig& model = config.model;
    const MaterialParams& params = model.material;
    Vec3 dir = direction ? *direction : params.alpha;
    if (!direction && dir.norm() == 0.0) dir = Vec3::UnitX();
    if (!(dir.norm() > 0.0) || !dir.allFinite())
      throw std::invalid_argument("--direction must be a non-zero vector");
    dir.normalize();

    out << "bx,by,bz,ux,uy,uz,min_eig,roundtrip_err\n";
    for (int k = 0; k < steps; ++k) {
      const Vec3 b = (b_max * k / (steps - 1)) * dir;
      const ScaledMoments sm = integrate_scaled(params, band, b, model.numerics.quadrature);
      const Vec3 u = sm.mean_velocity();
      const double min_eig =
          Eigen::SelfAdjointEigenSolver<Mat3>(sm.covariance(), Eigen::EigenvaluesOnly)
              .eigenvalues()
              .minCoeff();
      const Multipliers back = solve_multipliers(params, band, {1.0, u}, model.numerics.solver,
                                                 std::nullopt, model.numerics.quadrature);
      const double roundtrip = (back.b - b).lpNorm<Eigen::Infinity>();
      out << format_double(b.x()) << ',' << format_double(b.y()) << ',' << format_double(b.z())
          << ',' << format_double(u.x()) << ',' << format_double(u.y()) << ','
          << format_double(u.z()) << ',' << format_double(min_eig) << ','
          << format_double(roundtrip) << '\n';
    }
    return int(exit_ok);
  });
}

namespace {

struct Ledger {
  double mass_plus, mass_minus;
  Vec3 momentum;
};

Ledger ledger(const SimState& s, const Grid1D& grid) {
  const StepReport r = totals(s, grid);
  return {r.mass_total_plus, r.mass_total_minus, r.momentum_total};
}

void write_report(const std::filesystem::path& path, const Ledger& a, const Ledger& b,
                  const RunSummary& summary, double t_end) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  auto line = [&](const char* name, double x0, double x1) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%-16s", name);
    out << buf << format_double(x0) << ' ' << format_double(x1) << ' ' << format_double(x1 - x0)
        << '\n';
  };
  out << "t_end " << format_double(t_end) << '\n';
  out << "steps " << summary.steps << '\n';
  out << "snapshots " << summary.snapshots << '\n';
  out << "closure_iterations_max " << summary.closure_iterations_max << '\n';
  out << "max_wave_speed " << format_double(summary.max_wave_speed) << '\n';
  out << "quantity        initial final delta\n";
  line("mass_plus", a.mass_plus, b.mass_plus);
  line("mass_minus", a.mass_minus, b.mass_minus);
  line("mass_total", a.mass_plus + a.mass_minus, b.mass_plus + b.mass_minus);
  line("momentum_x", a.momentum.x(), b.momentum.x());
  line("momentum_y", a.momentum.y(), b.momentum.y());
  line("momentum_z", a.momentum.z(), b.momentum.z());
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const Grid1D& grid = config.grid;
    const std::filesystem::path dir = config.output.out_dir;
    std::filesystem::create_directories(dir);
    const SimState initial = make_state(grid, config.model, initial_moments(config.plus, grid),
                                        initial_moments(config.minus, grid));
    SimState last = initial;
    const RunSummary summary =
        run(initial, grid, config.model, config.output.t_end, config.output.snapshot_every,
            [&](int index, const SimState& s) {
              char name[32];
              std::snprintf(name, sizeof name, "snap_%05d.csv", index);
              std::ofstream out(dir / name, std::ios::binary);
              if (!out) throw Error("cannot write " + (dir / name).string());
              write_snapshot(out, s, grid);
              last = s;
            });
    write_report(dir / "report.txt", ledger(initial, grid), ledger(last, grid), summary,
                 config.output.t_end);
    log << summary.steps << " steps, " << summary.snapshots << " snapshots written to "
        << dir.string() << '\n';
    return int(exit_ok);
  });
}

}  // namespace kane
