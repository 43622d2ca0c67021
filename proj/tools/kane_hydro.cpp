#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <vector>

#include "kane/commands.hpp"

namespace {

kane::Vec3 to_vec(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-band Kane hydrodynamics: closure diagnostics and 1D runs"};
  app.require_subcommand(1);

  std::string config_path;
  const std::map<std::string, kane::Band> bands{{"upper", kane::Band::upper},
                                                {"lower", kane::Band::lower},
                                                {"plus", kane::Band::upper},
                                                {"minus", kane::Band::lower}};

  auto* closure = app.add_subcommand("closure", "Solve the closure at one (n, u) and print it");
  double n = 1.0;
  std::vector<double> u{0.0, 0.0, 0.0};
  kane::Band band = kane::Band::upper;
  closure->add_option("--config", config_path, "JSON config")->required();
  closure->add_option("--n", n, "density")->capture_default_str();
  closure->add_option("--u", u, "mean velocity ux uy uz")->expected(3);
  closure->add_option("--band", band, "upper|lower")
      ->transform(CLI::CheckedTransformer(bands, CLI::ignore_case));

  auto* sweep = app.add_subcommand("sweep", "Tabulate B -> u(B) along a ray");
  double b_max = 5.0;
  int steps = 11;
  std::vector<double> direction;
  sweep->add_option("--config", config_path, "JSON config")->required();
  sweep->add_option("--band", band, "upper|lower")
      ->transform(CLI::CheckedTransformer(bands, CLI::ignore_case));
  sweep->add_option("--b-max", b_max, "largest |B|")->capture_default_str();
  sweep->add_option("--steps", steps, "number of rows (>= 2)")->capture_default_str();
  sweep->add_option("--direction", direction, "ray direction (default: alpha)")->expected(3);

  auto* run = app.add_subcommand("run", "Time-dependent run writing CSV snapshots");
  std::optional<std::string> out_dir;
  std::optional<double> t_end;
  std::optional<int> snapshot_every;
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.out_dir)");
  run->add_option("--t-end", t_end, "final time (overrides output.t_end)");
  run->add_option("--snapshot-every", snapshot_every, "steps between snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kane::exit_ok : kane::exit_usage;
  }

  kane::RunConfig config;
  const int loaded = kane::guarded(std::cerr, [&] {
    config = kane::load_config(config_path);
    return int(kane::exit_ok);
  });
  if (loaded != kane::exit_ok) return loaded;

  if (*closure) return kane::cmd_closure(config, n, to_vec(u), band, std::cout, std::cerr);
  if (*sweep) {
    std::optional<kane::Vec3> dir;
    if (!direction.empty()) dir = to_vec(direction);
    return kane::cmd_sweep(config, band, b_max, steps, dir, std::cout, std::cerr);
  }
  if (out_dir) config.output.out_dir = *out_dir;
  if (t_end) {
    if (!(*t_end >= 0.0)) {
      std::cerr << "usage error: --t-end must be non-negative\n";
      return kane::exit_usage;
    }
    config.output.t_end = *t_end;
  }
  if (snapshot_every) {
    if (*snapshot_every < 1) {
      std::cerr << "usage error: --snapshot-every must be >= 1\n";
      return kane::exit_usage;
    }
    config.output.snapshot_every = *snapshot_every;
  }
  return kane::cmd_run(config, std::cout, std::cerr);
}
