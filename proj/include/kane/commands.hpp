#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "kane/config.hpp"

namespace kane {

enum ExitCode : int { exit_ok = 0, exit_runtime = 1, exit_usage = 2 };

/// Reads and parses a config file. Throws ParseError.
RunConfig load_config(const std::filesystem::path& path);

/// 17 significant digits, '.' separator, independent of the locale.
std::string format_double(double x);

inline constexpr const char* snapshot_header =
    "x,n_plus,ux_plus,uy_plus,uz_plus,n_minus,ux_minus,uy_minus,uz_minus,v_int,v_total,t";

void write_snapshot(std::ostream& out, const SimState& state, const Grid1D& grid);

/// Runs `body` and maps exceptions to exit codes, printing the message to
/// `err`: configuration and argument errors give 2, solver failures 1.
int guarded(std::ostream& err, const std::function<int()>& body);

int cmd_closure(const RunConfig& config, double n, const Vec3& u, Band band, std::ostream& out,
                std::ostream& err);

/// CSV of B -> u(B) along the ray B = s * b_max * direction, s in [0, 1].
/// The direction defaults to alpha, or x if alpha = 0.
int cmd_sweep(const RunConfig& config, Band band, double b_max, int steps,
              const std::optional<Vec3>& direction, std::ostream& out, std::ostream& err);

/// Writes snap_NNNNN.csv files and report.txt into config.output.out_dir.
int cmd_run(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace kane
