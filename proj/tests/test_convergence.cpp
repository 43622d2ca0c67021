#include <doctest.h>

#include <cstdio>
#include <numbers>

#include "kane/hydro.hpp"

using namespace kane;

namespace {

// Cell averages at t_end for smooth periodic data on n cells.
std::vector<double> solve(int n, double t_end) {
  const Grid1D g{.n_cells = n};
  ModelConfig m;
  m.material.alpha = Vec3(0.5, 0.0, 0.0);
  m.material.gamma = 1.0;
  std::vector<BandMoments> plus, minus;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    const double s = std::sin(2 * std::numbers::pi * g.center(i));
    plus.push_back({1.0 + 0.2 * s, Vec3(0.1 * s, 0.0, 0.0)});
    minus.push_back({1.0 - 0.1 * s, Vec3(0.2, 0.0, 0.0)});
  }
  const SimState end = run(make_state(g, m, plus, minus), g, m, t_end, 1 << 30).back();
  std::vector<double> out;
  for (const Conserved& c : end.plus) out.push_back(c.n);
  return out;
}

// L1 distance between a coarse solution and the fine one averaged onto it.
double l1_gap(const std::vector<double>& coarse, const std::vector<double>& fine) {
  const double dx = 1.0 / static_cast<double>(coarse.size());
  double s = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i)
    s += std::abs(coarse[i] - 0.5 * (fine[2 * i] + fine[2 * i + 1])) * dx;
  return s;
}

}  // namespace

TEST_CASE("observed order of accuracy on 64 -> 128 -> 256 cells") {
  const double t_end = 0.1;
  const auto a = solve(64, t_end), b = solve(128, t_end), c = solve(256, t_end);
  const double order = std::log2(l1_gap(a, b) / l1_gap(b, c));
  std::printf("observed L1 order: %.4f\n", order);
  CHECK(order >= 1.8);
}
