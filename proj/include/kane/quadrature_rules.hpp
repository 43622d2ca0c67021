#pragma once

#include <vector>

namespace kane::quadrature {

/// Fixed node/weight table. Tables are built once per order and shared.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int order);

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
const Rule& gauss_hermite(int order);

}  // namespace kane::quadrature
