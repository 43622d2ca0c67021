#include "kane/quadrature_rules.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <gsl/gsl_integration.h>

namespace kane::quadrature {
namespace {

Rule build(const gsl_integration_fixed_type* type, int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("quadrature order must be positive");
  gsl_integration_fixed_workspace* ws =
      gsl_integration_fixed_alloc(type, static_cast<size_t>(order), a, b, 0.0, 0.0);
  if (ws == nullptr) throw std::runtime_error("gsl_integration_fixed_alloc failed");
  const double* x = gsl_integration_fixed_nodes(ws);
  const double* w = gsl_integration_fixed_weights(ws);
  Rule rule{{x, x + order}, {w, w + order}};
  gsl_integration_fixed_free(ws);
  return rule;
}

const Rule& cached(std::map<int, std::unique_ptr<Rule>>& cache, int order,
                   const gsl_integration_fixed_type* type, double a, double b) {
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<Rule>(build(type, order, a, b));
  return *slot;
}

}  // namespace

const Rule& gauss_legendre(int order) {
  static std::map<int, std::unique_ptr<Rule>> cache;
  return cached(cache, order, gsl_integration_fixed_legendre, -1.0, 1.0);
}

const Rule& gauss_hermite(int order) {
  static std::map<int, std::unique_ptr<Rule>> cache;
  return cached(cache, order, gsl_integration_fixed_hermite, 0.0, 1.0);
}

}  // namespace kane::quadrature
