#include "qclab/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "qclab/common.hpp"

namespace qclab::quad {
namespace {

// Rules on [0, 1] are cached; callers get an affine copy.
Rule reference_rule(const gsl_integration_fixed_type* type, std::size_t n, double alpha) {
  static std::mutex mutex;
  static std::map<std::tuple<const void*, std::size_t, double>, Rule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(static_cast<const void*>(type), n, alpha);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  gsl_set_error_handler_off();
  gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(type, n, 0.0, 1.0, alpha, 0.0);
  if (ws == nullptr) throw Error("invalid_argument", "quadrature rule allocation failed");
  Rule rule;
  const double* x = gsl_integration_fixed_nodes(ws);
  const double* w = gsl_integration_fixed_weights(ws);
  rule.nodes.assign(x, x + n);
  rule.weights.assign(w, w + n);
  gsl_integration_fixed_free(ws);
  cache.emplace(key, rule);
  return rule;
}

}  // namespace

Rule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw Error("invalid_argument", "quadrature needs at least one node");
  Rule rule = reference_rule(gsl_integration_fixed_legendre, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = a + (b - a) * rule.nodes[i];
    rule.weights[i] *= (b - a);
  }
  return rule;
}

Rule gauss_jacobi(std::size_t n, double a, double b, double alpha) {
  if (n == 0) throw Error("invalid_argument", "quadrature needs at least one node");
  if (!(alpha > -1.0)) throw Error("invalid_argument", "Jacobi exponent must exceed -1");
  // GSL's Jacobi weight on [a,b] is (b-x)^alpha (x-a)^beta.
  Rule rule = reference_rule(gsl_integration_fixed_jacobi, n, alpha);
  double scale = std::pow(b - a, alpha + 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = a + (b - a) * rule.nodes[i];
    rule.weights[i] *= scale;
  }
  return rule;
}

}  // namespace qclab::quad
