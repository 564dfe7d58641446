#pragma once

#include <vector>

namespace qclab::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [a, b].
Rule gauss_legendre(std::size_t n, double a, double b);

/// Gauss-Jacobi rule on [a, b] for the weight (b - x)^alpha, alpha > -1.
Rule gauss_jacobi(std::size_t n, double a, double b, double alpha);

}  // namespace qclab::quad
