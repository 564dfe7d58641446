#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "qclab/circle_fn.hpp"

namespace qclab::detail {

// Samples of a function on a closed curve of length L, uniform in arc length.
struct BesovInput {
  std::span<const cplx> values;       // at s_j = j h, h = L / N
  std::span<const cplx> half_values;  // at s_j + h/2 (midpoint rule only)
  std::span<const double> slope;      // |d phi / ds| at s_j
  double length = kTwoPi;
};

// Double integral  int int |phi(x)-phi(y)|^p / |x-y|^2 ds dt.
//
// The diagonal behaves like |phi'|^p |t|^(p-2). That model, written with the
// chord of a circle of the same length, c(t) = (L/pi)|sin(pi t/L)|, is
// subtracted from every row and its exact row integral added back. What is
// left vanishes on the diagonal; it is summed outside a strip of
// `diagonal_band` cells.
//
// chord(j, k):      |z(s_j) - z(s_{j+k})|
// half_chord(j, k): |z(s_j) - z(s_{j+k} + h/2)|
template <class Chord, class HalfChord>
double besov_integral(const BesovInput& in, const BesovParams& params, Chord&& chord,
                      HalfChord&& half_chord) {
  params.validate();
  const std::size_t n = in.values.size();
  const double p = params.p;
  const double len = in.length;
  const double h = len / static_cast<double>(n);
  const std::size_t band = static_cast<std::size_t>(params.diagonal_band);
  if (2 * band >= n) throw Error("invalid_argument", "diagonal band wider than the grid");
  const bool quadratic = p == 2.0;

  auto model_chord = [&](double t) { return (len / kPi) * std::abs(std::sin(kPi * t / len)); };
  auto power = [&](double squared) { return quadratic ? squared : std::pow(squared, 0.5 * p); };

  std::vector<double> slope_p(n);
  for (std::size_t j = 0; j < n; ++j) slope_p[j] = quadratic ? in.slope[j] * in.slope[j] : std::pow(in.slope[j], p);
  const double row_model = std::pow(len / kTwoPi, p - 1.0) * chordal_power_integral(p);

  // Values repeated twice so the inner loops index without a modulo.
  auto doubled = [n](std::span<const cplx> v) {
    std::vector<cplx> out(2 * n);
    std::copy(v.begin(), v.end(), out.begin());
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  };

  double total = 0.0;
  if (params.rule == QuadratureRule::Trapezoid) {
    const std::vector<cplx> vals = doubled(in.values);
    std::vector<double> model(n, 0.0), weight(n, 0.0);
    for (std::size_t k = band; k <= n - band; ++k) {
      weight[k] = (k == band || k == n - band) ? 0.5 : 1.0;
      model[k] = quadratic ? 1.0 : std::pow(model_chord(h * static_cast<double>(k)), p - 2.0);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const cplx vj = in.values[j];
      double acc = 0.0;
      for (std::size_t k = band; k <= n - band; ++k) {
        const cplx d = vals[j + k] - vj;
        const double c = chord(j, k);
        acc += weight[k] * (power(std::norm(d)) / (c * c) - slope_p[j] * model[k]);
      }
      total += h * slope_p[j] * row_model + h * h * acc;
    }
  } else {
    if (in.half_values.size() != n) throw Error("invalid_argument", "midpoint rule needs half-grid values");
    const std::vector<cplx> vals = doubled(in.half_values);
    std::vector<double> model(n, 0.0);
    for (std::size_t k = band; k + band < n; ++k)
      model[k] = quadratic ? 1.0 : std::pow(model_chord(h * (static_cast<double>(k) + 0.5)), p - 2.0);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx vj = in.values[j];
      double acc = 0.0;
      for (std::size_t k = band; k + band < n; ++k) {
        const cplx d = vals[j + k] - vj;
        const double c = half_chord(j, k);
        acc += power(std::norm(d)) / (c * c) - slope_p[j] * model[k];
      }
      total += h * slope_p[j] * row_model + h * h * acc;
    }
  }
  return total > 0.0 ? total : 0.0;
}

}  // namespace qclab::detail
