#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qclab/common.hpp"

namespace qclab {

/// Complex function on the unit circle, held both as N uniform samples at
/// theta_j = 2 pi j / N and as Fourier coefficients a_n, n = -N/2+1 .. N/2.
/// N is a power of two. The two views are kept consistent by the FFT.
class BoundaryFunction {
 public:
  BoundaryFunction() = default;

  static BoundaryFunction from_samples(std::vector<cplx> samples);
  /// Coefficients in index order n = -N/2+1 .. N/2.
  static BoundaryFunction from_coefficients(std::vector<cplx> coeffs);
  /// Sparse construction: N samples, listed modes, all others zero.
  static BoundaryFunction from_modes(std::size_t n, std::span<const std::pair<int, cplx>> modes);
  static BoundaryFunction from_modes(std::size_t n, std::initializer_list<std::pair<int, cplx>> modes);
  static BoundaryFunction from_function(std::size_t n, const std::function<cplx(double)>& f);
  static BoundaryFunction constant(std::size_t n, cplx c);

  std::size_t size() const { return samples_.size(); }
  int min_mode() const { return -static_cast<int>(size() / 2) + 1; }
  int max_mode() const { return static_cast<int>(size() / 2); }

  const std::vector<cplx>& samples() const { return samples_; }
  const std::vector<cplx>& coefficients() const { return coeffs_; }
  /// a_n, or zero when n is outside the stored band.
  cplx coefficient(int n) const;

  /// Trigonometric interpolant at an arbitrary angle.
  cplx operator()(double theta) const;

  /// d/dtheta at the grid nodes (the Nyquist mode is dropped).
  std::vector<cplx> derivative_samples() const;
  /// Values at theta_j + shift, by Fourier phase shift.
  std::vector<cplx> shifted_samples(double shift) const;

  /// Largest |n| whose coefficient exceeds rel_tol * max |a_m|; 0 for constants.
  int degree(double rel_tol = 1e-13) const;

  /// Zero-padded or truncated copy on a grid of n points.
  BoundaryFunction resampled(std::size_t n) const;

  /// Keeps only the modes for which keep(n) is true.
  BoundaryFunction filtered(const std::function<bool(int)>& keep) const;
  /// Multiplies a_n by m(n).
  BoundaryFunction multiplied(const std::function<cplx(int)>& m) const;

  BoundaryFunction& operator+=(const BoundaryFunction& other);
  BoundaryFunction& operator-=(const BoundaryFunction& other);
  BoundaryFunction& operator*=(cplx s);
  friend BoundaryFunction operator+(BoundaryFunction a, const BoundaryFunction& b) { return a += b; }
  friend BoundaryFunction operator-(BoundaryFunction a, const BoundaryFunction& b) { return a -= b; }
  friend BoundaryFunction operator*(cplx s, BoundaryFunction a) { return a *= s; }

 private:
  void sync_from_samples();
  void sync_from_coefficients();
  std::size_t index_of(int n) const { return static_cast<std::size_t>(n - min_mode()); }

  std::vector<cplx> samples_;
  std::vector<cplx> coeffs_;
};

/// Returns phi with a_0 = 0. Idempotent.
BoundaryFunction mod_constants_normalize(const BoundaryFunction& phi);

/// max_n |a_n - b_n| over n != 0 (the two grids may differ in size).
double coefficient_distance_mod_constants(const BoundaryFunction& a, const BoundaryFunction& b);

enum class QuadratureRule { Trapezoid, MidpointOffset };

struct BesovParams {
  double p = 2.0;
  /// Half-width, in grid cells, of the strip around the diagonal where the
  /// smooth remainder is dropped.
  int diagonal_band = 2;
  QuadratureRule rule = QuadratureRule::Trapezoid;

  void validate() const;
};

/// (int int |phi(x)-phi(y)|^p / |x-y|^2 dx dy)^(1/p) over S x S, chordal |x-y|,
/// arc-length measure. Constants are ignored.
double besov_norm(const BoundaryFunction& phi, const BesovParams& params = {});

/// Closed form of the p = 2 norm: 2 pi (sum |n| |a_n|^2)^(1/2).
double besov_norm_spectral(const BoundaryFunction& phi);

/// int_0^{2pi} |2 sin(t/2)|^(p-2) dt, the integral of the chordal diagonal model.
double chordal_power_integral(double p);

}  // namespace qclab
