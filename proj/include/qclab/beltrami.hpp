#pragma once

#include <functional>
#include <vector>

#include "qclab/circle_homeo.hpp"
#include "qclab/jordan_curve.hpp"

namespace qclab {

/// Square lattice over [-L, L)^2 with n points per side, spacing 2L/n.
/// Row-major storage: index j * n + i holds the point (-L + i h) + i (-L + j h).
struct Lattice {
  std::size_t n = 512;
  double half_width = 4.0;

  double spacing() const { return 2.0 * half_width / static_cast<double>(n); }
  cplx point(std::size_t i, std::size_t j) const {
    return {-half_width + spacing() * static_cast<double>(i), -half_width + spacing() * static_cast<double>(j)};
  }
  std::size_t size() const { return n * n; }
  void validate() const;
};

enum class Support {
  Disk,          // inside the unit circle
  ExteriorDisk,  // outside the unit circle
  Annulus,       // both sides, away from the circle
  Window,        // whole lattice window; test mode, no support checks
};

/// Complex dilatation sampled on a lattice. When built from a generator, the
/// generator is kept for exact evaluation off the lattice; otherwise values
/// off the lattice come from 6-point Lagrange interpolation.
class BeltramiCoefficient {
 public:
  BeltramiCoefficient() = default;

  static BeltramiCoefficient from_function(const Lattice& lattice, std::function<cplx(cplx)> f, Support support);
  static BeltramiCoefficient from_values(const Lattice& lattice, std::vector<cplx> values, Support support);
  static BeltramiCoefficient zero(const Lattice& lattice, Support support = Support::Disk);
  /// mu = k on the whole window (test mode).
  static BeltramiCoefficient constant(const Lattice& lattice, cplx k);
  /// k psi(|z|) with psi a C-infinity bump on (r_in, r_out), peak 1.
  static BeltramiCoefficient radial_bump(const Lattice& lattice, cplx k, double r_in, double r_out);
  /// Radial bump times (1 + cos(arg z - angle)) / 2.
  static BeltramiCoefficient angular_bump(const Lattice& lattice, cplx k, double r_in, double r_out, double angle);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<cplx>& values() const { return values_; }
  Support support() const { return support_; }
  bool has_generator() const { return static_cast<bool>(fn_); }

  cplx operator()(cplx z) const;
  double sup_norm() const;
  /// Smallest | |z| - 1 | over lattice points where mu is nonzero (infinity if mu = 0).
  double circle_gap() const;

  BeltramiCoefficient scaled(double c) const;
  /// conj(mu(1/conj z)) z^2 / conj(z)^2, the dilatation of R o F o R for R(z) = 1/conj(z).
  BeltramiCoefficient reflected() const;
  /// Multiplies by a smooth cutoff vanishing within distance delta of the circle.
  BeltramiCoefficient with_cutoff(double delta) const;
  /// Sum of two coefficients with disjoint supports on the same lattice.
  friend BeltramiCoefficient combine(const BeltramiCoefficient& a, const BeltramiCoefficient& b);

 private:
  Lattice lattice_;
  std::vector<cplx> values_;
  Support support_ = Support::Disk;
  std::function<cplx(cplx)> fn_;
};

BeltramiCoefficient combine(const BeltramiCoefficient& a, const BeltramiCoefficient& b);

/// (int |mu|^p rho^2 dA)^(1/p), rho the hyperbolic density of the side
/// carrying the support; lattice sum. Throws "support_touches_circle" if mu is
/// nonzero within `cutoff` of the circle (default two lattice cells).
double mp_norm(const BeltramiCoefficient& mu, double p, double cutoff = -1.0);

/// Post-composition by w -> (a w + b) / (c w + d).
struct Mobius {
  cplx a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  cplx operator()(cplx w) const { return (a * w + b) / (c * w + d); }
  cplx derivative(cplx w) const {
    const cplx q = c * w + d;
    return (a * d - b * c) / (q * q);
  }
  /// this o other
  Mobius after(const Mobius& other) const {
    return {a * other.a + b * other.c, a * other.b + b * other.d, c * other.a + d * other.c, c * other.b + d * other.d};
  }
  Mobius inverse() const { return {d, -b, -c, a}; }
};

enum class Normalization {
  Infinity,         // F(z) = z + O(1/z)
  ZeroInfinity,     // additionally F(0) = 0
  DiskThreePoints,  // self-map of the disk fixing 1, i, -i (reflection-symmetric solve)
};

struct SolverParams {
  double k_max = 0.5;
  double tol = 1e-13;            // sup change of the density between iterates
  int max_iter = 300;
  double residual_radius = 2.0;  // residual measured on |z| <= radius
  double residual_tol = 1e-2;    // solves with a larger residual are rejected
  bool periodic = false;         // test mode: periodic transforms on the window
};

/// Quasiconformal map on the lattice, F = z + C[h] with h = mu (1 + B[h]).
/// C is the Cauchy transform and B the Beurling transform, both applied as
/// aperiodic convolutions with spectrally truncated kernels.
class QcMapGrid {
 public:
  const Lattice& lattice() const { return lattice_; }
  Normalization normalization() const { return normalization_; }
  const Mobius& post() const { return post_; }

  /// Normalized map, derivatives and values on the lattice or off it (interpolated).
  cplx operator()(cplx z) const;
  cplx dz(cplx z) const;
  cplx dzbar(cplx z) const;
  cplx at(std::size_t i, std::size_t j) const;
  cplx dz_at(std::size_t i, std::size_t j) const;
  cplx dzbar_at(std::size_t i, std::size_t j) const;
  /// Solves F(z) = w by Newton's method from `guess`.
  cplx inverse(cplx w, cplx guess) const;

  /// sup |dbar F - mu dF| on |z| <= residual_radius, sixth-order differences.
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }
  double min_jacobian() const { return min_jacobian_; }
  /// Disk normalization only: how far the raw image of the circle is from a circle.
  double circle_error() const { return circle_error_; }

 private:
  friend QcMapGrid solve_beltrami(const BeltramiCoefficient&, Normalization, const SolverParams&);
  friend QcMapGrid solve_disk_self_map(const BeltramiCoefficient&, const SolverParams&);
  cplx raw(cplx z) const;
  cplx raw_at(std::size_t i, std::size_t j) const;

  Lattice lattice_;
  Normalization normalization_ = Normalization::Infinity;
  bool periodic_ = false;
  cplx mean_ = 0.0;             // periodic mode: F = z + mean conj(z) + C_per[h - mean]
  std::vector<cplx> cauchy_;    // C[h] on the lattice
  std::vector<cplx> dz_, dzbar_;  // raw derivatives on the lattice
  Mobius post_;
  double residual_ = 0.0;
  int iterations_ = 0;
  double min_jacobian_ = 0.0;
  double circle_error_ = 0.0;
};

/// Throws "dilatation_too_large", "support_outside_window", "support_mismatch",
/// "non_convergence", "residual_too_large" or "not_orientation_preserving".
QcMapGrid solve_beltrami(const BeltramiCoefficient& mu, Normalization normalization = Normalization::Infinity,
                         const SolverParams& params = {});

/// Disk self-map H^mu for mu supported in the disk; the solve uses mu plus its reflection.
QcMapGrid solve_disk_self_map(const BeltramiCoefficient& mu, const SolverParams& params = {});

/// Monotone lift of the restriction of a disk-normalized map to the circle.
/// Throws "non_monotone_trace".
CircleHomeomorphism boundary_trace_qs(const QcMapGrid& map, std::size_t m = 1024);

/// Dilatation of H^{mu1} o H^{mu2} (disk self-maps for Disk supports, plane
/// maps normalized at infinity otherwise), from the chain rule.
BeltramiCoefficient compose_dilatation(const BeltramiCoefficient& mu1, const BeltramiCoefficient& mu2,
                                       const SolverParams& params = {});
/// Dilatation of the inverse map, in the same setting.
BeltramiCoefficient invert_dilatation(const BeltramiCoefficient& mu, const SolverParams& params = {});

/// G(mu1, mu2)(S) for mu1 on the disk and mu2 on the exterior, as a sampled curve.
JordanCurve wp_curve_from_pair(const BeltramiCoefficient& mu1, const BeltramiCoefficient& mu2,
                               const SolverParams& params = {}, std::size_t points = 1024);

struct CompositionCheck {
  double max_error = 0.0;  // sup over the circle of |G(H^-1(z)) - T(F_nu(z))|
  double residual = 0.0;   // largest residual of the three solves
  BeltramiCoefficient nu;  // mu1 * (reflected mu2)^-1
  std::vector<cplx> lhs;   // G(H^-1(z)) on the sample points
};

/// Checks G(mu1, mu2) o H^{nu2}^{-1} = F_{mu1 * nu2^{-1}} on the circle, with nu2 the
/// reflection of mu2 into the disk, up to a Mobius map fitted at 1, i, -i.
CompositionCheck wp_composition_identity(const BeltramiCoefficient& mu1, const BeltramiCoefficient& mu2,
                                         const SolverParams& params = {}, std::size_t points = 256);

}  // namespace qclab
