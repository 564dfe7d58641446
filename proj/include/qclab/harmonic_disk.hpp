#pragma once

#include <functional>
#include <vector>

#include "qclab/circle_fn.hpp"

namespace qclab {

enum class Domain { Disk, ExteriorDisk };

/// Harmonic function on the disk or on its exterior, determined by boundary
/// data: Phi(r e^{it}) = sum a_n r^{|n|} e^{int} on the disk, r^{-|n|} outside.
class HarmonicField {
 public:
  HarmonicField() = default;
  HarmonicField(Domain domain, BoundaryFunction boundary) : domain_(domain), boundary_(std::move(boundary)) {}

  Domain domain() const { return domain_; }
  const BoundaryFunction& boundary() const { return boundary_; }

  cplx operator()(cplx z) const;
  /// Wirtinger derivatives d/dz and d/dzbar.
  cplx dz(cplx z) const;
  cplx dzbar(cplx z) const;
  /// |grad Phi| = sqrt(2 (|dz|^2 + |dzbar|^2)); for complex Phi this is the
  /// Frobenius norm of the real Jacobian.
  double grad_norm(cplx z) const;

  /// True when every mode of the wrong analytic type is below tol (n <= -1 on
  /// the disk, n >= 1 outside).
  bool is_holomorphic(double tol = 1e-12) const;

 private:
  Domain domain_ = Domain::Disk;
  BoundaryFunction boundary_;
};

HarmonicField poisson_extend(const BoundaryFunction& phi, Domain domain = Domain::Disk);
BoundaryFunction trace(const HarmonicField& field);

struct DirichletParams {
  double p = 2.0;
  /// Gauss nodes per radial piece; 0 picks a value from the field degree.
  int radial_nodes = 0;
  /// Angular trapezoid points (rounded up to a power of two); 0 is automatic.
  int angular_nodes = 0;
  /// Split radius: Gauss-Legendre on r < r_max, Gauss-Jacobi with the exact
  /// boundary weight on r_max < r < 1.
  double r_max = 0.9;
  /// Relative change allowed between the rule of order n and of order 2n.
  double tol = 1e-8;
  int max_radial_nodes = 1024;

  void validate() const;
};

struct DirichletReport {
  double value = 0.0;  // the p-th root
  double bulk = 0.0;   // contribution of r < r_max to value^p
  double tail = 0.0;   // contribution of r > r_max to value^p
  double change = 0.0; // relative change at the last refinement
  int radial_nodes = 0;
  int angular_nodes = 0;
};

/// (int (|grad Phi| / rho)^p rho^2 dA)^(1/p), rho = 2 / |1 - |z|^2|.
double dirichlet_norm(const HarmonicField& field, const DirichletParams& params = {});
DirichletReport dirichlet_norm_report(const HarmonicField& field, const DirichletParams& params = {});

/// Same integral with |Phi'| in place of |grad Phi|; the field must be holomorphic.
double analytic_besov_norm(const HarmonicField& field, const DirichletParams& params = {});

/// D_2(P phi)^2 / B_2(phi)^2, which equals 1 / (2 pi).
double douglas_ratio(const BoundaryFunction& phi, double min_norm = 1e-10);

/// Multiplier +1 on n >= 1 and -1 on n <= -1; a_0 is dropped.
BoundaryFunction hilbert_transform(const BoundaryFunction& phi);

/// Holomorphic part: modes n >= 1 on the disk, n <= -1 on the exterior.
HarmonicField szego_project(const BoundaryFunction& phi, Domain side);

struct HoloAntiSplit {
  HarmonicField holomorphic;      // modes n >= 1
  HarmonicField antiholomorphic;  // modes n <= -1, as a field on the disk
  HarmonicField reflected;        // antiholomorphic(conj z), holomorphic on the disk
};

HoloAntiSplit holo_antiholo_split(const HarmonicField& field);

struct SplitParams {
  double p = 2.0;
  std::size_t boundary_points = 256;
  /// Trace by Richardson extrapolation from radii 1 - delta/2^k, k = 0..3.
  double delta = 1e-3;
  /// Largest allowed gap between the extrapolations from k = 0..2 and k = 1..3.
  double settle_tol = 1e-6;
  std::size_t remainder_radii = 32;
  std::size_t remainder_angles = 64;
  /// Outermost remainder circle; the trace residual is measured there.
  double r_max = 0.999;
};

struct DirichletSplit {
  HarmonicField harmonic;
  std::vector<double> radii;
  std::vector<double> angles;
  /// psi - harmonic at (radii[i], angles[j]), row-major in i.
  std::vector<cplx> remainder;
  double trace_residual = 0.0;  // sup |remainder| on |z| = r_max
  double settle_gap = 0.0;
  double harmonic_norm = 0.0;  // p-Dirichlet norm of the harmonic part
  /// |<grad H, grad R>| / (|grad H| |grad R|) with the L^2 pairing; 0 if either part vanishes.
  double cross_term = 0.0;
};

DirichletSplit dirichlet_split(const std::function<cplx(cplx)>& psi, const SplitParams& params = {});

}  // namespace qclab
