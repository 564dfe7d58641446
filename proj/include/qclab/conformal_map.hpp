#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qclab/circle_homeo.hpp"
#include "qclab/harmonic_disk.hpp"
#include "qclab/jordan_curve.hpp"

namespace qclab {

struct TheodorsenParams {
  std::size_t nodes = 512;   // power of two
  double tol = 1e-12;        // sup change of theta between iterates
  int max_iter = 200;
  double max_slope = 0.3;    // near-circularity threshold on sup |g'|
};

/// Riemann map of the disk (or of the exterior disk) onto the inside (outside)
/// of a polar graph, through its boundary correspondence.
///
/// The unnormalized map sends e^{it} to the curve point with polar angle
/// theta(t) = t + u(t). A disk automorphism m is applied on the right, so the
/// normalized correspondence is theta(m(t)).
class RiemannMap {
 public:
  Domain side() const { return side_; }
  const JordanCurve& curve() const { return curve_; }
  const BoundaryFunction& displacement() const { return u_; }
  const DiskAutomorphism& precomposition() const { return pre_; }
  /// sup |theta_{k+1} - theta_k| per iteration.
  const std::vector<double>& residuals() const { return residuals_; }

  /// Polar angle of F(e^{it}) and its t-derivative.
  double angle(double t) const;
  double angle_derivative(double t) const;
  /// Solves angle(t) = theta.
  double inverse_angle(double theta) const;
  cplx boundary_point(double t) const { return curve_.polar_point(angle(t)); }
  /// F(z) for |z| <= 1 (interior) or |z| >= 1 (exterior), from the log series.
  cplx operator()(cplx z) const;

  /// Boundary correspondence as a circle homeomorphism on m nodes.
  CircleHomeomorphism correspondence(std::size_t m = 1024) const;

  RiemannMap precomposed(const DiskAutomorphism& m) const;

 private:
  friend RiemannMap interior_map(const JordanCurve&, const TheodorsenParams&);
  friend RiemannMap exterior_map(const JordanCurve&, const TheodorsenParams&);
  double raw_angle(double s) const;
  double raw_inverse(double theta) const;

  Domain side_ = Domain::Disk;
  JordanCurve curve_;
  BoundaryFunction u_, du_;
  std::vector<cplx> log_series_;  // c_n, n = 0..N/2, of log(F(w)/w) for the interior solve
  DiskAutomorphism pre_;
  std::vector<double> residuals_;
};

/// Theodorsen fixed point theta(t) = t + K[g(theta(t))], K the conjugate-function
/// multiplier -i sgn(n). Throws "not_near_circular" and "non_convergence".
RiemannMap interior_map(const JordanCurve& curve, const TheodorsenParams& params = {});
/// Interior map of the curve inverted by z -> 1/conj(z), reflected back.
RiemannMap exterior_map(const JordanCurve& curve, const TheodorsenParams& params = {});

struct ConformalPair {
  RiemannMap interior;
  RiemannMap exterior;
  std::array<cplx, 3> anchors{};
  bool normalized = false;
};

/// Curve points on the rays through 1, i and -i.
std::array<cplx, 3> default_anchors(const JordanCurve& curve);

ConformalPair conformal_pair(const JordanCurve& curve, const TheodorsenParams& params = {});
/// Precomposes both maps so that 1, i, -i go to the anchors (counterclockwise
/// points of the curve). Throws "anchor_collision" if preimages coincide.
ConformalPair normalize_three_points(const ConformalPair& pair, const std::array<cplx, 3>& anchors);
ConformalPair normalize_three_points(const ConformalPair& pair);

/// h = F1^{-1} o F2 on the circle. Throws "mapping_error" if the sampled lift
/// is not increasing.
CircleHomeomorphism welding(const ConformalPair& pair, std::size_t m = 1024);

/// Pullback model of the transmission operator: trace of the disk field,
/// composition with the welding, exterior Poisson extension.
HarmonicField transmit(const ConformalPair& pair, const HarmonicField& disk_field, const CircleHomeomorphism& weld);
HarmonicField transmit(const ConformalPair& pair, const HarmonicField& disk_field);
/// Exterior field back to the disk through the inverse welding.
HarmonicField reverse_transmit(const ConformalPair& pair, const HarmonicField& exterior_field,
                               const CircleHomeomorphism& weld);
HarmonicField reverse_transmit(const ConformalPair& pair, const HarmonicField& exterior_field);

struct TransmissionEstimate {
  double estimate = 0.0;        // operator_norm_estimate of C_h on trace data
  double dilatation_bound = 1.0;  // Beurling-Ahlfors max dilatation of the welding
  NormEstimate detail;
};

/// Empirical lower bound of ||Theta|| in the pullback model. Traces carry the
/// norm, so this is the composition-operator estimate for the welding.
TransmissionEstimate transmission_norm_estimate(const ConformalPair& pair, const NormEstimateParams& params = {},
                                                std::size_t weld_nodes = 1024);

}  // namespace qclab
