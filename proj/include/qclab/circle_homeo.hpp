#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "qclab/circle_fn.hpp"

namespace qclab {

/// Orientation-preserving automorphism of the disk, z -> e^{i alpha} (z - b) / (1 - conj(b) z), |b| < 1.
struct DiskAutomorphism {
  double alpha = 0.0;
  cplx b{};

  cplx operator()(cplx z) const;
  /// Continuous lift on the circle: alpha + t + 2 arg(1 - b e^{-it}).
  double lift(double t) const;
  double lift_derivative(double t) const;
  DiskAutomorphism inverse() const;

  /// The automorphism sending 1, i, -i to w[0], w[1], w[2] (points on the
  /// circle in counterclockwise order).
  static DiskAutomorphism from_three_points(const std::array<cplx, 3>& w);
};

/// Circle homeomorphism e^{it} -> e^{i eta(t)} given by a strictly increasing
/// lift with eta(t + 2 pi) = eta(t) + 2 pi. The lift is a C^1 piecewise cubic
/// Hermite interpolant on M uniform nodes t_j = 2 pi j / M.
class CircleHomeomorphism {
 public:
  CircleHomeomorphism() = default;

  /// Slopes from the periodic monotone (harmonic-mean) rule.
  static CircleHomeomorphism from_lift_samples(std::vector<double> eta);
  /// Exact slopes, limited where needed so every cell stays monotone.
  static CircleHomeomorphism from_lift_hermite(std::vector<double> eta, std::vector<double> slopes);
  static CircleHomeomorphism from_lift_function(std::size_t m, const std::function<double(double)>& eta,
                                                const std::function<double(double)>& deta);

  static CircleHomeomorphism identity(std::size_t m = 512);
  static CircleHomeomorphism rotation(double angle, std::size_t m = 512);
  /// e^{it} -> (e^{it} + a) / (1 + conj(a) e^{it}).
  static CircleHomeomorphism mobius(cplx a, std::size_t m = 512);
  static CircleHomeomorphism automorphism(const DiskAutomorphism& t, std::size_t m = 512);
  /// Lift derivative proportional to exp(-beta / t) + 1e-10 for t in (0, 2 pi),
  /// normalised to total 2 pi. Not quasisymmetric at t = 0.
  static CircleHomeomorphism flat(double beta, std::size_t m = 4096);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& node_values() const { return values_; }
  const std::vector<double>& node_slopes() const { return slopes_; }
  bool normalized() const { return normalized_; }

  double lift(double t) const;
  double derivative(double t) const;
  /// Exact integral of the lift from 0 to t.
  double antiderivative(double t) const;
  /// Solves lift(t) = y.
  double inverse_lift(double y) const;
  cplx operator()(cplx z) const { return std::polar(1.0, lift(std::arg(z))); }

  CircleHomeomorphism inverse() const;
  /// (this o other)(t) = this(other(t)), sampled on other's nodes.
  CircleHomeomorphism compose(const CircleHomeomorphism& other) const;
  /// Pre-composition with the automorphism m for which h o m fixes 1, i, -i.
  CircleHomeomorphism normalize_three_points() const;
  /// max |h(w) - w| over w in {1, i, -i}.
  double normalization_error() const;

 private:
  void finish();
  std::vector<double> values_;
  std::vector<double> slopes_;
  std::vector<double> cell_integrals_;  // prefix sums, size M + 1
  bool normalized_ = false;
};

struct QsReport {
  double qs_constant = 1.0;
  double max_dilatation = 1.0;  // infinity when the extension fails
  double scale_floor = 0.0;
  bool exceeds_cap = false;
};

struct QsParams {
  /// Scales t in (0, pi); empty picks a geometric ladder from two node spacings to pi / 2.
  std::vector<double> scales;
  double cap = 1e3;
  bool with_extension = true;
};

/// sup over nodes x and scales t of max(r, 1/r), r = (eta(x+t) - eta(x)) / (eta(x) - eta(x-t)).
QsReport qs_constant(const CircleHomeomorphism& h, const QsParams& params = {});

/// Beurling-Ahlfors extension of the lift to the upper half-plane, carried to
/// the disk by z = e^{i zeta}. F = (alpha + beta)/2 + i (alpha - beta), with
/// alpha, beta the averages of eta over [x, x+y] and [x-y, x].
class BeurlingAhlfors {
 public:
  explicit BeurlingAhlfors(const CircleHomeomorphism& h) : h_(&h) {}

  struct Jet {
    cplx value;   // F
    cplx fz;      // dF/dzeta
    cplx fzbar;   // dF/dzetabar
    cplx mu() const { return fzbar / fz; }
  };
  /// Extension in the half-plane coordinate zeta = x + i y, y > 0.
  Jet half_plane(double x, double y) const;
  /// Extension in the disk, 0 < |z| < 1; the dilatation is that of the half-plane map.
  cplx operator()(cplx z) const;
  cplx dilatation(cplx z) const;

 private:
  const CircleHomeomorphism* h_;
};

struct ExtensionGrid {
  std::vector<double> xs, ys;       // half-plane sample coordinates
  std::vector<cplx> image;          // disk image exp(i F), row-major in y
  std::vector<cplx> mu;             // dilatation
  double max_dilatation = 1.0;      // (1 + |mu|) / (1 - |mu|), maximised over the grid
};

struct ExtensionParams {
  std::size_t nx = 256;
  std::size_t ny = 48;
  /// Heights range geometrically from y_min_cells node spacings to y_max.
  double y_min_cells = 2.0;
  double y_max = 4.0 * kPi;
  double cap = 1e3;
};

/// Samples the extension; throws "not_quasisymmetric" if the Jacobian
/// degenerates or the dilatation exceeds the cap.
ExtensionGrid beurling_ahlfors_extension(const CircleHomeomorphism& h, const ExtensionParams& params = {});

/// phi o h, sampled at 4N points and truncated back to N modes.
BoundaryFunction compose_operator(const CircleHomeomorphism& h, const BoundaryFunction& phi);

struct NormEstimateParams {
  double p = 2.0;
  std::size_t ensemble_size = 16;
  std::size_t ascent_steps = 4;  // coordinate sweeps from the best ensemble member
  std::size_t grid = 512;
  int degree = 16;
  std::uint64_t seed = 20240601;
};

struct NormEstimate {
  double estimate = 0.0;
  double ensemble_best = 0.0;
  BoundaryFunction maximizer;
};

/// Lower bound for sup ||phi o h||_{B_p} / ||phi||_{B_p} over trig polynomials
/// of the configured degree.
NormEstimate operator_norm_estimate(const CircleHomeomorphism& h, const NormEstimateParams& params = {});

/// table[n][k] = ||C_{h_n} phi_k - C_h phi_k||_{B_p}.
std::vector<std::vector<double>> strong_convergence_probe(const std::vector<CircleHomeomorphism>& h_seq,
                                                          const CircleHomeomorphism& h_lim,
                                                          const std::vector<BoundaryFunction>& phis,
                                                          double p);

}  // namespace qclab
