#pragma once

#include <span>
#include <vector>

#include "qclab/circle_fn.hpp"

namespace qclab {

enum class CurveKind { PolarGraph, Polygon, Sampled };

/// Closed Jordan curve with an arc-length structure.
///
/// PolarGraph: z(theta) = exp(g(theta)) e^{i theta} with g a real trig polynomial.
/// Polygon:    straight edges between the listed vertices (arc length exact).
/// Sampled:    dense point list joined by straight segments.
class JordanCurve {
 public:
  JordanCurve() = default;

  /// `g` is read through its real part. The arc-length table has `table_size`
  /// cells in theta, each integrated adaptively to 1e-10.
  static JordanCurve polar(const BoundaryFunction& g, std::size_t table_size = 1024);
  static JordanCurve circle(double radius = 1.0, std::size_t table_size = 1024);
  static JordanCurve polygon(std::vector<cplx> vertices);
  static JordanCurve sampled(std::vector<cplx> points);

  CurveKind kind() const { return kind_; }
  double length() const { return length_; }
  /// Cumulative arc length at the parameter nodes; front() = 0, back() = length().
  const std::vector<double>& arclength_table() const { return table_; }
  /// Largest point count a diagnostic may place on the curve.
  std::size_t resolution() const;

  /// Point at arc length s, measured from the start of the parametrization (periodic).
  cplx point(double s) const;
  std::vector<cplx> uniform_points(std::size_t n, double s0 = 0.0) const;
  /// Length of the shorter of the two arcs between the points at s1 and s2.
  double smaller_arc(double s1, double s2) const;

  // Polar graphs only.
  const BoundaryFunction& log_radius() const;
  cplx polar_point(double theta) const;
  double arclength_at(double theta) const;
  double parameter_at(double s) const;

  /// Vertices (Polygon) or samples (Sampled).
  const std::vector<cplx>& vertices() const { return vertices_; }

 private:
  void build_polar_table(std::size_t table_size);
  void build_polyline();
  double polar_speed(double theta) const;

  CurveKind kind_ = CurveKind::PolarGraph;
  BoundaryFunction g_;
  std::vector<cplx> g_modes_;  // a_n for n = -deg..deg
  int g_degree_ = 0;
  std::vector<cplx> vertices_;
  std::vector<double> table_;
  double length_ = 0.0;
};

/// Treats `points` as uniform samples of a smooth closed parametrization,
/// star-shaped about 0, and recovers log rho on n uniform polar angles
/// through the trigonometric interpolant. Throws "not_star_shaped".
JordanCurve polar_graph_from_samples(std::span<const cplx> points, std::size_t n = 256,
                                     std::size_t table_size = 1024);

struct ChordArcResult {
  double value = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
};

/// sup smaller_arc / chord: all pairs among `pair_samples` arc-uniform points,
/// then a deterministic pattern search around the best pair.
ChordArcResult chord_arc_search(const JordanCurve& curve, std::size_t pair_samples = 512);
double chord_arc_constant(const JordanCurve& curve, std::size_t pair_samples = 512);

/// Function on a curve: samples at s_j = j L / N, stored as a periodic
/// function of t = 2 pi s / L.
using CurveFunction = BoundaryFunction;

/// (int int |phi(x)-phi(y)|^p / |x-y|^2 dx dy)^(1/p) over arc length, with
/// chordal |x-y|. Same diagonal treatment as besov_norm.
double curve_besov_norm(const JordanCurve& curve, const CurveFunction& phi, const BesovParams& params = {});

enum class BishopReading {
  PowerOfTwo,  // level n uses N = 2^n points
  Literal,     // level n uses N = n points, weight still 2^n
};

struct BishopTable {
  std::vector<int> levels;
  std::vector<std::size_t> points;
  std::vector<double> terms;         // 2^n (length - inscribed length)
  std::vector<double> partial_sums;
  std::vector<double> base_points;   // arc-length base realising each term
};

/// Levels n = 1..n_max, points evenly spaced in arc length starting at s0.
BishopTable bishop_diagnostic(const JordanCurve& curve, double s0, int n_max,
                              BishopReading reading = BishopReading::PowerOfTwo);
/// Termwise maximum over several base points.
BishopTable bishop_diagnostic_max(const JordanCurve& curve, std::span<const double> bases, int n_max,
                                  BishopReading reading = BishopReading::PowerOfTwo);

}  // namespace qclab
