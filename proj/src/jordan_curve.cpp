#include "qclab/jordan_curve.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "qclab/detail/besov_kernel.hpp"

namespace qclab {
namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

double orient(cplx a, cplx b, cplx c) { return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real()); }

bool on_segment(cplx a, cplx b, cplx c) {
  return std::min(a.real(), b.real()) <= c.real() && c.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= c.imag() && c.imag() <= std::max(a.imag(), b.imag());
}

bool segments_meet(cplx a, cplx b, cplx c, cplx d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Real trig series g and g' from modes -deg..deg.
std::pair<double, double> trig_eval(const std::vector<cplx>& modes, int deg, double theta) {
  const cplx w = std::polar(1.0, theta);
  double g = modes[static_cast<std::size_t>(deg)].real(), dg = 0.0;
  cplx pw = 1.0;
  for (int n = 1; n <= deg; ++n) {
    pw *= w;
    const cplx a = modes[static_cast<std::size_t>(deg + n)], b = modes[static_cast<std::size_t>(deg - n)];
    const cplx term = a * pw + b * std::conj(pw);
    const cplx dterm = cplx(0, n) * (a * pw - b * std::conj(pw));
    g += term.real();
    dg += dterm.real();
  }
  return {g, dg};
}

}  // namespace

JordanCurve JordanCurve::polar(const BoundaryFunction& g, std::size_t table_size) {
  if (table_size < 16) throw Error("invalid_argument", "arc-length table needs at least 16 cells");
  for (const cplx& v : g.samples())
    if (!std::isfinite(v.real())) throw Error("degenerate_curve", "log-radius samples must be finite");
  JordanCurve c;
  c.kind_ = CurveKind::PolarGraph;
  std::vector<cplx> real_samples(g.samples().size());
  for (std::size_t j = 0; j < real_samples.size(); ++j) real_samples[j] = g.samples()[j].real();
  c.g_ = BoundaryFunction::from_samples(std::move(real_samples));
  c.g_degree_ = c.g_.degree(1e-15);
  c.g_modes_.resize(static_cast<std::size_t>(2 * c.g_degree_ + 1));
  for (int n = -c.g_degree_; n <= c.g_degree_; ++n) {
    cplx a = c.g_.coefficient(n);
    // The Nyquist mode of an even grid is real-valued as cos(N theta / 2).
    if (std::abs(n) == c.g_.max_mode()) a = 0.5 * c.g_.coefficient(c.g_.max_mode());
    c.g_modes_[static_cast<std::size_t>(n + c.g_degree_)] = a;
  }
  c.build_polar_table(table_size);
  return c;
}

JordanCurve JordanCurve::circle(double radius, std::size_t table_size) {
  if (!(radius > 0.0)) throw Error("degenerate_curve", "radius must be positive");
  return polar(BoundaryFunction::constant(16, std::log(radius)), table_size);
}

JordanCurve JordanCurve::polygon(std::vector<cplx> vertices) {
  JordanCurve c;
  c.kind_ = CurveKind::Polygon;
  c.vertices_ = std::move(vertices);
  c.build_polyline();
  return c;
}

JordanCurve JordanCurve::sampled(std::vector<cplx> points) {
  JordanCurve c;
  c.kind_ = CurveKind::Sampled;
  c.vertices_ = std::move(points);
  c.build_polyline();
  return c;
}

double JordanCurve::polar_speed(double theta) const {
  auto [g, dg] = trig_eval(g_modes_, g_degree_, theta);
  return std::exp(g) * std::sqrt(1.0 + dg * dg);
}

void JordanCurve::build_polar_table(std::size_t table_size) {
  table_.assign(table_size + 1, 0.0);
  const double h = kTwoPi / static_cast<double>(table_size);
  auto speed = [this](double t) { return polar_speed(t); };
  for (std::size_t j = 0; j < table_size; ++j) {
    const double a = h * static_cast<double>(j);
    table_[j + 1] = table_[j] + gauss_kronrod<double, 31>::integrate(speed, a, a + h, 15, 1e-10);
  }
  length_ = table_.back();
}

void JordanCurve::build_polyline() {
  const std::size_t m = vertices_.size();
  if (m < 3) throw Error("degenerate_curve", "a closed polyline needs at least three vertices");
  for (const cplx& v : vertices_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error("degenerate_curve", "non-finite vertex");
  table_.assign(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double e = std::abs(vertices_[(j + 1) % m] - vertices_[j]);
    if (e == 0.0) throw Error("degenerate_curve", "repeated consecutive vertex");
    table_[j + 1] = table_[j] + e;
  }
  length_ = table_.back();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;  // adjacent through the closing edge
      if (segments_meet(vertices_[i], vertices_[i + 1], vertices_[j], vertices_[(j + 1) % m]))
        throw Error("not_simple", "polyline intersects itself");
    }
}

std::size_t JordanCurve::resolution() const {
  switch (kind_) {
    case CurveKind::Sampled: return vertices_.size();
    case CurveKind::Polygon: return std::size_t{1} << 26;
    case CurveKind::PolarGraph: return std::size_t{1} << 24;
  }
  return 0;
}

const BoundaryFunction& JordanCurve::log_radius() const {
  if (kind_ != CurveKind::PolarGraph) throw Error("invalid_argument", "curve is not a polar graph");
  return g_;
}

cplx JordanCurve::polar_point(double theta) const {
  if (kind_ != CurveKind::PolarGraph) throw Error("invalid_argument", "curve is not a polar graph");
  return std::polar(std::exp(trig_eval(g_modes_, g_degree_, theta).first), theta);
}

double JordanCurve::arclength_at(double theta) const {
  if (kind_ != CurveKind::PolarGraph) throw Error("invalid_argument", "curve is not a polar graph");
  const double turns = std::floor(theta / kTwoPi);
  const double t = theta - turns * kTwoPi;
  const std::size_t cells = table_.size() - 1;
  const double h = kTwoPi / static_cast<double>(cells);
  const std::size_t j = std::min(cells - 1, static_cast<std::size_t>(t / h));
  const double a = h * static_cast<double>(j);
  auto speed = [this](double x) { return polar_speed(x); };
  return turns * length_ + table_[j] + gauss<double, 20>::integrate(speed, a, t);
}

double JordanCurve::parameter_at(double s) const {
  if (kind_ != CurveKind::PolarGraph) throw Error("invalid_argument", "curve is not a polar graph");
  const double turns = std::floor(s / length_);
  double r = s - turns * length_;
  const std::size_t cells = table_.size() - 1;
  const double h = kTwoPi / static_cast<double>(cells);
  std::size_t j = static_cast<std::size_t>(std::upper_bound(table_.begin(), table_.end(), r) - table_.begin());
  j = std::clamp<std::size_t>(j, 1, cells) - 1;
  const double a = h * static_cast<double>(j), b = a + h;
  double lo = a, hi = b;
  double t = a + h * (r - table_[j]) / (table_[j + 1] - table_[j]);
  auto speed = [this](double x) { return polar_speed(x); };
  for (int it = 0; it < 60; ++it) {
    const double f = table_[j] + gauss<double, 20>::integrate(speed, a, t) - r;
    if (f > 0) hi = t; else lo = t;
    if (std::abs(f) <= 4.0 * std::numeric_limits<double>::epsilon() * length_) break;
    double next = t - f / polar_speed(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) break;
    t = next;
  }
  return turns * kTwoPi + t;
}

cplx JordanCurve::point(double s) const {
  if (kind_ == CurveKind::PolarGraph) return polar_point(parameter_at(s));
  double r = std::fmod(s, length_);
  if (r < 0) r += length_;
  const std::size_t m = vertices_.size();
  std::size_t j = static_cast<std::size_t>(std::upper_bound(table_.begin(), table_.end(), r) - table_.begin());
  j = std::clamp<std::size_t>(j, 1, m) - 1;
  const double u = (r - table_[j]) / (table_[j + 1] - table_[j]);
  return vertices_[j] + u * (vertices_[(j + 1) % m] - vertices_[j]);
}

std::vector<cplx> JordanCurve::uniform_points(std::size_t n, double s0) const {
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = point(s0 + length_ * static_cast<double>(k) / static_cast<double>(n));
  return out;
}

double JordanCurve::smaller_arc(double s1, double s2) const {
  double d = std::fmod(std::abs(s1 - s2), length_);
  return std::min(d, length_ - d);
}

JordanCurve polar_graph_from_samples(std::span<const cplx> points, std::size_t n, std::size_t table_size) {
  const std::size_t m = points.size();
  if (m < 8 || !is_power_of_two(m)) throw Error("invalid_argument", "sample count must be a power of two >= 8");
  if (n < 4 || !is_power_of_two(n)) throw Error("invalid_argument", "polar grid must be a power of two >= 4");
  const BoundaryFunction z = BoundaryFunction::from_samples(std::vector<cplx>(points.begin(), points.end()));
  const BoundaryFunction dz = BoundaryFunction::from_samples(z.derivative_samples());

  // Unwrapped polar angle at the samples; it must increase by 2 pi in total.
  std::vector<double> angle(m + 1);
  angle[0] = std::arg(points[0]);
  for (std::size_t k = 1; k <= m; ++k) {
    const cplx a = points[k - 1], b = points[k % m];
    if (a == 0.0 || b == 0.0) throw Error("not_star_shaped", "curve passes through the origin");
    const double step = std::arg(b / a);
    if (!(step > 0.0)) throw Error("not_star_shaped", "polar angle is not increasing along the samples");
    angle[k] = angle[k - 1] + step;
  }
  if (std::abs(angle[m] - angle[0] - kTwoPi) > 1e-9) throw Error("not_star_shaped", "curve does not wind once around 0");

  const double dt = kTwoPi / static_cast<double>(m);
  std::vector<cplx> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    double target = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    while (target < angle[0]) target += kTwoPi;
    while (target >= angle[m]) target -= kTwoPi;
    // Rounding in the accumulated angle can leave target just outside [angle[0], angle[m]).
    const auto pos = std::upper_bound(angle.begin(), angle.end(), target) - angle.begin();
    const std::size_t k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(pos - 1, 0, static_cast<std::ptrdiff_t>(m) - 1));
    double lo = dt * static_cast<double>(k), hi = lo + dt;
    double t = lo + dt * (target - angle[k]) / (angle[k + 1] - angle[k]);
    cplx zt = z(t);
    for (int it = 0; it < 60; ++it) {
      zt = z(t);
      const double f = angle[k] + std::arg(zt / points[k]) - target;
      const double df = (dz(t) / zt).imag();
      if (!(df > 0.0)) throw Error("not_star_shaped", "interpolated curve turns back around 0");
      if (f > 0) hi = t; else lo = t;
      if (std::abs(f) < 1e-15) break;
      double next = t - f / df;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == t) break;
      t = next;
    }
    g[j] = std::log(std::abs(zt));
  }
  return JordanCurve::polar(BoundaryFunction::from_samples(std::move(g)), table_size);
}

ChordArcResult chord_arc_search(const JordanCurve& curve, std::size_t pair_samples) {
  if (pair_samples < 4) throw Error("invalid_argument", "need at least four pair samples");
  const double len = curve.length();
  const double floor = 1e-14 * len;
  auto ratio = [&](double s1, double s2, cplx z1, cplx z2) {
    const double c = std::abs(z1 - z2);
    return c > floor ? curve.smaller_arc(s1, s2) / c : -1.0;
  };
  const std::size_t n = pair_samples;
  const auto pts = curve.uniform_points(n);
  const double h = len / static_cast<double>(n);
  ChordArcResult best{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = ratio(h * static_cast<double>(i), h * static_cast<double>(j), pts[i], pts[j]);
      if (r > best.value) best = {r, h * static_cast<double>(i), h * static_cast<double>(j)};
    }

  // Pattern search in (s1, s2) with a halving step.
  const double moves[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  for (double step = h; step > 1e-12 * len; step *= 0.5) {
    bool moved = true;
    for (int guard = 0; moved && guard < 200; ++guard) {
      moved = false;
      for (const auto& mv : moves) {
        const double a = best.s1 + mv[0] * step, b = best.s2 + mv[1] * step;
        const double r = ratio(a, b, curve.point(a), curve.point(b));
        if (r > best.value) {
          best = {r, a, b};
          moved = true;
        }
      }
    }
  }
  return best;
}

double chord_arc_constant(const JordanCurve& curve, std::size_t pair_samples) {
  return chord_arc_search(curve, pair_samples).value;
}

double curve_besov_norm(const JordanCurve& curve, const CurveFunction& phi, const BesovParams& params) {
  params.validate();
  const std::size_t n = phi.size();
  for (const cplx& v : phi.samples())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error("invalid_argument", "non-finite samples");
  const double len = curve.length();
  const double h = len / static_cast<double>(n);
  const BoundaryFunction f = mod_constants_normalize(phi);

  const auto dphi = f.derivative_samples();
  std::vector<double> slope(n);
  for (std::size_t j = 0; j < n; ++j) slope[j] = std::abs(dphi[j]) * kTwoPi / len;
  std::vector<cplx> half;
  std::vector<cplx> zhalf;
  if (params.rule == QuadratureRule::MidpointOffset) {
    half = f.shifted_samples(kPi / static_cast<double>(n));
    zhalf = curve.uniform_points(n, 0.5 * h);
  }
  const auto z = curve.uniform_points(n);

  detail::BesovInput in{f.samples(), half, slope, len};
  const double s = detail::besov_integral(
      in, params, [&](std::size_t j, std::size_t k) { return std::abs(z[j] - z[(j + k) % n]); },
      [&](std::size_t j, std::size_t k) { return std::abs(z[j] - zhalf[(j + k) % n]); });
  return std::pow(s, 1.0 / params.p);
}

BishopTable bishop_diagnostic(const JordanCurve& curve, double s0, int n_max, BishopReading reading) {
  if (n_max < 1) throw Error("invalid_argument", "n_max must be at least 1");
  if (reading == BishopReading::PowerOfTwo && n_max > 62) throw Error("resolution", "level too large");
  BishopTable t;
  double sum = 0.0;
  const double len = curve.length();
  for (int n = 1; n <= n_max; ++n) {
    const std::size_t count = reading == BishopReading::PowerOfTwo ? (std::size_t{1} << n) : static_cast<std::size_t>(n);
    if (count > curve.resolution()) throw Error("resolution", "more points requested than the curve resolves");
    const auto pts = curve.uniform_points(count, s0);
    double inscribed = 0.0;
    if (count > 1)
      for (std::size_t k = 0; k < count; ++k) inscribed += std::abs(pts[(k + 1) % count] - pts[k]);
    const double term = std::ldexp(len - inscribed, n);
    sum += term;
    t.levels.push_back(n);
    t.points.push_back(count);
    t.terms.push_back(term);
    t.partial_sums.push_back(sum);
    t.base_points.push_back(s0);
  }
  return t;
}

BishopTable bishop_diagnostic_max(const JordanCurve& curve, std::span<const double> bases, int n_max,
                                  BishopReading reading) {
  if (bases.empty()) throw Error("invalid_argument", "no base points");
  BishopTable best = bishop_diagnostic(curve, bases[0], n_max, reading);
  for (std::size_t b = 1; b < bases.size(); ++b) {
    const BishopTable t = bishop_diagnostic(curve, bases[b], n_max, reading);
    for (std::size_t i = 0; i < t.terms.size(); ++i)
      if (t.terms[i] > best.terms[i]) {
        best.terms[i] = t.terms[i];
        best.base_points[i] = bases[b];
      }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < best.terms.size(); ++i) best.partial_sums[i] = (sum += best.terms[i]);
  return best;
}

}  // namespace qclab
