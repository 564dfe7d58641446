#include "qclab/circle_homeo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qclab/fft.hpp"
#include "qclab/quadrature.hpp"

namespace qclab {

// ---------------------------------------------------------------------------
// Disk automorphisms

cplx DiskAutomorphism::operator()(cplx z) const {
  return std::polar(1.0, alpha) * (z - b) / (1.0 - std::conj(b) * z);
}

double DiskAutomorphism::lift(double t) const {
  return alpha + t + 2.0 * std::arg(1.0 - b * std::polar(1.0, -t));
}

double DiskAutomorphism::lift_derivative(double t) const {
  return (1.0 - std::norm(b)) / std::norm(1.0 - std::conj(b) * std::polar(1.0, t));
}

DiskAutomorphism DiskAutomorphism::inverse() const {
  // z = e^{-i alpha} (w + b') / (1 + conj(b') w) with b' = e^{i alpha} b.
  DiskAutomorphism inv;
  inv.alpha = -alpha;
  inv.b = -std::polar(1.0, alpha) * b;
  return inv;
}

namespace {

using Mat2 = std::array<cplx, 4>;  // [a b; c d] acting as (a z + b) / (c z + d)

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

Mat2 inv(const Mat2& x) { return {x[3], -x[1], -x[2], x[0]}; }

// Sends q0, q1, q2 to 0, 1, infinity.
Mat2 cross_ratio(const std::array<cplx, 3>& q) {
  const cplx s = (q[1] - q[2]) / (q[1] - q[0]);
  return {s, -s * q[0], 1.0, -q[2]};
}

cplx mobius_apply(const Mat2& m, cplx z) { return (m[0] * z + m[1]) / (m[2] * z + m[3]); }

}  // namespace

DiskAutomorphism DiskAutomorphism::from_three_points(const std::array<cplx, 3>& w) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(w[i] - w[j]) < 1e-12) throw Error("invalid_argument", "three-point data must be distinct");
  const Mat2 t = mul(inv(cross_ratio(w)), cross_ratio({cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(0.0, -1.0)}));
  const cplx b = mobius_apply(inv(t), 0.0);
  if (!(std::abs(b) < 1.0))
    throw Error("invalid_argument", "three points are not in counterclockwise order on the circle");
  DiskAutomorphism out;
  out.b = b;
  out.alpha = std::arg(mobius_apply(t, 1.0) * (1.0 - std::conj(b)) / (1.0 - b));
  return out;
}

// ---------------------------------------------------------------------------
// Lift interpolation

namespace {

struct Loc {
  long k;      // period index
  std::size_t j;  // cell
  double s;    // fraction in [0, 1]
};

Loc locate(double t, std::size_t m) {
  const double h = kTwoPi / static_cast<double>(m);
  const double kk = std::floor(t / kTwoPi);
  double r = t - kk * kTwoPi;
  double c = std::floor(r / h);
  if (c < 0) c = 0;
  if (c > static_cast<double>(m - 1)) c = static_cast<double>(m - 1);
  double s = (r - c * h) / h;
  return {static_cast<long>(kk), static_cast<std::size_t>(c), std::clamp(s, 0.0, 1.0)};
}

double hermite(double y0, double y1, double d0, double d1, double h, double s) {
  const double s2 = s * s, s3 = s2 * s;
  return y0 * (2 * s3 - 3 * s2 + 1) + h * d0 * (s3 - 2 * s2 + s) + y1 * (-2 * s3 + 3 * s2) + h * d1 * (s3 - s2);
}

double hermite_deriv(double y0, double y1, double d0, double d1, double h, double s) {
  const double s2 = s * s;
  return (y0 * (6 * s2 - 6 * s) + y1 * (-6 * s2 + 6 * s)) / h + d0 * (3 * s2 - 4 * s + 1) + d1 * (3 * s2 - 2 * s);
}

// int_0^s of the Hermite cubic, in units of the parameter s (multiply by h).
double hermite_integral(double y0, double y1, double d0, double d1, double h, double s) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
  return y0 * (s4 / 2 - s3 + s) + h * d0 * (s4 / 4 - 2 * s3 / 3 + s2 / 2) + y1 * (-s4 / 2 + s3) +
         h * d1 * (s4 / 4 - s3 / 3);
}

}  // namespace

void CircleHomeomorphism::finish() {
  const std::size_t m = values_.size();
  if (m < 4) throw Error("invalid_argument", "lift needs at least four nodes");
  for (std::size_t j = 0; j < m; ++j) {
    const double next = j + 1 < m ? values_[j + 1] : values_[0] + kTwoPi;
    if (!std::isfinite(values_[j]) || !(next > values_[j]))
      throw Error("interpolation_failure", "lift samples are not strictly increasing at node " + std::to_string(j));
  }
  const double h = kTwoPi / static_cast<double>(m);
  cell_integrals_.assign(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double y1 = j + 1 < m ? values_[j + 1] : values_[0] + kTwoPi;
    const double d1 = slopes_[(j + 1) % m];
    cell_integrals_[j + 1] = cell_integrals_[j] + h * (0.5 * (values_[j] + y1) + h * (slopes_[j] - d1) / 12.0);
  }
}

CircleHomeomorphism CircleHomeomorphism::from_lift_samples(std::vector<double> eta) {
  const std::size_t m = eta.size();
  if (m < 4) throw Error("invalid_argument", "lift needs at least four nodes");
  const double h = kTwoPi / static_cast<double>(m);
  std::vector<double> secant(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double next = j + 1 < m ? eta[j + 1] : eta[0] + kTwoPi;
    secant[j] = (next - eta[j]) / h;
    if (!(secant[j] > 0.0))
      throw Error("interpolation_failure", "lift samples are not strictly increasing at node " + std::to_string(j));
  }
  std::vector<double> slopes(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double a = secant[(j + m - 1) % m], b = secant[j];
    slopes[j] = 2.0 * a * b / (a + b);
  }
  CircleHomeomorphism out;
  out.values_ = std::move(eta);
  out.slopes_ = std::move(slopes);
  out.finish();
  return out;
}

CircleHomeomorphism CircleHomeomorphism::from_lift_hermite(std::vector<double> eta, std::vector<double> slopes) {
  const std::size_t m = eta.size();
  if (m < 4 || slopes.size() != m) throw Error("invalid_argument", "lift values and slopes must match, M >= 4");
  const double h = kTwoPi / static_cast<double>(m);
  std::vector<double> secant(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double next = j + 1 < m ? eta[j + 1] : eta[0] + kTwoPi;
    secant[j] = (next - eta[j]) / h;
    if (!(secant[j] > 0.0))
      throw Error("interpolation_failure", "lift samples are not strictly increasing at node " + std::to_string(j));
  }
  // Fritsch-Carlson: alpha^2 + beta^2 <= 9 on every cell keeps the cubic monotone.
  for (auto& d : slopes) d = std::max(d, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t j1 = (j + 1) % m;
    const double a = slopes[j] / secant[j], b = slopes[j1] / secant[j];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      slopes[j] = tau * a * secant[j];
      slopes[j1] = tau * b * secant[j];
    }
  }
  CircleHomeomorphism out;
  out.values_ = std::move(eta);
  out.slopes_ = std::move(slopes);
  out.finish();
  return out;
}

CircleHomeomorphism CircleHomeomorphism::from_lift_function(std::size_t m, const std::function<double(double)>& eta,
                                                            const std::function<double(double)>& deta) {
  std::vector<double> v(m), d(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    v[j] = eta(t);
    d[j] = deta(t);
  }
  return from_lift_hermite(std::move(v), std::move(d));
}

CircleHomeomorphism CircleHomeomorphism::identity(std::size_t m) {
  auto out = rotation(0.0, m);
  out.normalized_ = true;
  return out;
}

CircleHomeomorphism CircleHomeomorphism::rotation(double angle, std::size_t m) {
  return from_lift_function(m, [angle](double t) { return t + angle; }, [](double) { return 1.0; });
}

CircleHomeomorphism CircleHomeomorphism::mobius(cplx a, std::size_t m) {
  if (!(std::abs(a) < 1.0)) throw Error("invalid_argument", "Mobius parameter must satisfy |a| < 1");
  DiskAutomorphism t;
  t.b = -a;
  return automorphism(t, m);
}

CircleHomeomorphism CircleHomeomorphism::automorphism(const DiskAutomorphism& t, std::size_t m) {
  return from_lift_function(m, [&](double s) { return t.lift(s); }, [&](double s) { return t.lift_derivative(s); });
}

CircleHomeomorphism CircleHomeomorphism::flat(double beta, std::size_t m) {
  if (!(beta > 0.0)) throw Error("invalid_argument", "flatness parameter must be positive");
  // exp(-beta / t) on (0, 2 pi): flat to all orders from the right of t = 0,
  // with a finite left derivative.
  auto density = [beta](double t) {
    const double r = wrap_angle(t);
    return (r > 0.0 ? std::exp(-beta / r) : 0.0) + 1e-10;
  };
  const double h = kTwoPi / static_cast<double>(m);
  const quad::Rule gl = quad::gauss_legendre(16, 0.0, h);
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) s += gl.weights[q] * density(j * h + gl.nodes[q]);
    cum[j + 1] = cum[j] + s;
  }
  const double scale = kTwoPi / cum[m];
  std::vector<double> v(m), d(m);
  for (std::size_t j = 0; j < m; ++j) {
    v[j] = scale * cum[j];
    d[j] = scale * density(j * h);
  }
  return from_lift_hermite(std::move(v), std::move(d));
}

double CircleHomeomorphism::lift(double t) const {
  const std::size_t m = size();
  const Loc l = locate(t, m);
  const double h = kTwoPi / static_cast<double>(m);
  const double y1 = l.j + 1 < m ? values_[l.j + 1] : values_[0] + kTwoPi;
  return hermite(values_[l.j], y1, slopes_[l.j], slopes_[(l.j + 1) % m], h, l.s) + kTwoPi * static_cast<double>(l.k);
}

double CircleHomeomorphism::derivative(double t) const {
  const std::size_t m = size();
  const Loc l = locate(t, m);
  const double h = kTwoPi / static_cast<double>(m);
  const double y1 = l.j + 1 < m ? values_[l.j + 1] : values_[0] + kTwoPi;
  return hermite_deriv(values_[l.j], y1, slopes_[l.j], slopes_[(l.j + 1) % m], h, l.s);
}

double CircleHomeomorphism::antiderivative(double t) const {
  const std::size_t m = size();
  const Loc l = locate(t, m);
  const double h = kTwoPi / static_cast<double>(m);
  const double y1 = l.j + 1 < m ? values_[l.j + 1] : values_[0] + kTwoPi;
  const double s0 = l.j * h + l.s * h;
  const double a0 =
      cell_integrals_[l.j] + h * hermite_integral(values_[l.j], y1, slopes_[l.j], slopes_[(l.j + 1) % m], h, l.s);
  const double k = static_cast<double>(l.k);
  // int_0^{s0 + 2 pi k} eta = A(s0) + k I + 2 pi k s0 + 4 pi^2 k (k - 1) / 2.
  return a0 + k * cell_integrals_[m] + kTwoPi * k * s0 + 2.0 * kPi * kPi * k * (k - 1.0);
}

double CircleHomeomorphism::inverse_lift(double y) const {
  const std::size_t m = size();
  const double h = kTwoPi / static_cast<double>(m);
  const double kk = std::floor((y - values_[0]) / kTwoPi);
  const double r = y - kk * kTwoPi;  // in [values_[0], values_[0] + 2 pi)
  auto it = std::upper_bound(values_.begin(), values_.end(), r);
  std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - values_.begin()) - 1));
  const double y0 = values_[j];
  const double y1 = j + 1 < m ? values_[j + 1] : values_[0] + kTwoPi;
  const double d0 = slopes_[j], d1 = slopes_[(j + 1) % m];
  double lo = 0.0, hi = 1.0;
  double s = std::clamp((r - y0) / (y1 - y0), 0.0, 1.0);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = hermite(y0, y1, d0, d1, h, s) - r;
    if (f > 0) hi = s; else lo = s;
    if (std::abs(f) <= 4e-16 * (std::abs(r) + 1.0) || hi - lo < 1e-16) break;
    const double df = hermite_deriv(y0, y1, d0, d1, h, s) * h;
    double next = df > 0 ? s - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    s = next;
  }
  return static_cast<double>(j) * h + s * h + kk * kTwoPi;
}

CircleHomeomorphism CircleHomeomorphism::inverse() const {
  const std::size_t m = size();
  std::vector<double> v(m), d(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double y = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    v[j] = inverse_lift(y);
    d[j] = 1.0 / std::max(derivative(v[j]), 1e-300);
  }
  // Keep the inverse lift within one period of the identity near 0.
  const double shift = kTwoPi * std::floor((v[0] + kPi) / kTwoPi);
  for (auto& x : v) x -= shift;
  auto out = from_lift_hermite(std::move(v), std::move(d));
  out.normalized_ = normalized_;
  return out;
}

CircleHomeomorphism CircleHomeomorphism::compose(const CircleHomeomorphism& other) const {
  const std::size_t m = other.size();
  std::vector<double> v(m), d(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    const double u = other.lift(t);
    v[j] = lift(u);
    d[j] = derivative(u) * other.derivative(t);
  }
  auto out = from_lift_hermite(std::move(v), std::move(d));
  out.normalized_ = normalized_ && other.normalized_;
  return out;
}

CircleHomeomorphism CircleHomeomorphism::normalize_three_points() const {
  std::array<cplx, 3> pre;
  const double targets[3] = {0.0, kPi / 2.0, -kPi / 2.0};
  for (int i = 0; i < 3; ++i) pre[i] = std::polar(1.0, inverse_lift(targets[i]));
  const DiskAutomorphism mob = DiskAutomorphism::from_three_points(pre);
  const std::size_t m = size();
  std::vector<double> v(m), d(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    const double u = mob.lift(t);
    v[j] = lift(u);
    d[j] = derivative(u) * mob.lift_derivative(t);
  }
  const double shift = kTwoPi * std::round(v[0] / kTwoPi);
  for (auto& x : v) x -= shift;
  auto out = from_lift_hermite(std::move(v), std::move(d));
  out.normalized_ = true;
  return out;
}

double CircleHomeomorphism::normalization_error() const {
  double e = 0.0;
  for (cplx w : {cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(0.0, -1.0)}) e = std::max(e, std::abs((*this)(w) - w));
  return e;
}

// ---------------------------------------------------------------------------
// Quasisymmetry and the Beurling-Ahlfors extension

QsReport qs_constant(const CircleHomeomorphism& h, const QsParams& params) {
  const std::size_t m = h.size();
  const double cell = kTwoPi / static_cast<double>(m);
  std::vector<double> scales = params.scales;
  if (scales.empty()) {
    const double lo = 2.0 * cell, hi = kPi / 2.0;
    const int count = 16;
    for (int i = 0; i < count; ++i) scales.push_back(lo * std::pow(hi / lo, i / double(count - 1)));
  }
  QsReport rep;
  rep.scale_floor = *std::min_element(scales.begin(), scales.end());
  for (double t : scales) {
    if (!(t > 0.0 && t < kPi)) throw Error("invalid_argument", "scales must lie in (0, pi)");
    if (t < cell * (1.0 - 1e-12)) throw Error("degenerate_spacing", "scale below the lift node spacing");
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double x = cell * static_cast<double>(j);
    const double c = h.node_values()[j];
    for (double t : scales) {
      const double r = (h.lift(x + t) - c) / (c - h.lift(x - t));
      rep.qs_constant = std::max(rep.qs_constant, std::max(r, 1.0 / r));
    }
  }
  rep.exceeds_cap = rep.qs_constant > params.cap;
  if (params.with_extension) {
    try {
      ExtensionParams ep;
      ep.cap = params.cap;
      rep.max_dilatation = beurling_ahlfors_extension(h, ep).max_dilatation;
    } catch (const Error&) {
      rep.max_dilatation = std::numeric_limits<double>::infinity();
    }
  }
  return rep;
}

BeurlingAhlfors::Jet BeurlingAhlfors::half_plane(double x, double y) const {
  const CircleHomeomorphism& h = *h_;
  const double ax = h.antiderivative(x);
  const double alpha = (h.antiderivative(x + y) - ax) / y;
  const double beta = (ax - h.antiderivative(x - y)) / y;
  const double ep = h.lift(x + y), e0 = h.lift(x), em = h.lift(x - y);
  const double ax_ = (ep - e0) / y, ay_ = (ep - alpha) / y;
  const double bx_ = (e0 - em) / y, by_ = (em - beta) / y;
  const cplx fx(0.5 * (ax_ + bx_), ax_ - bx_);
  const cplx fy(0.5 * (ay_ + by_), ay_ - by_);
  Jet jet;
  jet.value = cplx(0.5 * (alpha + beta), alpha - beta);
  jet.fz = 0.5 * (fx - cplx(0.0, 1.0) * fy);
  jet.fzbar = 0.5 * (fx + cplx(0.0, 1.0) * fy);
  return jet;
}

cplx BeurlingAhlfors::operator()(cplx z) const {
  const double r = std::abs(z);
  if (!(r > 0.0 && r < 1.0)) throw Error("invalid_argument", "extension is evaluated for 0 < |z| < 1");
  return std::exp(cplx(0.0, 1.0) * half_plane(std::arg(z), -std::log(r)).value);
}

cplx BeurlingAhlfors::dilatation(cplx z) const {
  const double r = std::abs(z);
  if (!(r > 0.0 && r < 1.0)) throw Error("invalid_argument", "extension is evaluated for 0 < |z| < 1");
  return half_plane(std::arg(z), -std::log(r)).mu();
}

ExtensionGrid beurling_ahlfors_extension(const CircleHomeomorphism& h, const ExtensionParams& params) {
  if (params.nx < 1 || params.ny < 2) throw Error("invalid_argument", "extension grid too small");
  const double cell = kTwoPi / static_cast<double>(h.size());
  const double y0 = params.y_min_cells * cell;
  if (!(params.y_max > y0)) throw Error("invalid_argument", "extension height range is empty");
  BeurlingAhlfors ba(h);
  ExtensionGrid g;
  g.xs.resize(params.nx);
  g.ys.resize(params.ny);
  for (std::size_t i = 0; i < params.nx; ++i) g.xs[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(params.nx);
  for (std::size_t k = 0; k < params.ny; ++k)
    g.ys[k] = y0 * std::pow(params.y_max / y0, static_cast<double>(k) / static_cast<double>(params.ny - 1));
  g.image.resize(params.nx * params.ny);
  g.mu.resize(params.nx * params.ny);
  for (std::size_t k = 0; k < params.ny; ++k)
    for (std::size_t i = 0; i < params.nx; ++i) {
      const auto jet = ba.half_plane(g.xs[i], g.ys[k]);
      const double jac = std::norm(jet.fz) - std::norm(jet.fzbar);
      if (!(jac > 0.0)) throw Error("not_quasisymmetric", "extension Jacobian is not positive");
      const cplx mu = jet.mu();
      const double kd = (1.0 + std::abs(mu)) / (1.0 - std::abs(mu));
      if (!(kd <= params.cap)) throw Error("not_quasisymmetric", "extension dilatation exceeds the cap");
      g.max_dilatation = std::max(g.max_dilatation, kd);
      g.image[k * params.nx + i] = std::exp(cplx(0.0, 1.0) * jet.value);
      g.mu[k * params.nx + i] = mu;
    }
  return g;
}

// ---------------------------------------------------------------------------
// Composition operator

namespace {

// Trig polynomial restricted to |n| <= deg.
cplx eval_band(const BoundaryFunction& f, int deg, double t) {
  const cplx w = std::polar(1.0, t);
  cplx pos{}, neg{};
  for (int n = deg; n >= 0; --n) pos = pos * w + f.coefficient(n);
  const cplx wc = std::conj(w);
  for (int n = -deg; n <= -1; ++n) neg = (neg + f.coefficient(n)) * wc;
  return pos + neg;
}

}  // namespace

BoundaryFunction compose_operator(const CircleHomeomorphism& h, const BoundaryFunction& phi) {
  const std::size_t n = phi.size();
  const std::size_t m = 4 * n;
  const int deg = phi.degree(1e-15);
  std::vector<cplx> v(m);
  for (std::size_t j = 0; j < m; ++j) v[j] = eval_band(phi, deg, h.lift(kTwoPi * static_cast<double>(j) / static_cast<double>(m)));
  std::vector<cplx> x = fft::forward(v);
  std::vector<cplx> c(n);
  const int lo = -static_cast<int>(n / 2) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = lo + static_cast<int>(i);
    c[i] = x[static_cast<std::size_t>((k + static_cast<int>(m)) % static_cast<int>(m))] / static_cast<double>(m);
  }
  return BoundaryFunction::from_coefficients(std::move(c));
}

NormEstimate operator_norm_estimate(const CircleHomeomorphism& h, const NormEstimateParams& params) {
  if (!(params.p > 1.0)) throw Error("invalid_argument", "exponent must satisfy p > 1");
  if (params.degree < 1 || static_cast<std::size_t>(2 * params.degree) >= params.grid)
    throw Error("invalid_argument", "degree must be positive and below half the grid");
  BesovParams bp;
  bp.p = params.p;
  const int deg = params.degree;
  const std::size_t dim = 4 * static_cast<std::size_t>(deg);  // re/im of modes -deg..-1, 1..deg

  auto build = [&](const std::vector<double>& x) {
    std::vector<std::pair<int, cplx>> modes;
    modes.reserve(2 * deg);
    for (int i = 0; i < 2 * deg; ++i) {
      const int n = i < deg ? i - deg : i - deg + 1;
      modes.emplace_back(n, cplx(x[2 * i], x[2 * i + 1]));
    }
    return BoundaryFunction::from_modes(params.grid, modes);
  };
  auto ratio = [&](const std::vector<double>& x) {
    const BoundaryFunction f = build(x);
    const double den = besov_norm(f, bp);
    if (den <= 0.0) return 0.0;
    return besov_norm(compose_operator(h, f), bp) / den;
  };

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> best_x;
  double best = -1.0;
  for (std::size_t e = 0; e < std::max<std::size_t>(1, params.ensemble_size); ++e) {
    std::vector<double> x(dim);
    for (int i = 0; i < 2 * deg; ++i) {
      const int n = i < deg ? i - deg : i - deg + 1;
      const double s = 1.0 / std::sqrt(2.0 * std::abs(n));
      x[2 * i] = s * g(rng);
      x[2 * i + 1] = s * g(rng);
    }
    const double r = ratio(x);
    if (r > best) {
      best = r;
      best_x = std::move(x);
    }
  }
  NormEstimate out;
  out.ensemble_best = best;

  double rms = 0.0;
  for (double v : best_x) rms += v * v;
  double step = 0.25 * std::sqrt(rms / static_cast<double>(dim));
  for (std::size_t sweep = 0; sweep < params.ascent_steps; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < dim; ++i) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> x = best_x;
        x[i] += sign * step;
        const double r = ratio(x);
        if (r > best) {
          best = r;
          best_x = std::move(x);
          improved = true;
          break;
        }
      }
    }
    step *= improved ? 1.5 : 0.5;
  }
  out.estimate = best;
  out.maximizer = build(best_x);
  return out;
}

std::vector<std::vector<double>> strong_convergence_probe(const std::vector<CircleHomeomorphism>& h_seq,
                                                          const CircleHomeomorphism& h_lim,
                                                          const std::vector<BoundaryFunction>& phis, double p) {
  BesovParams bp;
  bp.p = p;
  bp.validate();
  std::vector<BoundaryFunction> limit;
  limit.reserve(phis.size());
  for (const auto& phi : phis) limit.push_back(compose_operator(h_lim, phi));
  std::vector<std::vector<double>> table;
  table.reserve(h_seq.size());
  for (const auto& hn : h_seq) {
    std::vector<double> row;
    row.reserve(phis.size());
    for (std::size_t k = 0; k < phis.size(); ++k) row.push_back(besov_norm(compose_operator(hn, phis[k]) - limit[k], bp));
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace qclab
