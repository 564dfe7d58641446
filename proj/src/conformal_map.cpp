#include "qclab/conformal_map.hpp"

#include <algorithm>
#include <cmath>

#include "qclab/fft.hpp"

namespace qclab {
namespace {

// Conjugate function: multiplier -i sgn(n), constant dropped.
std::vector<cplx> conjugate(const std::vector<cplx>& v) {
  const std::size_t n = v.size();
  auto c = fft::forward(v);
  for (std::size_t k = 0; k < n; ++k) {
    const int m = fft::signed_index(k, n);
    if (m == 0 || 2 * static_cast<std::size_t>(std::abs(m)) == n) c[k] = 0.0;
    else c[k] *= cplx(0.0, m > 0 ? -1.0 : 1.0) / static_cast<double>(n);
  }
  return fft::backward(c);
}

struct Solve {
  std::vector<double> theta;
  std::vector<cplx> log_series;
  std::vector<double> residuals;
};

Solve theodorsen(const JordanCurve& curve, const TheodorsenParams& params) {
  const std::size_t n = params.nodes;
  if (n < 8 || !is_power_of_two(n)) throw Error("invalid_argument", "node count must be a power of two >= 8");
  const BoundaryFunction& g = curve.log_radius();
  const auto dg = g.resampled(4 * std::max(n, g.size())).derivative_samples();
  double slope = 0.0;
  for (const cplx& d : dg) slope = std::max(slope, std::abs(d.real()));
  if (slope > params.max_slope) throw Error("not_near_circular", "sup |g'| exceeds the near-circularity threshold");

  auto log_rho = [&](double th) { return std::log(std::abs(curve.polar_point(th))); };
  Solve s;
  s.theta.resize(n);
  for (std::size_t j = 0; j < n; ++j) s.theta[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
  std::vector<cplx> v(n);
  bool converged = false;
  for (int it = 0; it < params.max_iter; ++it) {
    for (std::size_t j = 0; j < n; ++j) v[j] = log_rho(s.theta[j]);
    const auto u = conjugate(v);
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double next = kTwoPi * static_cast<double>(j) / static_cast<double>(n) + u[j].real();
      change = std::max(change, std::abs(next - s.theta[j]));
      s.theta[j] = next;
    }
    s.residuals.push_back(change);
    if (change <= params.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error("non_convergence", "Theodorsen iteration did not reach the tolerance");

  // log(F(w)/w) = c_0 + sum_{n>=1} c_n w^n with c_0 = mean, c_n = 2 a_n.
  for (std::size_t j = 0; j < n; ++j) v[j] = log_rho(s.theta[j]);
  const auto a = fft::forward(v);
  s.log_series.resize(n / 2);
  s.log_series[0] = a[0].real() / static_cast<double>(n);
  for (std::size_t k = 1; k < n / 2; ++k) s.log_series[k] = 2.0 * a[k] / static_cast<double>(n);
  return s;
}

cplx series_eval(const std::vector<cplx>& c, cplx w) {
  cplx acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * w + c[k];
  return acc;
}

}  // namespace

double RiemannMap::raw_angle(double s) const { return s + u_(s).real(); }

double RiemannMap::raw_inverse(double theta) const {
  double umin = 0.0, umax = 0.0;
  for (const cplx& x : u_.samples()) {
    umin = std::min(umin, x.real());
    umax = std::max(umax, x.real());
  }
  double lo = theta - umax - 0.1, hi = theta - umin + 0.1;
  double s = theta - u_(theta).real();
  for (int it = 0; it < 100; ++it) {
    const double f = raw_angle(s) - theta;
    if (f > 0) hi = s; else lo = s;
    if (std::abs(f) < 1e-15 * std::max(1.0, std::abs(theta))) break;
    double next = s - f / (1.0 + du_(s).real());
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s) break;
    s = next;
  }
  return s;
}

double RiemannMap::angle(double t) const { return raw_angle(pre_.lift(t)); }

double RiemannMap::angle_derivative(double t) const {
  return (1.0 + du_(pre_.lift(t)).real()) * pre_.lift_derivative(t);
}

double RiemannMap::inverse_angle(double theta) const {
  const double sigma = raw_inverse(theta);
  const double tau = pre_.inverse().lift(sigma);
  const double k = std::round((pre_.lift(tau) - sigma) / kTwoPi);
  return tau - kTwoPi * k;
}

cplx RiemannMap::operator()(cplx z) const {
  const cplx w = pre_(z);
  if (side_ == Domain::Disk) {
    if (std::abs(w) > 1.0 + 1e-12) throw Error("invalid_argument", "interior map evaluated outside the disk");
    return w * std::exp(series_eval(log_series_, w));
  }
  if (std::abs(w) < 1.0 - 1e-12) throw Error("invalid_argument", "exterior map evaluated inside the disk");
  return w * std::exp(-std::conj(series_eval(log_series_, 1.0 / std::conj(w))));
}

CircleHomeomorphism RiemannMap::correspondence(std::size_t m) const {
  std::vector<double> values(m), slopes(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    values[j] = angle(t);
    slopes[j] = angle_derivative(t);
  }
  const double shift = kTwoPi * std::floor(values[0] / kTwoPi + 0.5);
  for (double& v : values) v -= shift;
  return CircleHomeomorphism::from_lift_hermite(std::move(values), std::move(slopes));
}

RiemannMap RiemannMap::precomposed(const DiskAutomorphism& m) const {
  RiemannMap out = *this;
  // (pre o m)(z) = e^{i a}(m(z) - b)/(1 - conj(b) m(z)), again an automorphism.
  const cplx z0 = m.inverse()(pre_.inverse()(0.0));  // sent to 0
  const cplx one = pre_(m(1.0));
  DiskAutomorphism c;
  c.b = z0;
  const cplx base = (1.0 - z0) / (1.0 - std::conj(z0));
  c.alpha = std::arg(one / base);
  out.pre_ = c;
  return out;
}

RiemannMap interior_map(const JordanCurve& curve, const TheodorsenParams& params) {
  if (curve.kind() != CurveKind::PolarGraph) throw Error("invalid_argument", "Riemann maps need a polar graph");
  Solve s = theodorsen(curve, params);
  RiemannMap f;
  f.side_ = Domain::Disk;
  f.curve_ = curve;
  std::vector<cplx> u(s.theta.size());
  for (std::size_t j = 0; j < u.size(); ++j)
    u[j] = s.theta[j] - kTwoPi * static_cast<double>(j) / static_cast<double>(u.size());
  f.u_ = BoundaryFunction::from_samples(std::move(u));
  f.du_ = BoundaryFunction::from_samples(f.u_.derivative_samples());
  f.log_series_ = std::move(s.log_series);
  f.residuals_ = std::move(s.residuals);
  return f;
}

RiemannMap exterior_map(const JordanCurve& curve, const TheodorsenParams& params) {
  if (curve.kind() != CurveKind::PolarGraph) throw Error("invalid_argument", "Riemann maps need a polar graph");
  const JordanCurve inverted = JordanCurve::polar(cplx(-1.0) * curve.log_radius(), 64);
  RiemannMap f = interior_map(inverted, params);
  f.side_ = Domain::ExteriorDisk;
  f.curve_ = curve;
  return f;
}

std::array<cplx, 3> default_anchors(const JordanCurve& curve) {
  return {curve.polar_point(0.0), curve.polar_point(0.5 * kPi), curve.polar_point(1.5 * kPi)};
}

ConformalPair conformal_pair(const JordanCurve& curve, const TheodorsenParams& params) {
  return ConformalPair{interior_map(curve, params), exterior_map(curve, params), {}, false};
}

ConformalPair normalize_three_points(const ConformalPair& pair, const std::array<cplx, 3>& anchors) {
  const JordanCurve& curve = pair.interior.curve();
  std::array<double, 3> psi{};
  for (int k = 0; k < 3; ++k) {
    psi[k] = std::arg(anchors[k]);
    if (std::abs(anchors[k] - curve.polar_point(psi[k])) > 1e-8 * std::abs(anchors[k]))
      throw Error("invalid_argument", "anchor is not on the curve");
  }
  auto fix = [&](const RiemannMap& f) {
    std::array<cplx, 3> w{};
    for (int k = 0; k < 3; ++k) w[k] = std::polar(1.0, f.inverse_angle(psi[k]));
    for (int a = 0; a < 3; ++a)
      if (std::abs(w[a] - w[(a + 1) % 3]) < 1e-10) throw Error("anchor_collision", "anchor preimages coincide");
    return f.precomposed(DiskAutomorphism::from_three_points(w));
  };
  ConformalPair out{fix(pair.interior), fix(pair.exterior), anchors, true};
  return out;
}

ConformalPair normalize_three_points(const ConformalPair& pair) {
  return normalize_three_points(pair, default_anchors(pair.interior.curve()));
}

CircleHomeomorphism welding(const ConformalPair& pair, std::size_t m) {
  if (!pair.normalized) throw Error("invalid_argument", "welding needs a normalized pair");
  std::vector<double> values(m), slopes(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    const double theta = pair.exterior.angle(t);
    values[j] = pair.interior.inverse_angle(theta);
    slopes[j] = pair.exterior.angle_derivative(t) / pair.interior.angle_derivative(values[j]);
  }
  const double shift = kTwoPi * std::floor(values[0] / kTwoPi + 0.5);
  for (double& v : values) v -= shift;
  for (std::size_t j = 0; j < m; ++j) {
    const double next = j + 1 < m ? values[j + 1] : values[0] + kTwoPi;
    if (!(next > values[j]) || !(slopes[j] > 0.0)) throw Error("mapping_error", "welding lift is not increasing");
  }
  return CircleHomeomorphism::from_lift_hermite(std::move(values), std::move(slopes));
}

HarmonicField transmit(const ConformalPair& pair, const HarmonicField& disk_field, const CircleHomeomorphism& weld) {
  if (!pair.normalized) throw Error("invalid_argument", "transmission needs a normalized pair");
  if (disk_field.domain() != Domain::Disk) throw Error("invalid_argument", "transmit expects a field on the disk");
  return poisson_extend(compose_operator(weld, trace(disk_field)), Domain::ExteriorDisk);
}

HarmonicField transmit(const ConformalPair& pair, const HarmonicField& disk_field) {
  return transmit(pair, disk_field, welding(pair));
}

HarmonicField reverse_transmit(const ConformalPair& pair, const HarmonicField& exterior_field,
                               const CircleHomeomorphism& weld) {
  if (!pair.normalized) throw Error("invalid_argument", "transmission needs a normalized pair");
  if (exterior_field.domain() != Domain::ExteriorDisk)
    throw Error("invalid_argument", "reverse transmission expects an exterior field");
  return poisson_extend(compose_operator(weld.inverse(), trace(exterior_field)), Domain::Disk);
}

HarmonicField reverse_transmit(const ConformalPair& pair, const HarmonicField& exterior_field) {
  return reverse_transmit(pair, exterior_field, welding(pair));
}

TransmissionEstimate transmission_norm_estimate(const ConformalPair& pair, const NormEstimateParams& params,
                                                std::size_t weld_nodes) {
  const CircleHomeomorphism h = welding(pair, weld_nodes);
  TransmissionEstimate out;
  out.detail = operator_norm_estimate(h, params);
  out.estimate = out.detail.estimate;
  out.dilatation_bound = beurling_ahlfors_extension(h).max_dilatation;
  return out;
}

}  // namespace qclab
