#include "qclab/harmonic_disk.hpp"

#include <algorithm>
#include <cmath>

#include "qclab/fft.hpp"
#include "qclab/quadrature.hpp"

namespace qclab {

namespace {

// Disk-side formulas for coefficients a_n; exterior fields are evaluated at 1/conj(z).
cplx disk_value(const BoundaryFunction& b, cplx z) {
  cplx pos{}, neg{};
  const cplx zc = std::conj(z);
  for (int n = b.max_mode(); n >= 0; --n) pos = pos * z + b.coefficient(n);
  for (int n = b.min_mode(); n <= -1; ++n) neg = (neg + b.coefficient(n)) * zc;
  return pos + neg;
}

cplx disk_dz(const BoundaryFunction& b, cplx z) {
  cplx acc{};
  for (int n = b.max_mode(); n >= 1; --n) acc = acc * z + static_cast<double>(n) * b.coefficient(n);
  return acc;
}

cplx disk_dzbar(const BoundaryFunction& b, cplx z) {
  cplx acc{};
  const cplx zc = std::conj(z);
  for (int n = -b.min_mode(); n >= 1; --n) acc = acc * zc + static_cast<double>(n) * b.coefficient(-n);
  return acc;
}

enum class Density { Gradient, Holomorphic, Antiholomorphic };

// Samples of dz and dzbar of the disk field on the circle |z| = r, M points.
void circle_derivatives(const BoundaryFunction& b, double r, std::size_t m, std::vector<cplx>& dz,
                        std::vector<cplx>& dzbar) {
  std::vector<cplx> x(m, cplx{}), y(m, cplx{});
  double rp = 1.0;
  for (int k = 1; k <= b.max_mode(); ++k) {
    // dz = sum_{k>=1} k a_k r^{k-1} e^{i(k-1)t}
    x[static_cast<std::size_t>(k - 1) % m] += static_cast<double>(k) * b.coefficient(k) * rp;
    rp *= r;
  }
  rp = 1.0;
  for (int k = 1; k <= -b.min_mode(); ++k) {
    // dzbar = sum_{k>=1} k a_{-k} r^{k-1} e^{-i(k-1)t}
    y[(m - static_cast<std::size_t>(k - 1) % m) % m] += static_cast<double>(k) * b.coefficient(-k) * rp;
    rp *= r;
  }
  dz = fft::backward(x);
  dzbar = fft::backward(y);
}

// int_0^{2 pi} density^p dt on |z| = r.
double angular_integral(const BoundaryFunction& b, double r, std::size_t m, double p, Density kind) {
  std::vector<cplx> dz, dzbar;
  circle_derivatives(b, r, m, dz, dzbar);
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double sq = 0.0;
    switch (kind) {
      case Density::Gradient: sq = 2.0 * (std::norm(dz[j]) + std::norm(dzbar[j])); break;
      case Density::Holomorphic: sq = std::norm(dz[j]); break;
      case Density::Antiholomorphic: sq = std::norm(dzbar[j]); break;
    }
    s += p == 2.0 ? sq : std::pow(sq, 0.5 * p);
  }
  return s * kTwoPi / static_cast<double>(m);
}

// int_D density^p rho^{2-p} dA written in u = r^2:
//   1/2 int_0^1 A(sqrt u) 2^{2-p} (1-u)^{p-2} du.
DirichletReport weighted_integral(const BoundaryFunction& b, const DirichletParams& params, Density kind) {
  params.validate();
  const double p = params.p;
  const int deg = b.degree();
  DirichletReport rep;
  if (deg == 0) return rep;

  std::size_t m = params.angular_nodes > 0 ? static_cast<std::size_t>(params.angular_nodes)
                                           : static_cast<std::size_t>(std::max(256, 8 * (deg + 1)));
  m = next_power_of_two(m);
  rep.angular_nodes = static_cast<int>(m);
  const double u0 = params.r_max * params.r_max;
  const double scale = 0.5 * std::pow(2.0, 2.0 - p);

  auto evaluate = [&](int n, double& bulk, double& tail) {
    bulk = tail = 0.0;
    quad::Rule gl = quad::gauss_legendre(static_cast<std::size_t>(n), 0.0, u0);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double u = gl.nodes[i];
      bulk += gl.weights[i] * angular_integral(b, std::sqrt(u), m, p, kind) * std::pow(1.0 - u, p - 2.0);
    }
    quad::Rule gj = quad::gauss_jacobi(static_cast<std::size_t>(n), u0, 1.0, p - 2.0);
    for (std::size_t i = 0; i < gj.nodes.size(); ++i)
      tail += gj.weights[i] * angular_integral(b, std::sqrt(gj.nodes[i]), m, p, kind);
    bulk *= scale;
    tail *= scale;
  };

  int n = params.radial_nodes > 0 ? params.radial_nodes : std::max(16, deg / 2 + 8);
  double bulk = 0.0, tail = 0.0;
  evaluate(n, bulk, tail);
  for (;;) {
    const int n2 = 2 * n;
    if (n2 > params.max_radial_nodes)
      throw Error("non_convergence", "radial quadrature did not settle within " +
                                         std::to_string(params.max_radial_nodes) + " nodes");
    double bulk2 = 0.0, tail2 = 0.0;
    evaluate(n2, bulk2, tail2);
    const double prev = bulk + tail, cur = bulk2 + tail2;
    rep.change = cur > 1e-300 ? std::abs(cur - prev) / cur : 0.0;
    bulk = bulk2;
    tail = tail2;
    n = n2;
    if (rep.change <= params.tol || cur < 1e-280) break;
  }
  rep.bulk = bulk;
  rep.tail = tail;
  rep.radial_nodes = n;
  rep.value = std::pow(std::max(bulk + tail, 0.0), 1.0 / p);
  return rep;
}

}  // namespace

cplx HarmonicField::operator()(cplx z) const {
  if (domain_ == Domain::Disk) return disk_value(boundary_, z);
  return disk_value(boundary_, 1.0 / std::conj(z));
}

cplx HarmonicField::dz(cplx z) const {
  if (domain_ == Domain::Disk) return disk_dz(boundary_, z);
  // Phi(z) = Psi(w), w = 1/conj(z): d/dz Phi = Psi_wbar * (-1/z^2).
  const cplx w = 1.0 / std::conj(z);
  return -disk_dzbar(boundary_, w) / (z * z);
}

cplx HarmonicField::dzbar(cplx z) const {
  if (domain_ == Domain::Disk) return disk_dzbar(boundary_, z);
  const cplx w = 1.0 / std::conj(z);
  const cplx zc = std::conj(z);
  return -disk_dz(boundary_, w) / (zc * zc);
}

double HarmonicField::grad_norm(cplx z) const {
  return std::sqrt(2.0 * (std::norm(dz(z)) + std::norm(dzbar(z))));
}

bool HarmonicField::is_holomorphic(double tol) const {
  for (int n = boundary_.min_mode(); n <= boundary_.max_mode(); ++n) {
    const bool wrong = domain_ == Domain::Disk ? n <= -1 : n >= 1;
    if (wrong && std::abs(boundary_.coefficient(n)) > tol) return false;
  }
  return true;
}

HarmonicField poisson_extend(const BoundaryFunction& phi, Domain domain) { return HarmonicField(domain, phi); }

BoundaryFunction trace(const HarmonicField& field) { return field.boundary(); }

void DirichletParams::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error("invalid_argument", "Dirichlet exponent must satisfy p > 1");
  if (!(r_max > 0.0 && r_max < 1.0)) throw Error("invalid_argument", "r_max must lie in (0, 1)");
  if (!(tol > 0.0)) throw Error("invalid_argument", "tolerance must be positive");
  if (radial_nodes < 0 || angular_nodes < 0) throw Error("invalid_argument", "node counts must be nonnegative");
}

DirichletReport dirichlet_norm_report(const HarmonicField& field, const DirichletParams& params) {
  // The exterior field with coefficients a_n is the reflection of the disk
  // field with the same coefficients, and the weighted energy is reflection
  // invariant.
  return weighted_integral(field.boundary(), params, Density::Gradient);
}

double dirichlet_norm(const HarmonicField& field, const DirichletParams& params) {
  return dirichlet_norm_report(field, params).value;
}

double analytic_besov_norm(const HarmonicField& field, const DirichletParams& params) {
  const auto& b = field.boundary();
  double peak = 0.0;
  for (const cplx& c : b.coefficients()) peak = std::max(peak, std::abs(c));
  if (!field.is_holomorphic(1e-12 * std::max(peak, 1.0)))
    throw Error("invalid_argument", "analytic Besov norm needs a holomorphic field");
  const Density kind = field.domain() == Domain::Disk ? Density::Holomorphic : Density::Antiholomorphic;
  return weighted_integral(b, params, kind).value;
}

double douglas_ratio(const BoundaryFunction& phi, double min_norm) {
  const double b = besov_norm(phi);
  if (b < min_norm) throw Error("invalid_argument", "boundary function is constant to tolerance");
  const double d = dirichlet_norm(poisson_extend(phi));
  return (d * d) / (b * b);
}

BoundaryFunction hilbert_transform(const BoundaryFunction& phi) {
  return phi.multiplied([](int n) { return n == 0 ? 0.0 : (n > 0 ? 1.0 : -1.0); });
}

HarmonicField szego_project(const BoundaryFunction& phi, Domain side) {
  if (side == Domain::Disk) return HarmonicField(side, phi.filtered([](int n) { return n >= 1; }));
  return HarmonicField(side, phi.filtered([](int n) { return n <= -1; }));
}

HoloAntiSplit holo_antiholo_split(const HarmonicField& field) {
  if (field.domain() != Domain::Disk) throw Error("invalid_argument", "split is defined for disk fields");
  const BoundaryFunction& b = field.boundary();
  HoloAntiSplit out;
  out.holomorphic = HarmonicField(Domain::Disk, b.filtered([](int n) { return n >= 1; }));
  out.antiholomorphic = HarmonicField(Domain::Disk, b.filtered([](int n) { return n <= -1; }));
  std::vector<std::pair<int, cplx>> modes;
  for (int n = 1; n <= -b.min_mode(); ++n) modes.emplace_back(n, b.coefficient(-n));
  out.reflected = HarmonicField(Domain::Disk, BoundaryFunction::from_modes(b.size(), modes));
  return out;
}

namespace {

// 4th-order one-sided radial derivative; the stencil points inward when it can.
cplx radial_derivative(const std::function<cplx(cplx)>& f, double r, double t, double h) {
  const cplx dir = std::polar(1.0, t);
  const double s = r > 5.0 * h ? -h : h;
  cplx v[5];
  for (int k = 0; k < 5; ++k) v[k] = f((r + k * s) * dir);
  return (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * s);
}

}  // namespace

DirichletSplit dirichlet_split(const std::function<cplx(cplx)>& psi, const SplitParams& params) {
  if (!(params.p > 1.0)) throw Error("invalid_argument", "Dirichlet exponent must satisfy p > 1");
  if (!(params.delta > 0.0 && params.delta < 0.5)) throw Error("invalid_argument", "delta must lie in (0, 1/2)");
  if (!(params.r_max > 0.0 && params.r_max < 1.0)) throw Error("invalid_argument", "r_max must lie in (0, 1)");
  if (params.remainder_radii < 2 || params.remainder_angles < 1)
    throw Error("invalid_argument", "remainder grid too small");
  const std::size_t n = params.boundary_points;
  const double d = params.delta;

  DirichletSplit out;
  std::vector<cplx> boundary(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx e = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    const cplx f1 = psi((1.0 - d) * e), f2 = psi((1.0 - 0.5 * d) * e), f4 = psi((1.0 - 0.25 * d) * e),
               f8 = psi((1.0 - 0.125 * d) * e);
    // Third-order Richardson extrapolation to r = 1, on two nested stencils.
    const cplx coarse = (8.0 * f4 - 6.0 * f2 + f1) / 3.0;
    const cplx third = (8.0 * f8 - 6.0 * f4 + f2) / 3.0;
    if (!std::isfinite(third.real()) || !std::isfinite(third.imag()))
      throw Error("trace_failure", "function is not finite near the boundary");
    out.settle_gap = std::max(out.settle_gap, std::abs(third - coarse));
    boundary[j] = third;
  }
  if (out.settle_gap > params.settle_tol)
    throw Error("trace_failure", "boundary values did not settle (gap " + std::to_string(out.settle_gap) + ")");
  out.harmonic = poisson_extend(BoundaryFunction::from_samples(std::move(boundary)));
  const HarmonicField& h = out.harmonic;

  const std::size_t nr = params.remainder_radii, na = params.remainder_angles;
  out.radii.resize(nr);
  out.angles.resize(na);
  for (std::size_t i = 0; i < nr; ++i) out.radii[i] = params.r_max * static_cast<double>(i) / static_cast<double>(nr - 1);
  for (std::size_t j = 0; j < na; ++j) out.angles[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(na);
  out.remainder.resize(nr * na);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const cplx z = std::polar(out.radii[i], out.angles[j]);
      out.remainder[i * na + j] = psi(z) - h(z);
    }
  for (std::size_t j = 0; j < na; ++j) out.trace_residual = std::max(out.trace_residual, std::abs(out.remainder[(nr - 1) * na + j]));

  DirichletParams dp;
  dp.p = params.p;
  out.harmonic_norm = dirichlet_norm(h, dp);

  // <grad H, grad R> = Re int 2 (dH conj(dR) + dbarH conj(dbarR)) dA with R = psi - H.
  const std::size_t m = 128;
  const double fd = 1e-3;
  quad::Rule gl = quad::gauss_legendre(64, 0.0, 1.0);
  double ip = 0.0, hh = 0.0, rr = 0.0;
  std::vector<cplx> ring(m);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double r = gl.nodes[i];
    for (std::size_t j = 0; j < m; ++j) ring[j] = psi(std::polar(r, kTwoPi * static_cast<double>(j) / static_cast<double>(m)));
    // Angular derivative of psi on the ring, spectrally.
    std::vector<cplx> c = fft::forward(ring);
    for (std::size_t k = 0; k < m; ++k) {
      const int q = fft::signed_index(k, m);
      c[k] *= (q == static_cast<int>(m / 2)) ? cplx{} : cplx(0.0, q) / static_cast<double>(m);
    }
    std::vector<cplx> dt = fft::backward(c);
    double ring_ip = 0.0, ring_hh = 0.0, ring_rr = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
      const cplx z = std::polar(r, t);
      const cplx dr = radial_derivative(psi, r, t, fd);
      const cplx e = std::polar(1.0, t);
      const cplx dpsi = 0.5 * std::conj(e) * (dr - cplx(0.0, 1.0 / r) * dt[j]);
      const cplx dbpsi = 0.5 * e * (dr + cplx(0.0, 1.0 / r) * dt[j]);
      const cplx dh = h.dz(z), dbh = h.dzbar(z);
      const cplx drm = dpsi - dh, dbrm = dbpsi - dbh;
      ring_ip += 2.0 * (dh * std::conj(drm) + dbh * std::conj(dbrm)).real();
      ring_hh += 2.0 * (std::norm(dh) + std::norm(dbh));
      ring_rr += 2.0 * (std::norm(drm) + std::norm(dbrm));
    }
    const double w = gl.weights[i] * r * kTwoPi / static_cast<double>(m);
    ip += w * ring_ip;
    hh += w * ring_hh;
    rr += w * ring_rr;
  }
  const double denom = std::sqrt(hh * rr);
  out.cross_term = denom > 1e-12 ? std::abs(ip) / denom : 0.0;
  return out;
}

}  // namespace qclab
