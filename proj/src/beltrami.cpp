#include "qclab/beltrami.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include <gsl/gsl_sf_bessel.h>

#include "qclab/fft.hpp"

namespace qclab {
namespace {

// C-infinity bump on (0, 1) with peak 1 at 1/2.
double bump01(double s) {
  if (!(s > 0.0 && s < 1.0)) return 0.0;
  return std::exp(4.0 - 1.0 / (s * (1.0 - s)));
}

// Smooth step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x) {
  auto phi = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
  const double a = phi(x), b = phi(1.0 - x);
  return a + b > 0.0 ? a / (a + b) : 0.0;
}

// Six-point Lagrange interpolation of lattice data at an arbitrary point.
cplx interpolate(const std::vector<cplx>& data, const Lattice& lat, cplx z) {
  const double h = lat.spacing();
  const double x = (z.real() + lat.half_width) / h, y = (z.imag() + lat.half_width) / h;
  const long n = static_cast<long>(lat.n);
  const long i0 = std::clamp(static_cast<long>(std::floor(x)) - 2, 0L, n - 6);
  const long j0 = std::clamp(static_cast<long>(std::floor(y)) - 2, 0L, n - 6);
  double wx[6], wy[6];
  for (int k = 0; k < 6; ++k) {
    wx[k] = wy[k] = 1.0;
    for (int m = 0; m < 6; ++m) {
      if (m == k) continue;
      wx[k] *= (x - static_cast<double>(i0 + m)) / static_cast<double>(k - m);
      wy[k] *= (y - static_cast<double>(j0 + m)) / static_cast<double>(k - m);
    }
  }
  cplx acc = 0.0;
  for (int b = 0; b < 6; ++b) {
    cplx row = 0.0;
    const std::size_t base = static_cast<std::size_t>(j0 + b) * lat.n + static_cast<std::size_t>(i0);
    for (int a = 0; a < 6; ++a) row += wx[a] * data[base + static_cast<std::size_t>(a)];
    acc += wy[b] * row;
  }
  return acc;
}

// Fourier symbols of the Cauchy and Beurling kernels truncated at radius R,
// turned into aperiodic-convolution symbols on a 2n x 2n padded lattice.
//   Cauchy:   -2i (1 - J0(|zeta| R)) / zeta
//   Beurling: conj(zeta)/zeta (1 - J0(|zeta| R))
// The real-space kernels come from a 3n x 3n inverse transform, enough to
// keep periodic images away from every offset inside the window.
struct Kernels {
  std::vector<cplx> cauchy, beurling;
};

const Kernels& kernels(const Lattice& lat) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, double>, std::unique_ptr<Kernels>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(lat.n, lat.half_width);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  const std::size_t n = lat.n, p = 3 * n, q = 2 * n;
  const double h = lat.spacing();
  const double radius = 2.0 * std::sqrt(2.0) * lat.half_width;
  const double dxi = kTwoPi / (static_cast<double>(p) * h);
  std::vector<double> damp(p * p);
  std::vector<cplx> zeta(p * p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < p; ++i) {
      const int si = fft::signed_index(i, p), sj = fft::signed_index(j, p);
      const cplx z(dxi * si, dxi * sj);
      const bool nyquist = 2 * static_cast<std::size_t>(std::abs(si)) == p || 2 * static_cast<std::size_t>(std::abs(sj)) == p;
      zeta[j * p + i] = nyquist ? 0.0 : z;
      damp[j * p + i] = nyquist ? 0.0 : 1.0 - gsl_sf_bessel_J0(std::abs(z) * radius);
    }

  auto build = [&](auto symbol) {
    std::vector<cplx> k(p * p);
    for (std::size_t t = 0; t < p * p; ++t) k[t] = zeta[t] == 0.0 ? cplx(0.0) : symbol(zeta[t]) * damp[t];
    fft::backward_2d(k, p);
    std::vector<cplx> pad(q * q, 0.0);
    const long ln = static_cast<long>(n);
    for (long my = -ln + 1; my < ln; ++my)
      for (long mx = -ln + 1; mx < ln; ++mx) {
        const std::size_t src = static_cast<std::size_t>((my + static_cast<long>(p)) % static_cast<long>(p)) * p +
                                static_cast<std::size_t>((mx + static_cast<long>(p)) % static_cast<long>(p));
        const std::size_t dst = static_cast<std::size_t>((my + static_cast<long>(q)) % static_cast<long>(q)) * q +
                                static_cast<std::size_t>((mx + static_cast<long>(q)) % static_cast<long>(q));
        pad[dst] = k[src] / static_cast<double>(p * p);
      }
    fft::forward_2d(pad, q);
    return pad;
  };
  auto out = std::make_unique<Kernels>();
  out->cauchy = build([](cplx z) { return cplx(0.0, -2.0) / z; });
  out->beurling = build([](cplx z) { return std::conj(z) / z; });
  return *cache.emplace(key, std::move(out)).first->second;
}

std::vector<cplx> convolve(const std::vector<cplx>& h, const std::vector<cplx>& symbol, std::size_t n) {
  const std::size_t q = 2 * n;
  std::vector<cplx> buf(q * q, 0.0);
  for (std::size_t j = 0; j < n; ++j) std::copy_n(h.begin() + static_cast<long>(j * n), n, buf.begin() + static_cast<long>(j * q));
  fft::forward_2d(buf, q);
  for (std::size_t t = 0; t < q * q; ++t) buf[t] *= symbol[t];
  fft::backward_2d(buf, q);
  std::vector<cplx> out(n * n);
  const double scale = 1.0 / static_cast<double>(q * q);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out[j * n + i] = buf[j * q + i] * scale;
  return out;
}

// Periodic multipliers on the window (test mode).
std::vector<cplx> periodic_apply(const std::vector<cplx>& h, const Lattice& lat, bool cauchy) {
  const std::size_t n = lat.n;
  std::vector<cplx> buf = h;
  fft::forward_2d(buf, n);
  const double dxi = kTwoPi / (static_cast<double>(n) * lat.spacing());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const cplx z(dxi * fft::signed_index(i, n), dxi * fft::signed_index(j, n));
      cplx& v = buf[j * n + i];
      if (z == 0.0) v = 0.0;
      else v *= cauchy ? cplx(0.0, -2.0) / z : std::conj(z) / z;
    }
  fft::backward_2d(buf, n);
  for (auto& v : buf) v /= static_cast<double>(n * n);
  return buf;
}

// Mobius map sending z1, z2, z3 to 0, 1, infinity.
Mobius to_standard(cplx z1, cplx z2, cplx z3) { return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)}; }

bool is_disk_point(cplx z) { return std::abs(z) < 1.0; }

// Dilatation of f o g from the jet of g and mu_f at g.
cplx chain_dilatation(cplx mu_f_at_g, cplx g_z, cplx g_zbar) {
  const cplx mu_g = g_zbar / g_z;
  const cplx tau = std::conj(g_z) / g_z;
  return (mu_g + mu_f_at_g * tau) / (1.0 + std::conj(mu_g) * mu_f_at_g * tau);
}

}  // namespace

// ---------------------------------------------------------------------------
// Coefficients

void Lattice::validate() const {
  if (n < 16 || !is_power_of_two(n)) throw Error("invalid_argument", "lattice size must be a power of two >= 16");
  if (!(half_width > 0.0)) throw Error("invalid_argument", "lattice half-width must be positive");
}

BeltramiCoefficient BeltramiCoefficient::from_function(const Lattice& lattice, std::function<cplx(cplx)> f,
                                                       Support support) {
  lattice.validate();
  BeltramiCoefficient mu;
  mu.lattice_ = lattice;
  mu.support_ = support;
  mu.values_.resize(lattice.size());
  for (std::size_t j = 0; j < lattice.n; ++j)
    for (std::size_t i = 0; i < lattice.n; ++i) mu.values_[j * lattice.n + i] = f(lattice.point(i, j));
  mu.fn_ = std::move(f);
  return mu;
}

BeltramiCoefficient BeltramiCoefficient::from_values(const Lattice& lattice, std::vector<cplx> values,
                                                     Support support) {
  lattice.validate();
  if (values.size() != lattice.size()) throw Error("invalid_argument", "value count does not match the lattice");
  BeltramiCoefficient mu;
  mu.lattice_ = lattice;
  mu.support_ = support;
  mu.values_ = std::move(values);
  return mu;
}

BeltramiCoefficient BeltramiCoefficient::zero(const Lattice& lattice, Support support) {
  return from_function(lattice, [](cplx) { return cplx(0.0); }, support);
}

BeltramiCoefficient BeltramiCoefficient::constant(const Lattice& lattice, cplx k) {
  return from_function(lattice, [k](cplx) { return k; }, Support::Window);
}

BeltramiCoefficient BeltramiCoefficient::radial_bump(const Lattice& lattice, cplx k, double r_in, double r_out) {
  if (!(r_in >= 0.0 && r_out > r_in)) throw Error("invalid_argument", "bump radii must satisfy 0 <= r_in < r_out");
  const Support s = r_out <= 1.0 ? Support::Disk : (r_in >= 1.0 ? Support::ExteriorDisk : Support::Window);
  if (s == Support::Window) throw Error("support_mismatch", "bump straddles the unit circle");
  return from_function(lattice, [=](cplx z) { return k * bump01((std::abs(z) - r_in) / (r_out - r_in)); }, s);
}

BeltramiCoefficient BeltramiCoefficient::angular_bump(const Lattice& lattice, cplx k, double r_in, double r_out,
                                                      double angle) {
  BeltramiCoefficient radial = radial_bump(lattice, k, r_in, r_out);
  return from_function(
      lattice,
      [=](cplx z) {
        if (z == 0.0) return cplx(0.0);
        return k * bump01((std::abs(z) - r_in) / (r_out - r_in)) * 0.5 * (1.0 + std::cos(std::arg(z) - angle));
      },
      radial.support_);
}

cplx BeltramiCoefficient::operator()(cplx z) const {
  if (fn_) return fn_(z);
  const double l = lattice_.half_width;
  if (std::abs(z.real()) >= l || std::abs(z.imag()) >= l) return 0.0;
  return interpolate(values_, lattice_, z);
}

double BeltramiCoefficient::sup_norm() const {
  double m = 0.0;
  for (const cplx& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double BeltramiCoefficient::circle_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < lattice_.n; ++j)
    for (std::size_t i = 0; i < lattice_.n; ++i)
      if (values_[j * lattice_.n + i] != 0.0) gap = std::min(gap, std::abs(std::abs(lattice_.point(i, j)) - 1.0));
  return gap;
}

BeltramiCoefficient BeltramiCoefficient::scaled(double c) const {
  BeltramiCoefficient out = *this;
  for (auto& v : out.values_) v *= c;
  if (fn_) out.fn_ = [f = fn_, c](cplx z) { return c * f(z); };
  return out;
}

BeltramiCoefficient BeltramiCoefficient::reflected() const {
  if (support_ == Support::Window) throw Error("invalid_argument", "test-mode coefficients have no reflection");
  const BeltramiCoefficient src = *this;
  const Support s = support_ == Support::Disk ? Support::ExteriorDisk
                    : support_ == Support::ExteriorDisk ? Support::Disk
                                                        : Support::Annulus;
  // Interpolated sources leak a few cells across the circle; clip to the image side.
  auto f = [src, s](cplx z) {
    const double r = std::abs(z);
    if (z == 0.0 || (s == Support::Disk && r >= 1.0) || (s == Support::ExteriorDisk && r <= 1.0)) return cplx(0.0);
    const cplx w = 1.0 / std::conj(z);
    const cplx phase = z / std::conj(z);
    return std::conj(src(w)) * phase * phase;
  };
  BeltramiCoefficient out = from_function(lattice_, f, s);
  if (!fn_) out.fn_ = nullptr;
  return out;
}

BeltramiCoefficient BeltramiCoefficient::with_cutoff(double delta) const {
  if (!(delta > 0.0)) throw Error("invalid_argument", "cutoff distance must be positive");
  auto chi = [delta](cplx z) { return smooth_step((std::abs(std::abs(z) - 1.0) - delta) / delta); };
  if (fn_) return from_function(lattice_, [f = fn_, chi](cplx z) { return chi(z) * f(z); }, support_);
  BeltramiCoefficient out = *this;
  for (std::size_t j = 0; j < lattice_.n; ++j)
    for (std::size_t i = 0; i < lattice_.n; ++i) out.values_[j * lattice_.n + i] *= chi(lattice_.point(i, j));
  return out;
}

BeltramiCoefficient combine(const BeltramiCoefficient& a, const BeltramiCoefficient& b) {
  if (a.lattice_.n != b.lattice_.n || a.lattice_.half_width != b.lattice_.half_width)
    throw Error("invalid_argument", "coefficients live on different lattices");
  BeltramiCoefficient out = a;
  for (std::size_t t = 0; t < out.values_.size(); ++t) {
    if (a.values_[t] != 0.0 && b.values_[t] != 0.0) throw Error("support_mismatch", "supports overlap");
    out.values_[t] += b.values_[t];
  }
  if (a.support_ == Support::Window || b.support_ == Support::Window) out.support_ = Support::Window;
  else if (a.support_ != b.support_) out.support_ = Support::Annulus;
  if (a.fn_ && b.fn_) out.fn_ = [fa = a.fn_, fb = b.fn_](cplx z) { return fa(z) + fb(z); };
  else out.fn_ = nullptr;
  return out;
}

double mp_norm(const BeltramiCoefficient& mu, double p, double cutoff) {
  if (!(p >= 1.0)) throw Error("invalid_argument", "exponent must satisfy p >= 1");
  if (mu.support() == Support::Window) throw Error("invalid_argument", "test-mode coefficients have no hyperbolic norm");
  const Lattice& lat = mu.lattice();
  const double h = lat.spacing();
  if (cutoff < 0.0) cutoff = 2.0 * h;
  double sum = 0.0;
  for (std::size_t j = 0; j < lat.n; ++j)
    for (std::size_t i = 0; i < lat.n; ++i) {
      const cplx v = mu.values()[j * lat.n + i];
      if (v == 0.0) continue;
      const double r2 = std::norm(lat.point(i, j));
      if (std::abs(std::sqrt(r2) - 1.0) < cutoff)
        throw Error("support_touches_circle", "coefficient does not vanish near the unit circle");
      const double rho = 2.0 / std::abs(1.0 - r2);
      sum += std::pow(std::abs(v), p) * rho * rho;
    }
  return std::pow(sum * h * h, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Maps

cplx QcMapGrid::raw(cplx z) const {
  cplx f = z + interpolate(cauchy_, lattice_, z);
  if (periodic_) f += mean_ * std::conj(z);
  return f;
}

cplx QcMapGrid::raw_at(std::size_t i, std::size_t j) const {
  const cplx z = lattice_.point(i, j);
  cplx f = z + cauchy_[j * lattice_.n + i];
  if (periodic_) f += mean_ * std::conj(z);
  return f;
}

cplx QcMapGrid::operator()(cplx z) const { return post_(raw(z)); }
cplx QcMapGrid::dz(cplx z) const { return post_.derivative(raw(z)) * interpolate(dz_, lattice_, z); }
cplx QcMapGrid::dzbar(cplx z) const { return post_.derivative(raw(z)) * interpolate(dzbar_, lattice_, z); }
cplx QcMapGrid::at(std::size_t i, std::size_t j) const { return post_(raw_at(i, j)); }
cplx QcMapGrid::dz_at(std::size_t i, std::size_t j) const {
  return post_.derivative(raw_at(i, j)) * dz_[j * lattice_.n + i];
}
cplx QcMapGrid::dzbar_at(std::size_t i, std::size_t j) const {
  return post_.derivative(raw_at(i, j)) * dzbar_[j * lattice_.n + i];
}

cplx QcMapGrid::inverse(cplx w, cplx guess) const {
  cplx z = guess;
  for (int it = 0; it < 60; ++it) {
    const cplx r = (*this)(z)-w;
    const cplx a = dz(z), b = dzbar(z);
    const double jac = std::norm(a) - std::norm(b);
    if (!(jac > 0.0)) throw Error("non_convergence", "inverse map iteration hit a degenerate Jacobian");
    const cplx step = (std::conj(a) * r - b * std::conj(r)) / jac;
    z -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) return z;
  }
  if (std::abs((*this)(z)-w) > 1e-10) throw Error("non_convergence", "inverse map iteration did not converge");
  return z;
}

QcMapGrid solve_beltrami(const BeltramiCoefficient& mu, Normalization normalization, const SolverParams& params) {
  if (normalization == Normalization::DiskThreePoints) return solve_disk_self_map(mu, params);
  const Lattice& lat = mu.lattice();
  lat.validate();
  const std::size_t n = lat.n;
  const double sup = mu.sup_norm();
  if (!(sup <= params.k_max) || !(params.k_max < 1.0))
    throw Error("dilatation_too_large", "sup |mu| exceeds the configured cap");
  if (params.periodic && mu.support() != Support::Window)
    throw Error("invalid_argument", "periodic test mode needs a window coefficient");

  if (!params.periodic) {
    const std::size_t margin = 4;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const cplx v = mu.values()[j * n + i];
        if (v == 0.0) continue;
        if (i < margin || j < margin || i + margin >= n || j + margin >= n)
          throw Error("support_outside_window", "coefficient does not vanish near the lattice edge");
        const double r = std::abs(lat.point(i, j));
        if ((mu.support() == Support::Disk && r >= 1.0) || (mu.support() == Support::ExteriorDisk && r <= 1.0))
          throw Error("support_mismatch", "coefficient is nonzero outside its tagged region");
      }
  }

  QcMapGrid out;
  out.lattice_ = lat;
  out.normalization_ = normalization;
  out.periodic_ = params.periodic;

  const auto& mv = mu.values();
  auto beurling = [&](const std::vector<cplx>& h) {
    return params.periodic ? periodic_apply(h, lat, false) : convolve(h, kernels(lat).beurling, n);
  };
  std::vector<cplx> h = mv, bh;
  bool converged = false;
  for (int it = 1; it <= params.max_iter; ++it) {
    bh = beurling(h);
    double change = 0.0, size = 0.0;
    for (std::size_t t = 0; t < h.size(); ++t) {
      const cplx next = mv[t] * (1.0 + bh[t]);
      change = std::max(change, std::abs(next - h[t]));
      size = std::max(size, std::abs(next));
      h[t] = next;
    }
    out.iterations_ = it;
    if (!std::isfinite(change) || change > 1e6) break;
    if (change <= params.tol * std::max(1.0, size)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error("non_convergence", "Neumann series for the Beltrami density did not converge");

  bh = beurling(h);
  out.dz_.resize(h.size());
  for (std::size_t t = 0; t < h.size(); ++t) out.dz_[t] = 1.0 + bh[t];
  out.dzbar_ = h;
  if (params.periodic) {
    cplx m = 0.0;
    for (const cplx& v : h) m += v;
    m /= static_cast<double>(h.size());
    out.mean_ = m;
    std::vector<cplx> centred = h;
    for (auto& v : centred) v -= m;
    out.cauchy_ = periodic_apply(centred, lat, true);
  } else {
    out.cauchy_ = convolve(h, kernels(lat).cauchy, n);
  }

  double min_jac = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < h.size(); ++t) min_jac = std::min(min_jac, std::norm(out.dz_[t]) - std::norm(out.dzbar_[t]));
  out.min_jacobian_ = min_jac;
  if (!(min_jac > 0.0)) throw Error("not_orientation_preserving", "Jacobian is not positive on the lattice");

  // Residual from sixth-order central differences of the sampled map.
  static constexpr double c[3] = {45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0};
  const double hh = lat.spacing();
  double res = 0.0;
  for (std::size_t j = 3; j + 3 < n; ++j)
    for (std::size_t i = 3; i + 3 < n; ++i) {
      if (std::abs(lat.point(i, j)) > params.residual_radius) continue;
      cplx fx = 0.0, fy = 0.0;
      for (std::size_t k = 1; k <= 3; ++k) {
        fx += c[k - 1] * (out.raw_at(i + k, j) - out.raw_at(i - k, j));
        fy += c[k - 1] * (out.raw_at(i, j + k) - out.raw_at(i, j - k));
      }
      fx /= hh;
      fy /= hh;
      const cplx fz = 0.5 * (fx - cplx(0, 1) * fy), fzb = 0.5 * (fx + cplx(0, 1) * fy);
      res = std::max(res, std::abs(fzb - mv[j * n + i] * fz));
    }
  out.residual_ = res;
  if (!(res <= params.residual_tol)) throw Error("residual_too_large", "Beltrami residual above the tolerance");

  if (normalization == Normalization::ZeroInfinity) out.post_ = Mobius{1.0, -out.raw(0.0), 0.0, 1.0};
  return out;
}

QcMapGrid solve_disk_self_map(const BeltramiCoefficient& mu, const SolverParams& params) {
  if (mu.support() != Support::Disk) throw Error("support_mismatch", "disk self-maps need a coefficient on the disk");
  const BeltramiCoefficient sym = combine(mu, mu.reflected());
  QcMapGrid f = solve_beltrami(sym, Normalization::Infinity, params);

  // The symmetric solution sends the circle to a circle; fit it (Kasa).
  const std::size_t m = 512;
  std::vector<cplx> w(m);
  double a[3][4] = {};
  for (std::size_t k = 0; k < m; ++k) {
    w[k] = f(std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(m)));
    const double row[3] = {2.0 * w[k].real(), 2.0 * w[k].imag(), 1.0};
    for (int r = 0; r < 3; ++r) {
      for (int s = 0; s < 3; ++s) a[r][s] += row[r] * row[s];
      a[r][3] += row[r] * std::norm(w[k]);
    }
  }
  for (int col = 0; col < 3; ++col)
    for (int r = col + 1; r < 3; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (int s = col; s < 4; ++s) a[r][s] -= factor * a[col][s];
    }
  double sol[3];
  for (int r = 2; r >= 0; --r) {
    double v = a[r][3];
    for (int s = r + 1; s < 3; ++s) v -= a[r][s] * sol[s];
    sol[r] = v / a[r][r];
  }
  const cplx centre(sol[0], sol[1]);
  const double radius = std::sqrt(sol[2] + std::norm(centre));
  double err = 0.0;
  for (const cplx& v : w) err = std::max(err, std::abs(std::abs(v - centre) - radius));

  // Exact three-point fix; the fitted circle only measures how round the image is.
  const Mobius to_unit = to_standard(1.0, cplx(0, 1), cplx(0, -1)).inverse();
  f.post_ = to_unit.after(to_standard(f(1.0), f(cplx(0, 1)), f(cplx(0, -1))));
  f.normalization_ = Normalization::DiskThreePoints;
  f.circle_error_ = err / radius;
  return f;
}

CircleHomeomorphism boundary_trace_qs(const QcMapGrid& map, std::size_t m) {
  if (map.normalization() != Normalization::DiskThreePoints)
    throw Error("invalid_argument", "boundary trace needs a disk-normalized map");
  std::vector<double> values(m), slopes(m);
  cplx prev = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
    const cplx z = std::polar(1.0, t);
    const cplx w = map(z);
    values[k] = k == 0 ? std::arg(w) : values[k - 1] + std::arg(w / prev);
    if (k > 0 && !(values[k] > values[k - 1])) throw Error("non_monotone_trace", "boundary trace is not increasing");
    const cplx dw = cplx(0, 1) * z * map.dz(z) - cplx(0, 1) * std::conj(z) * map.dzbar(z);
    slopes[k] = (dw / w).imag();
    if (!(slopes[k] > 0.0)) throw Error("non_monotone_trace", "boundary trace is not increasing");
    prev = w;
  }
  if (!(values[m - 1] < values[0] + kTwoPi)) throw Error("non_monotone_trace", "boundary trace winds more than once");
  return CircleHomeomorphism::from_lift_hermite(std::move(values), std::move(slopes));
}

namespace {

bool disk_setting(const BeltramiCoefficient& a, const BeltramiCoefficient& b) {
  return a.support() == Support::Disk && b.support() == Support::Disk;
}

QcMapGrid map_for(const BeltramiCoefficient& mu, bool disk, const SolverParams& params) {
  return disk ? solve_disk_self_map(mu, params) : solve_beltrami(mu, Normalization::Infinity, params);
}

Support result_support(const BeltramiCoefficient& a, const BeltramiCoefficient& b, bool disk) {
  if (disk) return Support::Disk;
  if (a.support() == Support::Window || b.support() == Support::Window) return Support::Window;
  return Support::Annulus;
}

}  // namespace

BeltramiCoefficient compose_dilatation(const BeltramiCoefficient& mu1, const BeltramiCoefficient& mu2,
                                       const SolverParams& params) {
  const Lattice& lat = mu1.lattice();
  if (lat.n != mu2.lattice().n || lat.half_width != mu2.lattice().half_width)
    throw Error("invalid_argument", "coefficients live on different lattices");
  const bool disk = disk_setting(mu1, mu2);
  const QcMapGrid g = map_for(mu2, disk, params);
  std::vector<cplx> out(lat.size(), 0.0);
  for (std::size_t j = 0; j < lat.n; ++j)
    for (std::size_t i = 0; i < lat.n; ++i) {
      if (disk && !is_disk_point(lat.point(i, j))) continue;
      const cplx gz = g.dz_at(i, j), gzb = g.dzbar_at(i, j);
      if (!(std::norm(gz) - std::norm(gzb) > 0.0)) throw Error("degenerate_jacobian", "chain rule at a singular Jacobian");
      const cplx w = g.at(i, j);
      const cplx mf = (disk && !is_disk_point(w)) ? cplx(0.0) : mu1(w);
      const cplx v = chain_dilatation(mf, gz, gzb);
      out[j * lat.n + i] = std::abs(v) < 1e-15 ? cplx(0.0) : v;
    }
  return BeltramiCoefficient::from_values(lat, std::move(out), result_support(mu1, mu2, disk));
}

BeltramiCoefficient invert_dilatation(const BeltramiCoefficient& mu, const SolverParams& params) {
  const Lattice& lat = mu.lattice();
  const bool disk = mu.support() == Support::Disk;
  const QcMapGrid g = map_for(mu, disk, params);
  std::vector<cplx> out(lat.size(), 0.0);
  for (std::size_t j = 0; j < lat.n; ++j) {
    cplx guess = lat.point(0, j);
    for (std::size_t i = 0; i < lat.n; ++i) {
      const cplx w = lat.point(i, j);
      if (disk && !is_disk_point(w)) continue;
      const cplx z = g.inverse(w, disk ? w : guess);
      guess = z + lat.spacing();
      // g solves the Beltrami equation for mu, so its dilatation at z is mu(z).
      const cplx gz = g.dz(z);
      const cplx v = -mu(z) * gz / std::conj(gz);
      out[j * lat.n + i] = std::abs(v) < 1e-15 ? cplx(0.0) : v;
    }
  }
  return BeltramiCoefficient::from_values(lat, std::move(out), disk ? Support::Disk : mu.support());
}

JordanCurve wp_curve_from_pair(const BeltramiCoefficient& mu1, const BeltramiCoefficient& mu2,
                               const SolverParams& params, std::size_t points) {
  if (mu1.support() != Support::Disk || mu2.support() != Support::ExteriorDisk)
    throw Error("support_mismatch", "expects one coefficient on the disk and one outside");
  const QcMapGrid g = solve_beltrami(combine(mu1, mu2), Normalization::Infinity, params);
  std::vector<cplx> pts(points);
  for (std::size_t k = 0; k < points; ++k) pts[k] = g(std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(points)));
  return JordanCurve::sampled(std::move(pts));
}

CompositionCheck wp_composition_identity(const BeltramiCoefficient& mu1, const BeltramiCoefficient& mu2,
                                         const SolverParams& params, std::size_t points) {
  if (mu1.support() != Support::Disk || mu2.support() != Support::ExteriorDisk)
    throw Error("support_mismatch", "expects one coefficient on the disk and one outside");
  if (points < 8 || points % 4 != 0) throw Error("invalid_argument", "point count must be a multiple of 4");
  const Lattice& lat = mu1.lattice();
  const QcMapGrid g = solve_beltrami(combine(mu1, mu2), Normalization::Infinity, params);
  const BeltramiCoefficient nu2 = mu2.reflected();
  const QcMapGrid hmap = solve_disk_self_map(nu2, params);

  // nu = dilatation of H^{mu1} o H^{-1}; only mu1 and the jet of H^{-1} enter.
  std::vector<cplx> nu(lat.size(), 0.0);
  for (std::size_t j = 0; j < lat.n; ++j)
    for (std::size_t i = 0; i < lat.n; ++i) {
      const cplx w = lat.point(i, j);
      if (!is_disk_point(w)) continue;
      const cplx z = hmap.inverse(w, w);
      // Jet of H^{-1} up to a positive factor: (conj(H_z), -H_zbar) with H_zbar = nu2 H_z.
      const cplx hz = hmap.dz(z);
      const cplx v = chain_dilatation(mu1(z), std::conj(hz), -nu2(z) * hz);
      nu[j * lat.n + i] = std::abs(v) < 1e-15 ? cplx(0.0) : v;
    }
  CompositionCheck out;
  out.nu = BeltramiCoefficient::from_values(lat, std::move(nu), Support::Disk);
  const QcMapGrid f = solve_beltrami(out.nu, Normalization::Infinity, params);

  std::vector<cplx> rhs(points);
  out.lhs.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    const cplx zeta = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(points));
    out.lhs[k] = g(hmap.inverse(zeta, zeta));
    rhs[k] = f(zeta);
  }
  const std::size_t a = 0, b = points / 4, c = 3 * points / 4;
  const Mobius t = to_standard(out.lhs[a], out.lhs[b], out.lhs[c]).inverse().after(to_standard(rhs[a], rhs[b], rhs[c]));
  for (std::size_t k = 0; k < points; ++k) out.max_error = std::max(out.max_error, std::abs(out.lhs[k] - t(rhs[k])));
  out.residual = std::max({g.residual(), hmap.residual(), f.residual()});
  return out;
}

}  // namespace qclab
