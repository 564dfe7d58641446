#include "qclab/circle_fn.hpp"

#include <algorithm>
#include <cmath>

#include "qclab/detail/besov_kernel.hpp"
#include "qclab/fft.hpp"

namespace qclab {

namespace {

void require_grid(std::size_t n) {
  if (n < 4 || !is_power_of_two(n))
    throw Error("invalid_argument", "grid size must be a power of two >= 4, got " + std::to_string(n));
}

}  // namespace

BoundaryFunction BoundaryFunction::from_samples(std::vector<cplx> samples) {
  require_grid(samples.size());
  BoundaryFunction f;
  f.samples_ = std::move(samples);
  f.sync_from_samples();
  return f;
}

BoundaryFunction BoundaryFunction::from_coefficients(std::vector<cplx> coeffs) {
  require_grid(coeffs.size());
  BoundaryFunction f;
  f.coeffs_ = std::move(coeffs);
  f.samples_.resize(f.coeffs_.size());
  f.sync_from_coefficients();
  return f;
}

BoundaryFunction BoundaryFunction::from_modes(std::size_t n, std::span<const std::pair<int, cplx>> modes) {
  require_grid(n);
  std::vector<cplx> coeffs(n, cplx{});
  const int lo = -static_cast<int>(n / 2) + 1;
  const int hi = static_cast<int>(n / 2);
  for (const auto& [k, a] : modes) {
    if (k < lo || k > hi) throw Error("invalid_argument", "mode " + std::to_string(k) + " outside the grid band");
    coeffs[static_cast<std::size_t>(k - lo)] += a;
  }
  return from_coefficients(std::move(coeffs));
}

BoundaryFunction BoundaryFunction::from_modes(std::size_t n, std::initializer_list<std::pair<int, cplx>> modes) {
  return from_modes(n, std::span<const std::pair<int, cplx>>(modes.begin(), modes.size()));
}

BoundaryFunction BoundaryFunction::from_function(std::size_t n, const std::function<cplx(double)>& f) {
  require_grid(n);
  std::vector<cplx> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = f(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
  return from_samples(std::move(s));
}

BoundaryFunction BoundaryFunction::constant(std::size_t n, cplx c) {
  require_grid(n);
  return from_samples(std::vector<cplx>(n, c));
}

void BoundaryFunction::sync_from_samples() {
  const std::size_t n = samples_.size();
  std::vector<cplx> x = fft::forward(samples_);
  coeffs_.assign(n, cplx{});
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) coeffs_[index_of(fft::signed_index(k, n))] = x[k] * inv;
}

void BoundaryFunction::sync_from_coefficients() {
  const std::size_t n = coeffs_.size();
  std::vector<cplx> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = coeffs_[index_of(fft::signed_index(k, n))];
  samples_ = fft::backward(x);
}

cplx BoundaryFunction::coefficient(int n) const {
  if (samples_.empty() || n < min_mode() || n > max_mode()) return {};
  return coeffs_[index_of(n)];
}

cplx BoundaryFunction::operator()(double theta) const {
  if (samples_.empty()) return {};
  // Horner in w = e^{i theta} for n >= 0 and in conj(w) for n < 0.
  const cplx w = std::polar(1.0, theta);
  cplx pos{};
  for (int n = max_mode(); n >= 0; --n) pos = pos * w + coeffs_[index_of(n)];
  cplx neg{};
  const cplx wc = std::conj(w);
  for (int n = min_mode(); n <= -1; ++n) neg = (neg + coeffs_[index_of(n)]) * wc;
  return pos + neg;
}

std::vector<cplx> BoundaryFunction::derivative_samples() const {
  const std::size_t n = size();
  std::vector<cplx> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int m = fft::signed_index(k, n);
    x[k] = (m == max_mode()) ? cplx{} : cplx(0.0, m) * coeffs_[index_of(m)];
  }
  return fft::backward(x);
}

std::vector<cplx> BoundaryFunction::shifted_samples(double shift) const {
  const std::size_t n = size();
  std::vector<cplx> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int m = fft::signed_index(k, n);
    // The Nyquist mode is read as a cosine so that real data stays real.
    const cplx phase = (m == max_mode()) ? cplx(std::cos(m * shift), 0.0) : std::polar(1.0, m * shift);
    x[k] = coeffs_[index_of(m)] * phase;
  }
  return fft::backward(x);
}

int BoundaryFunction::degree(double rel_tol) const {
  double peak = 0.0;
  for (int n = min_mode(); n <= max_mode(); ++n)
    if (n != 0) peak = std::max(peak, std::abs(coeffs_[index_of(n)]));
  if (peak == 0.0) return 0;
  int deg = 0;
  for (int n = min_mode(); n <= max_mode(); ++n)
    if (n != 0 && std::abs(coeffs_[index_of(n)]) > rel_tol * peak) deg = std::max(deg, std::abs(n));
  return deg;
}

BoundaryFunction BoundaryFunction::resampled(std::size_t n) const {
  require_grid(n);
  std::vector<cplx> c(n, cplx{});
  const int lo = -static_cast<int>(n / 2) + 1;
  const int hi = static_cast<int>(n / 2);
  for (int m = std::max(lo, min_mode()); m <= std::min(hi, max_mode()); ++m)
    c[static_cast<std::size_t>(m - lo)] = coeffs_[index_of(m)];
  return from_coefficients(std::move(c));
}

BoundaryFunction BoundaryFunction::filtered(const std::function<bool(int)>& keep) const {
  std::vector<cplx> c = coeffs_;
  for (int m = min_mode(); m <= max_mode(); ++m)
    if (!keep(m)) c[index_of(m)] = cplx{};
  return from_coefficients(std::move(c));
}

BoundaryFunction BoundaryFunction::multiplied(const std::function<cplx(int)>& mult) const {
  std::vector<cplx> c = coeffs_;
  for (int m = min_mode(); m <= max_mode(); ++m) c[index_of(m)] *= mult(m);
  return from_coefficients(std::move(c));
}

BoundaryFunction& BoundaryFunction::operator+=(const BoundaryFunction& other) {
  if (other.size() > size()) *this = resampled(other.size());
  const BoundaryFunction rhs = other.size() == size() ? other : other.resampled(size());
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  sync_from_coefficients();
  return *this;
}

BoundaryFunction& BoundaryFunction::operator-=(const BoundaryFunction& other) {
  if (other.size() > size()) *this = resampled(other.size());
  const BoundaryFunction rhs = other.size() == size() ? other : other.resampled(size());
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  sync_from_coefficients();
  return *this;
}

BoundaryFunction& BoundaryFunction::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  for (auto& v : samples_) v *= s;
  return *this;
}

BoundaryFunction mod_constants_normalize(const BoundaryFunction& phi) {
  return phi.filtered([](int n) { return n != 0; });
}

double coefficient_distance_mod_constants(const BoundaryFunction& a, const BoundaryFunction& b) {
  const int lo = std::min(a.min_mode(), b.min_mode());
  const int hi = std::max(a.max_mode(), b.max_mode());
  double d = 0.0;
  for (int n = lo; n <= hi; ++n)
    if (n != 0) d = std::max(d, std::abs(a.coefficient(n) - b.coefficient(n)));
  return d;
}

void BesovParams::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error("invalid_argument", "Besov exponent must satisfy p > 1");
  if (diagonal_band < 1) throw Error("invalid_argument", "diagonal band must be at least 1");
}

double chordal_power_integral(double p) {
  return std::pow(2.0, p - 1.0) * std::sqrt(kPi) * std::tgamma(0.5 * (p - 1.0)) / std::tgamma(0.5 * p);
}

double besov_norm(const BoundaryFunction& phi, const BesovParams& params) {
  params.validate();
  for (const cplx& v : phi.samples())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error("invalid_argument", "boundary function has non-finite samples");
  const std::size_t n = phi.size();
  if (n == 0) return 0.0;

  const BoundaryFunction f = mod_constants_normalize(phi);
  std::vector<cplx> deriv = f.derivative_samples();
  std::vector<double> slope(n);
  for (std::size_t j = 0; j < n; ++j) slope[j] = std::abs(deriv[j]);
  std::vector<cplx> half;
  if (params.rule == QuadratureRule::MidpointOffset) half = f.shifted_samples(kPi / static_cast<double>(n));

  std::vector<double> chord(n), half_chord(n);
  for (std::size_t k = 0; k < n; ++k) {
    chord[k] = 2.0 * std::abs(std::sin(kPi * static_cast<double>(k) / static_cast<double>(n)));
    half_chord[k] = 2.0 * std::abs(std::sin(kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n)));
  }

  detail::BesovInput in{f.samples(), half, slope, kTwoPi};
  const double s = detail::besov_integral(
      in, params, [&](std::size_t, std::size_t k) { return chord[k]; },
      [&](std::size_t, std::size_t k) { return half_chord[k]; });
  return std::pow(s, 1.0 / params.p);
}

double besov_norm_spectral(const BoundaryFunction& phi) {
  double s = 0.0;
  for (int n = phi.min_mode(); n <= phi.max_mode(); ++n) s += std::abs(n) * std::norm(phi.coefficient(n));
  return kTwoPi * std::sqrt(s);
}

}  // namespace qclab
