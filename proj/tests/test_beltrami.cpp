#include <gsl/gsl_integration.h>

#include <cmath>

#include "doctest.h"
#include "qclab/beltrami.hpp"

using namespace qclab;

namespace {

const Lattice kLat{256, 4.0};

double psi(double s) { return (s > 0.0 && s < 1.0) ? std::exp(4.0 - 1.0 / (s * (1.0 - s))) : 0.0; }

double gsl_integral(const std::function<double(double)>& f, double a, double b) {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(1000);
  gsl_function g;
  g.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
  g.params = const_cast<std::function<double(double)>*>(&f);
  double res = 0.0, err = 0.0;
  gsl_integration_qags(&g, a, b, 0.0, 1e-13, 1000, w, &res, &err);
  gsl_integration_workspace_free(w);
  return res;
}

// mu = k psi(r) z / conj(z) is solved by the radial stretch F(z) = z g(|z|) with
// (log g)' = 2 k psi / (r (1 - k psi)) and g = 1 beyond the support.
struct RadialStretch {
  double k, a, b;
  double bump(double r) const { return k * psi((r - a) / (b - a)); }
  BeltramiCoefficient coefficient(const Lattice& lat) const {
    return BeltramiCoefficient::from_function(
        lat,
        [*this](cplx z) {
          const double p = bump(std::abs(z));
          return p == 0.0 ? cplx(0.0) : p * z / std::conj(z);
        },
        Support::Disk);
  }
  double g(double r) const {
    if (r >= b) return 1.0;
    return std::exp(-gsl_integral([this](double s) { return 2.0 * bump(s) / (s * (1.0 - bump(s))); }, std::max(r, a), b));
  }
};

const cplx kProbe[] = {{0.1, 0.05}, {0.5, 0.2}, {-0.6, 0.3}, {0.2, -0.7}, {-0.05, -0.35}};

}  // namespace

TEST_CASE("zero coefficient gives the identity") {
  auto f = solve_beltrami(BeltramiCoefficient::zero(kLat));
  for (cplx z : kProbe) {
    CHECK(std::abs(f(z) - z) < 1e-15);
    CHECK(std::abs(f.dz(z) - 1.0) < 1e-15);
  }
  CHECK(f.residual() < 1e-12);
  auto h = solve_disk_self_map(BeltramiCoefficient::zero(kLat));
  for (cplx z : kProbe) CHECK(std::abs(h(z) - z) < 1e-12);
  CHECK(h.circle_error() < 1e-14);
}

TEST_CASE("constant coefficient in periodic test mode") {
  SolverParams sp;
  sp.periodic = true;
  const cplx k(0.3, 0.1);
  auto f = solve_beltrami(BeltramiCoefficient::constant(kLat, k), Normalization::Infinity, sp);
  for (cplx z : kProbe) {
    CHECK(std::abs(f(z) - (z + k * std::conj(z))) < 1e-6);
    CHECK(std::abs(f.dzbar(z) - k) < 1e-6);
  }
  auto g = solve_beltrami(BeltramiCoefficient::constant(kLat, k), Normalization::ZeroInfinity, sp);
  CHECK(std::abs(g(0.0)) < 1e-14);
  CHECK_THROWS_AS(solve_beltrami(BeltramiCoefficient::constant(kLat, k)), Error);
}

TEST_CASE("radial stretch against the closed form") {
  RadialStretch rs{0.4, 0.3, 0.9};
  double prev_err = 1.0, prev_res = 1.0;
  for (std::size_t n : {128, 256}) {
    Lattice lat{n, 4.0};
    auto f = solve_beltrami(rs.coefficient(lat));
    double err = 0.0;
    for (cplx z : kProbe) err = std::max(err, std::abs(f(z) - z * rs.g(std::abs(z))));
    err = std::max(err, std::abs(f(cplx(1.5, -0.5)) - cplx(1.5, -0.5)));
    CHECK(err < prev_err / 10.0);
    CHECK(f.residual() < prev_res / 10.0);
    CHECK(f.min_jacobian() > 0.0);
    prev_err = err;
    prev_res = f.residual();
  }
  CHECK(prev_err < 1e-5);
  CHECK(prev_res < 1e-3);

  // Radial maps keep the circle: the disk self-map is the same stretch.
  auto h = solve_disk_self_map(rs.coefficient(kLat));
  CHECK(h.circle_error() < 1e-6);
  for (cplx z : kProbe) CHECK(std::abs(h(z) - z * rs.g(std::abs(z))) < 1e-5);
  auto trace = boundary_trace_qs(h);
  for (double t : {0.3, 2.0, 4.5}) CHECK(std::abs(trace.lift(t) - t) < 1e-6);
}

TEST_CASE("hyperbolic norms") {
  CHECK(mp_norm(BeltramiCoefficient::zero(kLat), 2.0) == 0.0);
  const double k = 0.2;
  auto disc = BeltramiCoefficient::from_function(
      kLat, [=](cplx z) { return std::abs(z) <= 0.5 ? cplx(k) : cplx(0.0); }, Support::Disk);
  for (double p : {1.0, 2.0, 4.0}) CHECK(mp_norm(disc, p) == doctest::Approx(k * std::pow(4.0 * kPi / 3.0, 1.0 / p)).epsilon(0.02));

  RadialStretch rs{0.3, 0.2, 0.8};
  auto mu = rs.coefficient(kLat);
  for (double p : {1.5, 2.0, 3.0}) {
    const double exact = std::pow(
        kTwoPi * gsl_integral([&](double r) { return std::pow(rs.bump(r), p) * 4.0 * r / std::pow(1.0 - r * r, 2); }, 0.2, 0.8),
        1.0 / p);
    CHECK(mp_norm(mu, p) == doctest::Approx(exact).epsilon(1e-6));
    CHECK(mp_norm(mu.scaled(0.5), p) == doctest::Approx(0.5 * mp_norm(mu, p)).epsilon(1e-12));
  }
  // The hyperbolic measure is invariant under reflection in the circle.
  Lattice fine{512, 4.0};
  auto m2 = rs.coefficient(fine);
  CHECK(mp_norm(m2.reflected(), 2.0) == doctest::Approx(mp_norm(m2, 2.0)).epsilon(1e-3));

  auto touching = RadialStretch{0.3, 0.5, 1.0}.coefficient(kLat);
  CHECK_THROWS_AS(mp_norm(touching, 2.0), Error);
  CHECK_NOTHROW(mp_norm(touching.with_cutoff(0.1), 2.0));
  CHECK(touching.with_cutoff(0.1).circle_gap() >= 0.1);
}

TEST_CASE("reflection") {
  auto mu = BeltramiCoefficient::angular_bump(kLat, cplx(0.2, 0.1), 0.3, 0.8, 1.0);
  auto r = mu.reflected();
  CHECK(r.support() == Support::ExteriorDisk);
  auto rr = r.reflected();
  for (cplx z : kProbe) CHECK(std::abs(rr(z) - mu(z)) < 1e-14);
  const cplx w(1.6, -0.9);
  const cplx zr = 1.0 / std::conj(w);
  CHECK(std::abs(r(w) - std::conj(mu(zr)) * std::pow(w / std::conj(w), 2)) < 1e-15);
  CHECK_THROWS_AS(BeltramiCoefficient::constant(kLat, 0.1).reflected(), Error);
}

TEST_CASE("disk self-map and boundary trace") {
  auto mu = BeltramiCoefficient::angular_bump(kLat, cplx(0.3, 0.0), 0.3, 0.9, 0.5);
  auto h = solve_disk_self_map(mu);
  CHECK(h.normalization() == Normalization::DiskThreePoints);
  CHECK(h.circle_error() < 1e-5);
  for (cplx p : {cplx(1.0), cplx(0, 1), cplx(0, -1)}) CHECK(std::abs(h(p) - p) < 1e-12);
  for (double t : {0.4, 2.5, 3.9}) CHECK(std::abs(std::abs(h(std::polar(1.0, t))) - 1.0) < 1e-5);
  CHECK(std::abs(h(0.0)) < 1.0);

  double prev = 1.0;
  for (double k : {0.05, 0.1, 0.2, 0.3}) {
    auto trace = boundary_trace_qs(solve_disk_self_map(BeltramiCoefficient::angular_bump(kLat, k, 0.3, 0.9, 0.5)));
    const double q = qs_constant(trace).qs_constant;
    CHECK(q > prev);
    prev = q;
  }
  auto id = boundary_trace_qs(solve_disk_self_map(BeltramiCoefficient::zero(kLat)));
  for (double t : {0.1, 3.0}) CHECK(std::abs(id.lift(t) - t) < 1e-12);
  CHECK_THROWS_AS(boundary_trace_qs(solve_beltrami(mu)), Error);
}

TEST_CASE("composition and inversion of dilatations") {
  // Inner radius 0.4 keeps the reflected support of the inverse inside the window.
  auto mu = BeltramiCoefficient::angular_bump(kLat, cplx(0.2, 0.05), 0.4, 0.85, 2.0);
  auto zero = BeltramiCoefficient::zero(kLat);
  auto left = compose_dilatation(mu, zero);
  auto right = compose_dilatation(zero, mu);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t t = 0; t < mu.values().size(); ++t) {
    e1 = std::max(e1, std::abs(left.values()[t] - mu.values()[t]));
    e2 = std::max(e2, std::abs(right.values()[t] - mu.values()[t]));
  }
  CHECK(e1 < 1e-10);
  CHECK(e2 < 1e-10);

  auto inv = invert_dilatation(mu);
  CHECK(inv.sup_norm() == doctest::Approx(mu.sup_norm()).epsilon(1e-3));
  auto cancel = compose_dilatation(mu, inv);
  CHECK(cancel.sup_norm() < 1e-3 * mu.sup_norm());

  // Plane setting, both sides of the circle.
  auto both = combine(BeltramiCoefficient::radial_bump(kLat, 0.15, 0.3, 0.8),
                      BeltramiCoefficient::radial_bump(kLat, cplx(0, 0.15), 1.3, 2.2));
  CHECK(both.support() == Support::Annulus);
  auto back = compose_dilatation(both, invert_dilatation(both));
  CHECK(back.sup_norm() < 1e-3 * both.sup_norm());
}

TEST_CASE("curves from coefficient pairs") {
  auto zero_in = BeltramiCoefficient::zero(kLat);
  auto zero_out = BeltramiCoefficient::zero(kLat, Support::ExteriorDisk);
  auto circle = wp_curve_from_pair(zero_in, zero_out, {}, 256);
  CHECK(circle.kind() == CurveKind::Sampled);
  for (std::size_t k = 0; k < 256; k += 17) CHECK(std::abs(std::abs(circle.point(circle.length() * k / 256.0)) - 1.0) < 1e-12);

  auto mu1 = BeltramiCoefficient::angular_bump(kLat, cplx(0.2, 0.0), 0.3, 0.85, 0.3);
  auto mu2 = BeltramiCoefficient::angular_bump(kLat, cplx(0.0, 0.2), 1.2, 2.5, 2.0);
  auto check = wp_composition_identity(mu1, mu2, {}, 128);
  CHECK(check.max_error < 1e-4);
  CHECK(check.residual < 1e-2);
  CHECK(check.nu.support() == Support::Disk);
  // Without the first coefficient nu is the dilatation of the inverse disk map.
  auto trivial = wp_composition_identity(zero_in, mu2, {}, 64);
  CHECK(trivial.nu.sup_norm() == doctest::Approx(0.2).epsilon(0.01));
  CHECK(trivial.max_error < 1e-4);
}

TEST_CASE("solver error paths") {
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return std::string("none");
  };
  CHECK(kind([] { solve_beltrami(BeltramiCoefficient::radial_bump(kLat, 0.7, 0.3, 0.9)); }) == "dilatation_too_large");
  CHECK(kind([] { solve_beltrami(BeltramiCoefficient::radial_bump(kLat, 0.2, 2.0, 6.0)); }) == "support_outside_window");
  CHECK(kind([] {
          solve_beltrami(BeltramiCoefficient::from_function(kLat, [](cplx z) { return std::abs(z) < 1.5 ? cplx(0.1) : cplx(0.0); },
                                                           Support::Disk));
        }) == "support_mismatch");
  SolverParams few;
  few.max_iter = 2;
  CHECK(kind([&] { solve_beltrami(BeltramiCoefficient::radial_bump(kLat, 0.3, 0.3, 0.9), Normalization::Infinity, few); }) ==
        "non_convergence");
  SolverParams strict;
  strict.residual_tol = 1e-12;
  CHECK(kind([&] { solve_beltrami(BeltramiCoefficient::radial_bump(kLat, 0.3, 0.3, 0.9), Normalization::Infinity, strict); }) ==
        "residual_too_large");
  CHECK(kind([] { BeltramiCoefficient::radial_bump(kLat, 0.1, 0.5, 1.5); }) == "support_mismatch");
  CHECK(kind([] {
          auto a = BeltramiCoefficient::radial_bump(kLat, 0.1, 0.3, 0.9);
          combine(a, a);
        }) == "support_mismatch");
  CHECK(kind([] { solve_disk_self_map(BeltramiCoefficient::radial_bump(kLat, 0.1, 1.2, 1.9)); }) == "support_mismatch");
  CHECK(kind([] { Lattice{100, 4.0}.validate(); }) == "invalid_argument");
}
