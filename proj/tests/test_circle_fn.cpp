#include <gsl/gsl_integration.h>

#include <cmath>

#include "doctest.h"
#include "qclab/circle_fn.hpp"
#include "test_util.hpp"

using namespace qclab;

namespace {

// Row integral  int_0^{2pi} |phi(x+t)-phi(x)|^p / |2 sin(t/2)|^2 dt  by adaptive
// quadrature with endpoint singularities, summed over a uniform x grid.
double adaptive_besov(const BoundaryFunction& phi, double p, int rows) {
  struct Ctx {
    const BoundaryFunction* f;
    double x, p;
  } ctx{&phi, 0.0, p};
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
  gsl_function fn;
  fn.function = [](double t, void* v) {
    auto* c = static_cast<Ctx*>(v);
    const double chord = 2.0 * std::sin(0.5 * t);
    return std::pow(std::abs((*c->f)(c->x + t) - (*c->f)(c->x)), c->p) / (chord * chord);
  };
  fn.params = &ctx;
  double total = 0.0;
  for (int j = 0; j < rows; ++j) {
    ctx.x = kTwoPi * j / rows;
    double r = 0.0, err = 0.0;
    gsl_integration_qags(&fn, 0.0, kTwoPi, 1e-13, 1e-11, 2000, ws, &r, &err);
    total += r * kTwoPi / rows;
  }
  gsl_integration_workspace_free(ws);
  return std::pow(total, 1.0 / p);
}

}  // namespace

TEST_CASE("samples and coefficients agree") {
  auto f = testutil::random_trig(64, 10, 7, true);
  auto g = BoundaryFunction::from_samples(f.samples());
  CHECK(testutil::max_abs_diff(f.coefficients(), g.coefficients()) < 1e-14);
  for (double th : {0.1, 1.3, 4.0}) {
    cplx direct{};
    for (int n = -10; n <= 10; ++n) direct += f.coefficient(n) * std::polar(1.0, n * th);
    CHECK(std::abs(f(th) - direct) < 1e-13);
  }
  CHECK(std::abs(f(kTwoPi * 5 / 64) - f.samples()[5]) < 1e-13);
}

TEST_CASE("grid size must be a power of two") {
  CHECK_THROWS_AS(BoundaryFunction::from_samples(std::vector<cplx>(48)), Error);
  CHECK_THROWS_AS(BoundaryFunction::from_modes(16, {{9, 1.0}}), Error);
}

TEST_CASE("derivative and shifted samples") {
  auto f = BoundaryFunction::from_modes(32, {{3, 1.0}, {-2, cplx(0, 2)}});
  auto d = f.derivative_samples();
  auto s = f.shifted_samples(0.3);
  for (std::size_t j = 0; j < 32; ++j) {
    double th = kTwoPi * j / 32;
    cplx exact_d = cplx(0, 3) * std::polar(1.0, 3 * th) + cplx(0, 2) * cplx(0, -2) * std::polar(1.0, -2 * th);
    CHECK(std::abs(d[j] - exact_d) < 1e-12);
    CHECK(std::abs(s[j] - f(th + 0.3)) < 1e-12);
  }
}

TEST_CASE("besov norm of single modes") {
  auto e1 = BoundaryFunction::from_modes(1024, {{1, 1.0}});
  auto e2 = BoundaryFunction::from_modes(1024, {{2, 1.0}});
  CHECK(besov_norm(e1) == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(besov_norm(e2) == doctest::Approx(std::sqrt(8.0) * kPi).epsilon(1e-6));
  BesovParams mid;
  mid.rule = QuadratureRule::MidpointOffset;
  CHECK(besov_norm(e2, mid) == doctest::Approx(std::sqrt(8.0) * kPi).epsilon(1e-6));
  // Independent brute force at two resolutions.
  CHECK(adaptive_besov(e2, 2.0, 16) == doctest::Approx(std::sqrt(8.0) * kPi).epsilon(1e-9));
  CHECK(adaptive_besov(e2, 2.0, 32) == doctest::Approx(std::sqrt(8.0) * kPi).epsilon(1e-9));
}

TEST_CASE("besov norm of constants is zero") {
  for (double p : {1.5, 2.0, 3.0}) {
    BesovParams bp;
    bp.p = p;
    CHECK(besov_norm(BoundaryFunction::constant(256, cplx(3, -1)), bp) == 0.0);
  }
}

TEST_CASE("spectral oracle values") {
  CHECK(besov_norm_spectral(BoundaryFunction::from_modes(64, {{1, 1.0}})) == doctest::Approx(kTwoPi));
  CHECK(besov_norm_spectral(BoundaryFunction::from_modes(64, {{2, 1.0}})) ==
        doctest::Approx(kTwoPi * std::sqrt(2.0)));
  CHECK(besov_norm_spectral(BoundaryFunction::constant(64, 4.0)) == 0.0);
}

TEST_CASE("quadrature matches the spectral value for degree <= 16 at N = 1024") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto f = testutil::random_trig(1024, 16, seed);
    double q = besov_norm(f), s = besov_norm_spectral(f);
    CHECK(std::abs(q - s) / s < 1e-2);
    CHECK(std::abs(q - s) / s < 1e-4);
  }
}

TEST_CASE("general p agrees with adaptive quadrature") {
  auto f = testutil::random_trig(512, 5, 99);
  for (double p : {1.5, 3.0}) {
    BesovParams bp;
    bp.p = p;
    double oracle = adaptive_besov(f, p, 64);
    CHECK(besov_norm(f, bp) == doctest::Approx(oracle).epsilon(1e-4));
    bp.rule = QuadratureRule::MidpointOffset;
    CHECK(besov_norm(f, bp) == doctest::Approx(oracle).epsilon(1e-4));
  }
}

TEST_CASE("single mode closed form for general p") {
  for (double p : {1.2, 1.5, 3.0, 4.0}) {
    BesovParams bp;
    bp.p = p;
    double exact = std::pow(kTwoPi * chordal_power_integral(p), 1.0 / p);
    CHECK(besov_norm(BoundaryFunction::from_modes(256, {{1, 1.0}}), bp) == doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK(chordal_power_integral(2.0) == doctest::Approx(kTwoPi));
}

TEST_CASE("constant shift and scaling") {
  auto f = testutil::random_trig(256, 8, 3);
  auto g = f + BoundaryFunction::constant(256, cplx(5, 2));
  for (double p : {1.5, 2.0, 3.0}) {
    BesovParams bp;
    bp.p = p;
    double a = besov_norm(f, bp);
    CHECK(std::abs(besov_norm(g, bp) - a) <= 1e-12 * a);
    CHECK(besov_norm(cplx(0.5, -2.0) * f, bp) == doctest::Approx(std::abs(cplx(0.5, -2.0)) * a).epsilon(1e-10));
  }
}

TEST_CASE("grid refinement is Cauchy") {
  auto f = testutil::random_trig(128, 12, 5);
  double prev = besov_norm(f);
  double prev_change = 1e300;
  for (std::size_t n : {256, 512, 1024}) {
    double v = besov_norm(f.resampled(n));
    double change = std::abs(v - prev);
    CHECK(change <= prev_change);
    prev_change = change;
    prev = v;
  }
}

TEST_CASE("normalization") {
  auto f = BoundaryFunction::from_modes(64, {{0, 3.0}, {1, 1.0}});
  auto g = mod_constants_normalize(f);
  CHECK(std::abs(g.coefficient(0)) == 0.0);
  CHECK(std::abs(g.coefficient(1) - 1.0) < 1e-15);
  auto e = BoundaryFunction::from_modes(64, {{1, 1.0}});
  CHECK(coefficient_distance_mod_constants(mod_constants_normalize(e), e) == 0.0);
  auto r = testutil::random_trig(64, 12, 11, true);
  auto n1 = mod_constants_normalize(r);
  auto n2 = mod_constants_normalize(n1);
  CHECK(testutil::max_abs_diff(n1.coefficients(), n2.coefficients()) == 0.0);
}

TEST_CASE("parameter validation") {
  auto f = BoundaryFunction::from_modes(64, {{1, 1.0}});
  BesovParams bp;
  bp.p = 1.0;
  CHECK_THROWS_AS(besov_norm(f, bp), Error);
  bp.p = 2.0;
  bp.diagonal_band = 0;
  CHECK_THROWS_AS(besov_norm(f, bp), Error);
  auto s = f.samples();
  s[3] = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(besov_norm(BoundaryFunction::from_samples(s)), Error);
}
