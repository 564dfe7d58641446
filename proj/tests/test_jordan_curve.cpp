#include <gsl/gsl_integration.h>

#include <boost/math/special_functions/ellint_2.hpp>
#include <cmath>

#include "doctest.h"
#include "qclab/jordan_curve.hpp"
#include "test_util.hpp"

using namespace qclab;

namespace {

BoundaryFunction cos_mode(std::size_t n, int k, double eps) {
  return BoundaryFunction::from_function(n, [=](double t) { return cplx(eps * std::cos(k * t)); });
}

struct GslWorkspace {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
  ~GslWorkspace() { gsl_integration_workspace_free(w); }
};

template <class F>
double qags(F& f, double a, double b, double tol = 1e-12) {
  static GslWorkspace ws;
  gsl_function gf;
  gf.function = [](double x, void* p) { return (*static_cast<F*>(p))(x); };
  gf.params = &f;
  double r, err;
  gsl_integration_qags(&gf, a, b, 0.0, tol, 2000, ws.w, &r, &err);
  return r;
}

// Brute-force chord-arc search on a dense polyline approximation.
double brute_chord_arc(const std::vector<cplx>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) cum[k + 1] = cum[k] + std::abs(pts[(k + 1) % n] - pts[k]);
  const double len = cum[n];
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = cum[j] - cum[i];
      best = std::max(best, std::min(a, len - a) / std::abs(pts[i] - pts[j]));
    }
  return best;
}

}  // namespace

TEST_CASE("lengths and arcs") {
  auto c = JordanCurve::circle();
  CHECK(c.length() == doctest::Approx(kTwoPi).epsilon(1e-14));
  CHECK(c.smaller_arc(0.3, 0.3 + kPi) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(c.smaller_arc(0.1, 6.0) == doctest::Approx(kTwoPi - 5.9).epsilon(1e-13));
  auto sq = JordanCurve::polygon({0.0, 1.0, cplx(1, 1), cplx(0, 1)});
  CHECK(sq.length() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(std::abs(sq.point(1.5) - cplx(1, 0.5)) < 1e-15);
  CHECK(std::abs(sq.point(-0.25) - cplx(0, 0.25)) < 1e-15);

  // Ellipse with semi-axes 2 and 1 as a polar graph; oracle is 4 a E(e).
  auto g = BoundaryFunction::from_function(512, [](double t) {
    return cplx(-0.5 * std::log(std::cos(t) * std::cos(t) / 4.0 + std::sin(t) * std::sin(t)));
  });
  auto el = JordanCurve::polar(g);
  CHECK(el.length() == doctest::Approx(8.0 * boost::math::ellint_2(std::sqrt(0.75))).epsilon(1e-10));

  auto wavy = JordanCurve::polar(cos_mode(64, 3, 0.2));
  auto speed = [](double t) {
    const double r = std::exp(0.2 * std::cos(3 * t)), d = -0.6 * std::sin(3 * t);
    return r * std::sqrt(1 + d * d);
  };
  CHECK(wavy.length() == doctest::Approx(qags(speed, 0.0, kTwoPi)).epsilon(1e-11));
  for (double s : {0.0, 0.7, 3.1, 6.5, -1.0}) {
    const double th = wavy.parameter_at(s);
    CHECK(wavy.arclength_at(th) == doctest::Approx(s).epsilon(1e-13));
    const cplx z = wavy.point(s);
    CHECK(std::abs(z) == doctest::Approx(std::exp(0.2 * std::cos(3 * std::arg(z)))).epsilon(1e-14));
  }
  for (double s : {0.4, 2.0}) {
    double th = wavy.parameter_at(s);
    CHECK(qags(speed, 0.0, th) == doctest::Approx(s).epsilon(1e-11));
  }
}

TEST_CASE("invalid curves") {
  CHECK_THROWS_AS(JordanCurve::polygon({0.0, 1.0}), Error);
  CHECK_THROWS_AS(JordanCurve::polygon({0.0, 1.0, 1.0, cplx(0, 1)}), Error);
  try {
    JordanCurve::polygon({0.0, cplx(1, 1), 1.0, cplx(0, 1)});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == "not_simple");
  }
  CHECK_THROWS_AS(JordanCurve::circle(-1.0), Error);
}

TEST_CASE("chord-arc constant") {
  CHECK(chord_arc_constant(JordanCurve::circle()) == doctest::Approx(kPi / 2).epsilon(1e-10));
  CHECK(chord_arc_constant(JordanCurve::circle(3.0), 64) == doctest::Approx(kPi / 2).epsilon(1e-10));
  // Odd sampling misses the antipodal pair; refinement recovers it.
  CHECK(chord_arc_constant(JordanCurve::circle(), 63) == doctest::Approx(kPi / 2).epsilon(1e-8));

  auto g = BoundaryFunction::from_function(512, [](double t) {
    return cplx(-0.5 * std::log(std::cos(t) * std::cos(t) / 4.0 + std::sin(t) * std::sin(t)));
  });
  std::vector<cplx> dense(3000);
  for (std::size_t k = 0; k < dense.size(); ++k) {
    const double t = kTwoPi * k / dense.size();
    dense[k] = cplx(2 * std::cos(t), std::sin(t));
  }
  const double ell = chord_arc_constant(JordanCurve::polar(g), 256);
  CHECK(ell > kPi / 2 + 0.1);
  CHECK(ell == doctest::Approx(brute_chord_arc(dense)).epsilon(1e-4));

  auto sq = JordanCurve::polygon({0.0, 1.0, cplx(1, 1), cplx(0, 1)});
  CHECK(chord_arc_constant(sq, 64) == doctest::Approx(2.0).epsilon(1e-9));
  // Similarity invariance.
  std::vector<cplx> moved;
  for (cplx v : sq.vertices()) moved.push_back(cplx(3, -1) + 2.5 * std::polar(1.0, 0.7) * v);
  CHECK(chord_arc_constant(JordanCurve::polygon(moved), 64) == doctest::Approx(2.0).epsilon(1e-9));

  // Inward spike of half-width w and depth 1: the constant blows up as w -> 0.
  double prev = 0.0;
  for (double w : {0.1, 0.03, 0.01, 0.003}) {
    auto spike = JordanCurve::polygon({cplx(-1, -1), cplx(1, -1), cplx(1, 1), cplx(w, 1), cplx(0, 0), cplx(-w, 1), cplx(-1, 1)});
    const double k = chord_arc_constant(spike, 512);
    CHECK(k > prev);
    prev = k;
  }
  CHECK(prev > 300.0);
}

TEST_CASE("curve Besov norm") {
  auto c = JordanCurve::circle();
  for (double p : {1.5, 2.0, 3.0})
    for (auto rule : {QuadratureRule::Trapezoid, QuadratureRule::MidpointOffset}) {
      BesovParams bp;
      bp.p = p;
      bp.rule = rule;
      auto phi = testutil::random_trig(256, 10, 7);
      CHECK(curve_besov_norm(c, phi, bp) == doctest::Approx(besov_norm(phi, bp)).epsilon(1e-10));
    }
  CHECK(curve_besov_norm(c, BoundaryFunction::constant(64, 2.0)) == 0.0);

  // The integrand is invariant under z -> 2z with matched arc parametrization.
  auto e1 = BoundaryFunction::from_modes(256, {{1, 1.0}});
  for (double p : {1.5, 2.0, 3.0}) {
    BesovParams bp;
    bp.p = p;
    CHECK(curve_besov_norm(JordanCurve::circle(2.0), e1, bp) == doctest::Approx(curve_besov_norm(c, e1, bp)).epsilon(1e-12));
  }

  // Wavy polar graph with phi = e^{i theta}, theta the polar angle. The
  // oracle integrates in theta with GSL and never touches the arc-length table.
  auto wavy = JordanCurve::polar(cos_mode(64, 2, 0.1));
  const std::size_t n = 512;
  std::vector<cplx> samples(n);
  for (std::size_t j = 0; j < n; ++j) samples[j] = std::polar(1.0, wavy.parameter_at(wavy.length() * j / n));
  auto phi = BoundaryFunction::from_samples(samples);
  auto z = [](double t) { return std::polar(std::exp(0.1 * std::cos(2 * t)), t); };
  auto sp = [](double t) {
    const double r = std::exp(0.1 * std::cos(2 * t)), d = -0.2 * std::sin(2 * t);
    return r * std::sqrt(1 + d * d);
  };
  for (double p : {2.0, 3.0}) {
    auto outer = [&](double x) {
      auto inner = [&](double u) {
        const double y = x + u;
        if (u == 0.0) return 0.0;
        return std::pow(std::abs(std::polar(1.0, x) - std::polar(1.0, y)), p) / std::norm(z(x) - z(y)) * sp(y);
      };
      return sp(x) * (qags(inner, 0.0, kPi, 1e-11) + qags(inner, -kPi, 0.0, 1e-11));
    };
    static GslWorkspace ws2;
    gsl_function gf;
    gf.function = [](double x, void* q) { return (*static_cast<decltype(outer)*>(q))(x); };
    gf.params = &outer;
    double r, err;
    gsl_integration_qag(&gf, 0.0, kTwoPi, 0.0, 1e-10, 2000, GSL_INTEG_GAUSS21, ws2.w, &r, &err);
    BesovParams bp;
    bp.p = p;
    CHECK(curve_besov_norm(wavy, phi, bp) == doctest::Approx(std::pow(r, 1.0 / p)).epsilon(1e-6));
  }
  BesovParams bad;
  bad.p = 1.0;
  CHECK_THROWS_AS(curve_besov_norm(c, e1, bad), Error);
}

TEST_CASE("Bishop diagnostic") {
  auto c = JordanCurve::circle();
  auto t = bishop_diagnostic(c, 0.37, 12);
  REQUIRE(t.terms.size() == 12);
  for (int n = 1; n <= 12; ++n) {
    const double exact = std::ldexp(kTwoPi - std::ldexp(std::sin(kPi / std::ldexp(1.0, n)), n + 1), n);
    CHECK(std::abs(t.terms[n - 1] - exact) < 1e-8);
    if (n >= 4) {
      const double r = t.terms[n - 1] / t.terms[n - 2];
      CHECK(r > 0.45);
      CHECK(r < 0.55);
    }
  }
  CHECK(t.partial_sums.back() == doctest::Approx(std::accumulate(t.terms.begin(), t.terms.end(), 0.0)));

  auto lit = bishop_diagnostic(c, 0.0, 8, BishopReading::Literal);
  for (int n = 2; n <= 8; ++n)
    CHECK(lit.terms[n - 1] == doctest::Approx(std::ldexp(kTwoPi - 2 * n * std::sin(kPi / n), n)).epsilon(1e-12));

  auto wavy = JordanCurve::polar(cos_mode(64, 3, 0.15));
  for (double v : bishop_diagnostic(wavy, 1.0, 10).terms) CHECK(v >= 0.0);

  auto sq = JordanCurve::polygon({0.0, 1.0, cplx(1, 1), cplx(0, 1)});
  // From a vertex, 2^n points with n >= 2 land on every corner: the inscribed
  // polygon is the square itself.
  auto at_vertex = bishop_diagnostic(sq, 0.0, 12);
  CHECK(at_vertex.terms[0] == doctest::Approx(2 * (4 - 2 * std::sqrt(2.0))));
  for (int n = 2; n <= 12; ++n) CHECK(std::abs(at_vertex.terms[n - 1]) < 1e-9);
  // A generic base point cuts every corner and the terms stay bounded below.
  auto off = bishop_diagnostic(sq, 0.3, 12);
  for (int n = 3; n <= 12; ++n) CHECK(off.terms[n - 1] > 0.1);
  const double bases[] = {0.0, 0.3};
  auto mx = bishop_diagnostic_max(sq, bases, 12);
  for (int n = 3; n <= 12; ++n) CHECK(mx.terms[n - 1] == doctest::Approx(off.terms[n - 1]));

  std::vector<cplx> pts(64);
  for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = std::polar(1.0, kTwoPi * k / 64);
  CHECK_THROWS_AS(bishop_diagnostic(JordanCurve::sampled(pts), 0.0, 7), Error);
  CHECK_NOTHROW(bishop_diagnostic(JordanCurve::sampled(pts), 0.0, 6));
}

TEST_CASE("polar graph from samples") {
  auto rho = [](double th) { return std::exp(0.1 * std::cos(2 * th) + 0.05 * std::sin(3 * th)); };
  std::vector<cplx> pts(512);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double t = kTwoPi * k / pts.size();
    const double th = t + 0.2 * std::sin(t);
    pts[k] = std::polar(rho(th), th);
  }
  auto curve = polar_graph_from_samples(pts, 128);
  const auto& g = curve.log_radius();
  for (std::size_t j = 0; j < 128; ++j) {
    const double th = kTwoPi * j / 128;
    CHECK(std::abs(g.samples()[j].real() - std::log(rho(th))) < 1e-10);
  }
  std::vector<cplx> shifted = pts;
  for (auto& z : shifted) z += 3.0;
  CHECK_THROWS_AS(polar_graph_from_samples(shifted, 128), Error);
}

TEST_CASE("polar graph from samples with the first point just above the axis") {
  // arg(points[0]) is tiny and positive, so the accumulated angle can round to 2 pi.
  std::vector<cplx> pts(1024);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double t = kTwoPi * k / pts.size();
    pts[k] = std::polar(1.0 + 0.05 * std::cos(2 * t), t);
  }
  pts[0] = {pts[0].real(), 8.758e-19};
  auto curve = polar_graph_from_samples(pts, 256);
  const auto& g = curve.log_radius();
  double err = 0;
  for (std::size_t j = 0; j < 256; ++j) {
    const double th = kTwoPi * j / 256;
    err = std::max(err, std::abs(g.samples()[j].real() - std::log(1.0 + 0.05 * std::cos(2 * th))));
  }
  CHECK(err < 1e-6);
}
