#include <chrono>
#include <fstream>
#include <functional>
#include <map>

#include "qclab/conformal_map.hpp"
#include "qclab/harmonic_disk.hpp"
#include "qclab/lab.hpp"

#ifndef QCLAB_VERSION
#define QCLAB_VERSION "dev"
#endif

namespace qclab::lab {
namespace {

struct Param {
  const char* key;
  json fallback;  // null: required unless optional
  json::value_t type;
  bool optional = false;
};

struct Context {
  json params;
  json inputs;
  std::filesystem::path base;
  json record;

  double num(const char* k) const { return params.at(k).get<double>(); }
  long integer(const char* k) const { return params.at(k).get<long>(); }
  std::size_t size(const char* k) const {
    const long v = integer(k);
    if (v <= 0) throw Error("invalid_config", std::string("parameter '") + k + "' must be positive");
    return static_cast<std::size_t>(v);
  }
  std::vector<double> list(const char* k) const { return params.at(k).get<std::vector<double>>(); }
  const json& input(const char* k) const {
    if (!inputs.contains(k)) throw Error("unresolvable_input", std::string("missing input '") + k + "'");
    return inputs.at(k);
  }
  void scalar(const std::string& k, double v) { record["scalars"][k] = v; }
  void table(const std::string& name, std::vector<std::string> columns, const std::vector<std::vector<double>>& rows) {
    record["tables"][name] = {{"columns", columns}, {"rows", rows}};
  }
  void series(const std::string& name, const std::vector<std::pair<double, double>>& pts) {
    json arr = json::array();
    for (auto [x, y] : pts) arr.push_back(json::array({x, y}));
    record["series"][name] = arr;
  }
  void curve_series(const JordanCurve& c, std::size_t n = 256) {
    std::vector<std::pair<double, double>> pts;
    for (cplx z : c.uniform_points(n)) pts.emplace_back(z.real(), z.imag());
    series("curve", pts);
  }
};

struct Experiment {
  std::string name;
  std::vector<Param> params;
  bool needs_seed;
  std::function<void(Context&)> body;
};

using V = json::value_t;
const json kRequired = nullptr;

std::vector<std::pair<double, double>> lift_series(const CircleHomeomorphism& h, std::size_t n = 256) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t j = 0; j <= n; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    pts.emplace_back(t, h.lift(t));
  }
  return pts;
}

// Riemann maps need polar graphs; sampled curves are converted on the way in.
JordanCurve polar_form(const JordanCurve& c, std::size_t size) {
  if (c.kind() != CurveKind::Sampled) return c;
  return polar_graph_from_samples(c.vertices(), size);
}

TheodorsenParams theodorsen(const Context& ctx) {
  TheodorsenParams tp;
  tp.nodes = ctx.size("nodes");
  return tp;
}

double sup_lift_deviation(const CircleHomeomorphism& h, std::size_t n = 1024) {
  double d = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    d = std::max(d, std::abs(h.lift(t) - t));
  }
  return d;
}

NormEstimateParams norm_params(const Context& ctx, double p) {
  NormEstimateParams np;
  np.p = p;
  np.grid = ctx.size("grid");
  np.degree = static_cast<int>(ctx.integer("degree"));
  np.ensemble_size = ctx.size("ensemble");
  np.ascent_steps = static_cast<std::size_t>(ctx.integer("ascent"));
  np.seed = ctx.params.at("seed").get<std::uint64_t>();
  return np;
}

Lattice lattice_param(const Context& ctx) {
  const json& l = ctx.params.at("lattice");
  Lattice lat;
  lat.n = l.value("n", std::size_t{512});
  lat.half_width = l.value("half_width", 4.0);
  lat.validate();
  return lat;
}

SolverParams solver_param(const Context& ctx) {
  SolverParams sp;
  sp.k_max = ctx.num("k_max");
  sp.residual_tol = ctx.num("residual_tol");
  sp.periodic = ctx.params.at("periodic").get<bool>();
  return sp;
}

// ---------------------------------------------------------------------------

void douglas(Context& ctx) {
  const auto n = ctx.size("size");
  const int degree = static_cast<int>(ctx.integer("degree"));
  const auto count = ctx.size("count");
  const auto seed = ctx.params.at("seed").get<std::uint64_t>();
  const double target = 1.0 / kTwoPi;
  double worst = 0.0;
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < count; ++k) {
    const double r = douglas_ratio(random_trig(n, degree, seed + k));
    worst = std::max(worst, std::abs(r - target) / target);
    rows.push_back({static_cast<double>(k), r});
  }
  ctx.table("ratios", {"index", "ratio"}, rows);
  ctx.scalar("target", target);
  ctx.scalar("max_relative_deviation", worst);
}

void vodopyanov(Context& ctx) {
  const auto ps = ctx.list("p");
  const auto nodes = ctx.size("homeo_nodes");
  std::vector<std::vector<double>> rows;
  std::vector<std::string> cols = {"a", "qs_constant"};
  for (double p : ps) cols.push_back("estimate_p" + json(p).dump());
  double excess = -1e300, prev_qs = 0.0;
  bool qs_monotone = true;
  for (double a : ctx.list("mobius_a")) {
    auto h = CircleHomeomorphism::mobius(a, nodes);
    const double qs = qs_constant(h).qs_constant;
    qs_monotone = qs_monotone && qs >= prev_qs;
    prev_qs = qs;
    std::vector<double> row = {a, qs};
    for (double p : ps) {
      const double e = operator_norm_estimate(h, norm_params(ctx, p)).estimate;
      excess = std::max(excess, e - qs);
      row.push_back(e);
    }
    rows.push_back(row);
  }
  ctx.table("mobius", cols, rows);
  ctx.scalar("mobius_max_excess_over_qs", excess);
  ctx.scalar("mobius_qs_monotone", qs_monotone ? 1.0 : 0.0);

  rows.clear();
  const double fp = ctx.num("flat_p");
  double first = 0.0, last = 0.0;
  bool all_exceed = true;
  const auto betas = ctx.list("flat_beta");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    auto h = CircleHomeomorphism::flat(betas[i], ctx.size("flat_nodes"));
    QsParams qp;
    qp.with_extension = false;
    const QsReport q = qs_constant(h, qp);
    all_exceed = all_exceed && q.exceeds_cap;
    const double e = operator_norm_estimate(h, norm_params(ctx, fp)).estimate;
    if (i == 0) first = e;
    last = e;
    rows.push_back({betas[i], q.qs_constant, q.exceeds_cap ? 1.0 : 0.0, e});
  }
  ctx.table("flat", {"beta", "qs_constant", "exceeds_cap", "estimate"}, rows);
  ctx.scalar("flat_growth", betas.empty() ? 0.0 : last / first);
  ctx.scalar("flat_all_exceed_cap", all_exceed ? 1.0 : 0.0);
}

void weld(Context& ctx) {
  const JordanCurve curve = read_curve(ctx.input("curve"), ctx.base);
  const JordanCurve polar = polar_form(curve, ctx.size("polar_size"));
  const auto pair = normalize_three_points(conformal_pair(polar, theodorsen(ctx)));
  const auto h = welding(pair, ctx.size("weld_nodes"));
  ctx.scalar("qs_constant", qs_constant(h).qs_constant);
  ctx.scalar("sup_deviation_from_identity", sup_lift_deviation(h));
  ctx.scalar("normalization_error", h.normalization_error());
  ctx.scalar("theodorsen_iterations", static_cast<double>(pair.interior.residuals().size()));
  ctx.series("lift", lift_series(h));
  ctx.curve_series(polar);
}

void transmit_exp(Context& ctx) {
  const JordanCurve curve = polar_form(read_curve(ctx.input("curve"), ctx.base), ctx.size("polar_size"));
  const BoundaryFunction phi = read_function(ctx.input("function"));
  const auto pair = normalize_three_points(conformal_pair(curve, theodorsen(ctx)));
  const auto h = welding(pair, ctx.size("weld_nodes"));
  const HarmonicField out = transmit(pair, poisson_extend(phi), h);
  const HarmonicField back = reverse_transmit(pair, out, h);
  double dev = 0.0;
  for (std::size_t j = 0; j < 512; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / 512.0;
    dev = std::max(dev, std::abs(out(std::polar(1.0, t)) - phi(h.lift(t))));
  }
  ctx.scalar("boundary_deviation", dev);
  ctx.scalar("roundtrip_error", coefficient_distance_mod_constants(trace(back), phi));
  std::vector<std::vector<double>> rows;
  for (double r : {1.0, 1.5, 2.0, 4.0})
    for (double t : {0.0, 1.0, 2.5}) {
      const cplx v = out(std::polar(r, t));
      rows.push_back({r, t, v.real(), v.imag()});
    }
  ctx.table("exterior_values", {"r", "theta", "re", "im"}, rows);
  if (ctx.params.at("estimate_norm").get<bool>()) {
    if (!ctx.params.contains("seed")) throw Error("missing_seed", "the norm estimate is randomized and needs a seed");
    const auto te = transmission_norm_estimate(pair, norm_params(ctx, ctx.num("norm_p")), ctx.size("weld_nodes"));
    ctx.scalar("norm_estimate", te.estimate);
    ctx.scalar("dilatation_bound", te.dilatation_bound);
  }
  ctx.series("lift", lift_series(h));
  ctx.curve_series(curve);
}

void chordarc(Context& ctx) {
  const JordanCurve curve = read_curve(ctx.input("curve"), ctx.base);
  const auto r = chord_arc_search(curve, ctx.size("pair_samples"));
  ctx.scalar("chord_arc_constant", r.value);
  ctx.scalar("s1", r.s1);
  ctx.scalar("s2", r.s2);
  ctx.scalar("length", curve.length());
  ctx.curve_series(curve);
}

BishopReading reading_param(const Context& ctx) {
  const auto r = ctx.params.at("reading").get<std::string>();
  if (r == "power_of_two") return BishopReading::PowerOfTwo;
  if (r == "literal") return BishopReading::Literal;
  throw Error("invalid_config", "reading must be 'power_of_two' or 'literal'");
}

void wp_diagnostic(Context& ctx) {
  const bool from_pair = ctx.inputs.contains("mu1") || ctx.inputs.contains("mu2");
  JordanCurve curve;
  const SolverParams sp = solver_param(ctx);
  if (from_pair) {
    const Lattice lat = lattice_param(ctx);
    const auto mu1 = read_coefficient(ctx.input("mu1"), lat, ctx.base);
    const auto mu2 = read_coefficient(ctx.input("mu2"), lat, ctx.base);
    curve = wp_curve_from_pair(mu1, mu2, sp, ctx.size("points"));
    if (ctx.params.at("check_identity").get<bool>()) {
      const auto chk = wp_composition_identity(mu1, mu2, sp, 256);
      ctx.scalar("identity_error", chk.max_error);
      ctx.scalar("solver_residual", chk.residual);
    }
    ctx.scalar("mp_norm_mu1", mu1.sup_norm() > 0.0 ? mp_norm(mu1, ctx.num("p")) : 0.0);
    ctx.scalar("mp_norm_mu2", mu2.sup_norm() > 0.0 ? mp_norm(mu2, ctx.num("p")) : 0.0);
  } else {
    curve = read_curve(ctx.input("curve"), ctx.base);
  }
  ctx.scalar("length", curve.length());
  ctx.scalar("chord_arc_constant", chord_arc_constant(curve, ctx.size("pair_samples")));

  const auto bases = ctx.list("base_points");
  const auto table = bishop_diagnostic_max(curve, bases, static_cast<int>(ctx.integer("n_max")), reading_param(ctx));
  std::vector<std::vector<double>> rows;
  double min_term = 1e300;
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    rows.push_back({static_cast<double>(table.levels[i]), static_cast<double>(table.points[i]), table.terms[i],
                    table.partial_sums[i], table.base_points[i]});
    min_term = std::min(min_term, table.terms[i]);
  }
  ctx.table("bishop", {"n", "points", "term", "partial_sum", "base"}, rows);
  ctx.scalar("bishop_min_term", min_term);
  ctx.scalar("bishop_last_term", table.terms.empty() ? 0.0 : table.terms.back());

  if (from_pair && ctx.params.at("welding").get<bool>()) {
    const JordanCurve polar = polar_form(curve, ctx.size("polar_size"));
    TheodorsenParams tp;
    tp.nodes = ctx.size("nodes");
    const auto pair = normalize_three_points(conformal_pair(polar, tp));
    const auto h = welding(pair, ctx.size("weld_nodes"));
    ctx.scalar("welding_qs_constant", qs_constant(h).qs_constant);
    const auto phi = BoundaryFunction::from_modes(256, {{1, 1.0}, {-2, cplx(0.0, 0.5)}, {3, 0.25}});
    const auto back = reverse_transmit(pair, transmit(pair, poisson_extend(phi), h), h);
    ctx.scalar("transmit_roundtrip_error", coefficient_distance_mod_constants(trace(back), phi));
    ctx.series("lift", lift_series(h));
  }
  ctx.curve_series(curve);
}

void convergence(Context& ctx) {
  const auto family = ctx.params.at("family").get<std::string>();
  const double a = ctx.num("a");
  const auto levels = ctx.list("levels");
  const auto ps = ctx.list("p");
  const auto size = ctx.size("size");
  std::vector<CircleHomeomorphism> seq;
  CircleHomeomorphism limit;
  const auto nodes = ctx.size("homeo_nodes");
  if (family == "mobius") {
    for (double n : levels) seq.push_back(CircleHomeomorphism::mobius(a * (1.0 - std::ldexp(1.0, -static_cast<int>(n))), nodes));
    limit = CircleHomeomorphism::mobius(a, nodes);
  } else if (family == "rotation") {
    for (double n : levels) seq.push_back(CircleHomeomorphism::rotation(1.0 / n, nodes));
    limit = CircleHomeomorphism::identity(nodes);
  } else if (family == "constant") {
    for (std::size_t i = 0; i < levels.size(); ++i) seq.push_back(CircleHomeomorphism::mobius(a, nodes));
    limit = CircleHomeomorphism::mobius(a, nodes);
  } else {
    throw Error("invalid_config", "family must be 'mobius', 'rotation' or 'constant'");
  }
  std::vector<BoundaryFunction> phis;
  const auto seed = ctx.params.at("seed").get<std::uint64_t>();
  for (std::size_t k = 0; k < ctx.size("count"); ++k)
    phis.push_back(random_trig(size, static_cast<int>(ctx.integer("degree")), seed + k));

  std::vector<std::vector<double>> rows(levels.size());
  std::vector<std::string> cols = {"n"};
  for (std::size_t i = 0; i < levels.size(); ++i) rows[i].push_back(levels[i]);
  double closed_form = 0.0;
  const auto e1 = BoundaryFunction::from_modes(size, {{1, 1.0}});
  for (double p : ps) {
    cols.push_back("p" + json(p).dump());
    const auto t = strong_convergence_probe(seq, limit, phis, p);
    for (std::size_t i = 0; i < levels.size(); ++i) rows[i].push_back(*std::max_element(t[i].begin(), t[i].end()));
    ctx.scalar("final_p" + json(p).dump(), rows.back().back());
    if (family == "rotation") {
      const auto c = strong_convergence_probe(seq, limit, {e1}, p);
      const double factor = std::pow(kTwoPi * chordal_power_integral(p), 1.0 / p);
      for (std::size_t i = 0; i < levels.size(); ++i)
        closed_form = std::max(closed_form, std::abs(c[i][0] - std::abs(std::polar(1.0, 1.0 / levels[i]) - 1.0) * factor));
    }
  }
  ctx.table("decay", cols, rows);
  if (family == "rotation") ctx.scalar("closed_form_error", closed_form);
}

void beltrami(Context& ctx) {
  const Lattice lat = lattice_param(ctx);
  const SolverParams sp = solver_param(ctx);
  const json& spec = ctx.input("mu");
  const auto mu = read_coefficient(spec, lat, ctx.base);
  const auto norm = ctx.params.at("normalization").get<std::string>();
  Normalization nz;
  if (norm == "infinity") nz = Normalization::Infinity;
  else if (norm == "zero_infinity") nz = Normalization::ZeroInfinity;
  else if (norm == "disk") nz = Normalization::DiskThreePoints;
  else throw Error("invalid_config", "normalization must be 'infinity', 'zero_infinity' or 'disk'");

  const QcMapGrid f = solve_beltrami(mu, nz, sp);
  ctx.scalar("residual", f.residual());
  ctx.scalar("iterations", f.iterations());
  ctx.scalar("min_jacobian", f.min_jacobian());
  ctx.scalar("sup_norm", mu.sup_norm());
  if (nz == Normalization::DiskThreePoints) {
    ctx.scalar("circle_error", f.circle_error());
    const auto h = boundary_trace_qs(f);
    ctx.scalar("trace_qs_constant", qs_constant(h).qs_constant);
    ctx.series("lift", lift_series(h));
  }
  if (mu.support() != Support::Window && mu.sup_norm() > 0.0) ctx.scalar("mp_norm", mp_norm(mu, ctx.num("p")));
  // For the zero generator this is the distance to the identity.
  if (const auto gen = spec.value("generator", ""); gen == "constant" || gen == "zero") {
    const cplx k = mu.values().front();
    double e = 0.0;
    for (cplx z : {cplx(0.3, 0.2), cplx(-1.1, 0.7), cplx(0.0, -1.9)}) {
      const cplx shift = nz == Normalization::ZeroInfinity ? cplx(0.0) : f(0.0);
      e = std::max(e, std::abs(f(z) - shift - (z + k * std::conj(z))));
    }
    ctx.scalar("affine_error", e);
  }
  if (ctx.params.at("doubling").get<bool>()) {
    Lattice coarse = lat;
    coarse.n = lat.n / 2;
    const auto mc = read_coefficient(spec, coarse, ctx.base);
    ctx.scalar("residual_half_grid", solve_beltrami(mc, nz, sp).residual());
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t j = 0; j < 256; ++j) {
    const cplx w = f(std::polar(1.0, kTwoPi * static_cast<double>(j) / 256.0));
    pts.emplace_back(w.real(), w.imag());
  }
  ctx.series("curve", pts);
}

// E/P inverse pair and multiplier identities on a seeded ensemble.
void operators(Context& ctx) {
  const auto size = ctx.size("size");
  const int degree = static_cast<int>(ctx.integer("degree"));
  const auto seed = ctx.params.at("seed").get<std::uint64_t>();
  double ep = 0.0, pe = 0.0, hh = 0.0, split = 0.0;
  for (std::size_t k = 0; k < ctx.size("count"); ++k) {
    const auto phi = random_trig(size, degree, seed + k);
    for (Domain d : {Domain::Disk, Domain::ExteriorDisk}) {
      const HarmonicField u = poisson_extend(phi, d);
      ep = std::max(ep, coefficient_distance_mod_constants(trace(u), phi));
      const HarmonicField v = poisson_extend(trace(u), d);
      pe = std::max(pe, coefficient_distance_mod_constants(v.boundary(), u.boundary()));
    }
    hh = std::max(hh, coefficient_distance_mod_constants(hilbert_transform(hilbert_transform(phi)), phi));
    const auto hp = hilbert_transform(phi);
    const auto sum = cplx(0.5) * (phi + hp) + cplx(0.5) * (phi - hp);
    split = std::max(split, coefficient_distance_mod_constants(sum, phi));
  }
  ctx.scalar("trace_of_extension", ep);
  ctx.scalar("extension_of_trace", pe);
  ctx.scalar("hilbert_squared", hh);
  ctx.scalar("projection_sum", split);
}

// psi = P[phi] + (1 - |z|^2)^e with phi given by modes; recovers both parts.
void dirichlet_split_exp(Context& ctx) {
  const BoundaryFunction phi = read_function(ctx.input("harmonic"));
  const double e = ctx.num("exponent");
  const double amp = ctx.num("amplitude");
  const HarmonicField u = poisson_extend(phi);
  auto psi = [&](cplx z) { return u(z) + amp * std::pow(std::max(0.0, 1.0 - std::norm(z)), e); };
  SplitParams sp;
  sp.p = ctx.num("p");
  const auto s = dirichlet_split(psi, sp);
  double eh = 0.0;
  for (std::size_t j = 0; j < 64; ++j)
    for (double r : {0.0, 0.3, 0.6, 0.9}) {
      const cplx z = std::polar(r, kTwoPi * static_cast<double>(j) / 64.0);
      eh = std::max(eh, std::abs(s.harmonic(z) - u(z)));
    }
  double er = 0.0;
  for (std::size_t i = 0; i < s.radii.size(); ++i)
    for (std::size_t j = 0; j < s.angles.size(); ++j)
      er = std::max(er, std::abs(s.remainder[i * s.angles.size() + j] - amp * std::pow(1.0 - s.radii[i] * s.radii[i], e)));
  ctx.scalar("harmonic_error", eh);
  ctx.scalar("remainder_error", er);
  ctx.scalar("cross_term", s.cross_term);
  ctx.scalar("trace_residual", s.trace_residual);
  ctx.scalar("harmonic_norm", s.harmonic_norm);
}

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> list = {
      {"douglas",
       {{"size", 1024, V::number_integer}, {"degree", 16, V::number_integer}, {"count", 50, V::number_integer},
        {"seed", kRequired, V::number_integer}},
       true, douglas},
      {"vodopyanov",
       {{"mobius_a", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}, V::array}, {"p", {1.5, 2.0, 3.0}, V::array},
        {"flat_beta", {1.0, 2.0, 4.0, 8.0, 16.0}, V::array}, {"flat_p", 2.0, V::number_float},
        {"flat_nodes", 4096, V::number_integer}, {"homeo_nodes", 1024, V::number_integer},
        {"grid", 512, V::number_integer}, {"degree", 16, V::number_integer}, {"ensemble", 16, V::number_integer},
        {"ascent", 4, V::number_integer}, {"seed", kRequired, V::number_integer}},
       true, vodopyanov},
      {"weld",
       {{"nodes", 512, V::number_integer}, {"weld_nodes", 1024, V::number_integer}, {"polar_size", 256, V::number_integer}},
       false, weld},
      {"transmit",
       {{"nodes", 512, V::number_integer}, {"weld_nodes", 1024, V::number_integer}, {"polar_size", 256, V::number_integer},
        {"estimate_norm", false, V::boolean}, {"norm_p", 2.0, V::number_float}, {"grid", 512, V::number_integer},
        {"degree", 16, V::number_integer}, {"ensemble", 16, V::number_integer}, {"ascent", 4, V::number_integer},
        {"seed", kRequired, V::number_integer, true}},
       false, transmit_exp},
      {"chordarc", {{"pair_samples", 512, V::number_integer}}, false, chordarc},
      {"wp-diagnostic",
       {{"n_max", 12, V::number_integer}, {"base_points", {0.0}, V::array}, {"reading", "power_of_two", V::string},
        {"pair_samples", 512, V::number_integer}, {"lattice", {{"n", 512}, {"half_width", 4.0}}, V::object},
        {"points", 1024, V::number_integer}, {"k_max", 0.5, V::number_float}, {"residual_tol", 1e-2, V::number_float},
        {"periodic", false, V::boolean}, {"check_identity", true, V::boolean}, {"welding", true, V::boolean},
        {"polar_size", 256, V::number_integer}, {"nodes", 512, V::number_integer},
        {"weld_nodes", 1024, V::number_integer}, {"p", 2.0, V::number_float}},
       false, wp_diagnostic},
      {"convergence",
       {{"family", "mobius", V::string}, {"a", 0.5, V::number_float},
        {"levels", {1, 2, 4, 8, 16, 32, 64}, V::array}, {"p", {1.5, 2.0, 3.0}, V::array},
        {"count", 10, V::number_integer}, {"degree", 8, V::number_integer}, {"size", 256, V::number_integer},
        {"homeo_nodes", 1024, V::number_integer}, {"seed", kRequired, V::number_integer}},
       true, convergence},
      {"beltrami",
       {{"lattice", {{"n", 512}, {"half_width", 4.0}}, V::object}, {"normalization", "infinity", V::string},
        {"periodic", false, V::boolean}, {"k_max", 0.5, V::number_float}, {"residual_tol", 1e-2, V::number_float},
        {"p", 2.0, V::number_float}, {"doubling", false, V::boolean}},
       false, beltrami},
      {"operators",
       {{"size", 256, V::number_integer}, {"degree", 16, V::number_integer}, {"count", 10, V::number_integer},
        {"seed", kRequired, V::number_integer}},
       true, operators},
      {"dirichlet-split",
       {{"exponent", 2.0, V::number_float}, {"amplitude", 1.0, V::number_float}, {"p", 2.0, V::number_float}},
       false, dirichlet_split_exp},
  };
  return list;
}

bool type_matches(const json& v, json::value_t t) {
  switch (t) {
    case V::number_integer: return v.is_number_integer();
    case V::number_float: return v.is_number();
    case V::boolean: return v.is_boolean();
    case V::string: return v.is_string();
    case V::array: return v.is_array();
    case V::object: return v.is_object();
    default: return true;
  }
}

json validate(const Experiment& ex, const json& given) {
  if (!given.is_object()) throw Error("invalid_config", "'params' must be an object");
  json out = json::object();
  for (const auto& [key, value] : given.items()) {
    const auto it = std::find_if(ex.params.begin(), ex.params.end(), [&](const Param& p) { return key == p.key; });
    if (it == ex.params.end()) throw Error("invalid_config", "unknown parameter '" + key + "' for " + ex.name);
    if (!type_matches(value, it->type)) throw Error("invalid_config", "parameter '" + key + "' has the wrong type");
  }
  for (const Param& p : ex.params) {
    if (given.contains(p.key)) out[p.key] = given.at(p.key);
    else if (p.optional) continue;
    else if (p.fallback.is_null())
      throw Error(std::string(p.key) == "seed" ? "missing_seed" : "invalid_config",
                  std::string("parameter '") + p.key + "' is required for " + ex.name);
    else out[p.key] = p.fallback;
  }
  return out;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.name);
  return out;
}

json run(const json& config, const std::filesystem::path& base) {
  if (!config.is_object() || !config.contains("experiment") || !config.at("experiment").is_string())
    throw Error("invalid_config", "config needs an 'experiment' name");
  const auto name = config.at("experiment").get<std::string>();
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const Experiment& e) { return e.name == name; });
  if (it == reg.end()) throw Error("unknown_experiment", "no experiment named '" + name + "'");
  for (const auto& [key, value] : config.items())
    if (key != "experiment" && key != "params" && key != "inputs" && key != "output")
      throw Error("invalid_config", "unknown top-level key '" + key + "'");

  Context ctx;
  ctx.params = validate(*it, config.value("params", json::object()));
  ctx.inputs = config.value("inputs", json::object());
  if (!ctx.inputs.is_object()) throw Error("invalid_config", "'inputs' must be an object");
  ctx.base = base;
  ctx.record = {{"experiment", name},
                {"params", ctx.params},
                {"inputs", ctx.inputs},
                {"scalars", json::object()},
                {"tables", json::object()},
                {"series", json::object()}};
  const auto t0 = std::chrono::steady_clock::now();
  it->body(ctx);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ctx.record["provenance"] = {{"version", QCLAB_VERSION}, {"runtime_seconds", secs}};
  return ctx.record;
}

std::string table_csv(const json& table) {
  std::string out;
  const auto& cols = table.at("columns");
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i].get<std::string>();
  out += "\n";
  for (const auto& row : table.at("rows")) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i].dump();
    out += "\n";
  }
  return out;
}

std::vector<std::filesystem::path> write_outputs(const json& record, const json& output,
                                                 const std::filesystem::path& base) {
  std::vector<std::filesystem::path> written;
  if (!output.is_object()) return written;
  const std::filesystem::path dir = base / output.value("dir", std::string("."));
  const std::string name = output.value("name", record.at("experiment").get<std::string>());
  std::filesystem::create_directories(dir);
  auto put = [&](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("io_error", "cannot write " + p.string());
    f << text;
    written.push_back(p);
  };
  put(dir / (name + ".json"), record.dump(2) + "\n");
  for (const auto& [tname, table] : record.at("tables").items()) put(dir / (name + "_" + tname + ".csv"), table_csv(table));
  for (const auto& kind : output.value("svg", json::array())) {
    const auto k = kind.get<std::string>();
    put(dir / (name + "_" + k + ".svg"), emit_plot(record, k));
  }
  return written;
}

}  // namespace qclab::lab
