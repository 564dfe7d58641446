#include <fstream>
#include <random>

#include "qclab/lab.hpp"

namespace qclab::lab {
namespace {

json load(const json& spec, const std::filesystem::path& base) {
  if (!spec.is_object()) throw Error("invalid_config", "input must be a JSON object");
  if (!spec.contains("file")) return spec;
  const std::filesystem::path path = base / spec.at("file").get<std::string>();
  std::ifstream in(path);
  if (!in) throw Error("unresolvable_input", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("invalid_config", path.string() + ": " + e.what());
  }
}

template <class T>
T field(const json& spec, const char* key, T fallback) {
  if (!spec.contains(key)) return fallback;
  try {
    return spec.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error("invalid_config", std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
T required(const json& spec, const char* key) {
  if (!spec.contains(key)) throw Error("invalid_config", std::string("missing field '") + key + "'");
  return field<T>(spec, key, T{});
}

// A complex number is a bare number or [re, im].
cplx to_cplx(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return {v[0].get<double>(), v[1].get<double>()};
  throw Error("invalid_config", "expected a number or [re, im]");
}

cplx cplx_field(const json& spec, const char* key, cplx fallback) {
  return spec.contains(key) ? to_cplx(spec.at(key)) : fallback;
}

std::vector<cplx> points(const json& arr) {
  if (!arr.is_array()) throw Error("invalid_config", "expected an array of points");
  std::vector<cplx> out;
  out.reserve(arr.size());
  for (const json& p : arr) out.push_back(to_cplx(p));
  return out;
}

json point_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<std::pair<int, cplx>> modes(const json& arr) {
  if (!arr.is_array()) throw Error("invalid_config", "expected an array of [n, re, im] modes");
  std::vector<std::pair<int, cplx>> out;
  for (const json& m : arr) {
    if (!m.is_array() || m.size() < 2 || m.size() > 3 || !m[0].is_number_integer())
      throw Error("invalid_config", "mode entries are [n, re] or [n, re, im]");
    out.emplace_back(m[0].get<int>(), cplx(m[1].get<double>(), m.size() == 3 ? m[2].get<double>() : 0.0));
  }
  return out;
}

Support support_from(const std::string& s) {
  if (s == "disk") return Support::Disk;
  if (s == "exterior") return Support::ExteriorDisk;
  if (s == "annulus") return Support::Annulus;
  if (s == "window") return Support::Window;
  throw Error("invalid_config", "unknown support '" + s + "'");
}

std::string support_name(Support s) {
  switch (s) {
    case Support::Disk: return "disk";
    case Support::ExteriorDisk: return "exterior";
    case Support::Annulus: return "annulus";
    case Support::Window: return "window";
  }
  return "window";
}

}  // namespace

JordanCurve read_curve(const json& raw, const std::filesystem::path& base) {
  const json spec = load(raw, base);
  const auto type = required<std::string>(spec, "type");
  if (type == "circle") return JordanCurve::circle(field(spec, "radius", 1.0));
  if (type == "polar") {
    const auto n = field<std::size_t>(spec, "size", 256);
    return JordanCurve::polar(BoundaryFunction::from_modes(n, modes(spec.at("g_coeffs"))));
  }
  if (type == "polygon") return JordanCurve::polygon(points(spec.at("vertices")));
  if (type == "sampled") return JordanCurve::sampled(points(spec.at("points")));
  throw Error("invalid_config", "unknown curve type '" + type + "'");
}

json write_curve(const JordanCurve& curve) {
  json out;
  switch (curve.kind()) {
    case CurveKind::PolarGraph: {
      const BoundaryFunction& g = curve.log_radius();
      json cs = json::array();
      // Only Re g is used. With r_n the coefficients of Re g, c_0 = r_0 and
      // c_n = 2 r_n (n >= 1) reproduce it as Re sum c_n e^{in theta}.
      for (int n = 0; n <= g.degree(); ++n) {
        const cplx r = 0.5 * (g.coefficient(n) + std::conj(g.coefficient(-n)));
        const cplx a = n == 0 ? cplx(r.real()) : 2.0 * r;
        if (std::abs(a) > 0.0) cs.push_back(json::array({n, a.real(), a.imag()}));
      }
      out = {{"type", "polar"}, {"size", g.size()}, {"g_coeffs", cs}};
      break;
    }
    case CurveKind::Polygon:
    case CurveKind::Sampled: {
      json pts = json::array();
      for (cplx z : curve.vertices()) pts.push_back(point_json(z));
      out = {{"type", curve.kind() == CurveKind::Polygon ? "polygon" : "sampled"},
             {curve.kind() == CurveKind::Polygon ? "vertices" : "points", pts}};
      break;
    }
  }
  return out;
}

BeltramiCoefficient read_coefficient(const json& raw, const Lattice& lattice, const std::filesystem::path& base) {
  const json spec = load(raw, base);
  if (spec.contains("values")) {
    Lattice lat = lattice;
    if (spec.contains("lattice")) {
      lat.n = required<std::size_t>(spec.at("lattice"), "n");
      lat.half_width = required<double>(spec.at("lattice"), "half_width");
    }
    return BeltramiCoefficient::from_values(lat, points(spec.at("values")),
                                            support_from(field<std::string>(spec, "support", "disk")));
  }
  const auto gen = required<std::string>(spec, "generator");
  const cplx k = cplx_field(spec, "k", 0.0);
  if (gen == "zero") return BeltramiCoefficient::zero(lattice, support_from(field<std::string>(spec, "support", "disk")));
  if (gen == "constant") return BeltramiCoefficient::constant(lattice, k);
  if (gen == "radial_bump")
    return BeltramiCoefficient::radial_bump(lattice, k, required<double>(spec, "r_in"), required<double>(spec, "r_out"));
  if (gen == "angular_bump")
    return BeltramiCoefficient::angular_bump(lattice, k, required<double>(spec, "r_in"), required<double>(spec, "r_out"),
                                             field(spec, "angle", 0.0));
  throw Error("invalid_config", "unknown coefficient generator '" + gen + "'");
}

json write_coefficient(const BeltramiCoefficient& mu) {
  json vals = json::array();
  for (cplx v : mu.values()) vals.push_back(point_json(v));
  return {{"lattice", {{"n", mu.lattice().n}, {"half_width", mu.lattice().half_width}}},
          {"support", support_name(mu.support())},
          {"values", vals}};
}

CircleHomeomorphism read_homeomorphism(const json& spec) {
  if (!spec.is_object()) throw Error("invalid_config", "homeomorphism must be a JSON object");
  const auto family = required<std::string>(spec, "family");
  const auto m = field<std::size_t>(spec, "nodes", 512);
  if (family == "identity") return CircleHomeomorphism::identity(m);
  if (family == "rotation") return CircleHomeomorphism::rotation(required<double>(spec, "angle"), m);
  if (family == "mobius") return CircleHomeomorphism::mobius(to_cplx(spec.at("a")), m);
  if (family == "flat") return CircleHomeomorphism::flat(required<double>(spec, "beta"), field<std::size_t>(spec, "nodes", 4096));
  throw Error("invalid_config", "unknown homeomorphism family '" + family + "'");
}

BoundaryFunction random_trig(std::size_t size, int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::pair<int, cplx>> ms;
  for (int k = -degree; k <= degree; ++k) {
    if (k == 0) continue;
    ms.emplace_back(k, cplx(g(rng), g(rng)) / (1.0 + std::abs(k)));
  }
  return BoundaryFunction::from_modes(size, ms);
}

BoundaryFunction read_function(const json& spec) {
  if (!spec.is_object()) throw Error("invalid_config", "function must be a JSON object");
  const auto kind = required<std::string>(spec, "kind");
  const auto n = field<std::size_t>(spec, "size", 256);
  if (kind == "modes") return BoundaryFunction::from_modes(n, modes(spec.at("modes")));
  if (kind == "random_trig") return random_trig(n, required<int>(spec, "degree"), required<std::uint64_t>(spec, "seed"));
  throw Error("invalid_config", "unknown function kind '" + kind + "'");
}

}  // namespace qclab::lab
