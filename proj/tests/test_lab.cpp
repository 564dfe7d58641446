#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "doctest.h"
#include "qclab/lab.hpp"

using namespace qclab;
using qclab::lab::json;

namespace {

std::string error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("qclab_test_lab_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct Cli {
  int status;
  std::string out;
};

Cli lab_cli(const std::string& args) {
  const std::string cmd = std::string(QCLAB_LAB_BINARY) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int raw = pclose(p);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

}  // namespace

TEST_CASE("polar curves survive a write/read round trip") {
  const json spec = {{"type", "polar"}, {"size", 128}, {"g_coeffs", {{0, 0.01, 0.0}, {2, 0.05, 0.02}, {3, -0.01, 0.0}}}};
  const JordanCurve c = lab::read_curve(spec);
  const JordanCurve back = lab::read_curve(lab::write_curve(c));
  const auto& a = c.log_radius().samples();
  const auto& b = back.log_radius().samples();
  REQUIRE(a.size() == b.size());
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j].real() - b[j].real()) < 1e-14);
  // g = Re sum c_n e^{in theta}: at theta = 0 that is 0.01 + 0.05 - 0.01.
  CHECK(std::abs(a[0].real() - 0.05) < 1e-14);
}

TEST_CASE("polygons and sampled curves round trip") {
  const json sq = {{"type", "polygon"}, {"vertices", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}}};
  const JordanCurve c = lab::read_curve(sq);
  CHECK(c.kind() == CurveKind::Polygon);
  CHECK(lab::write_curve(c) == sq);
  CHECK(std::abs(c.length() - 4.0) < 1e-14);
  const json circle = {{"type", "circle"}, {"radius", 2.0}};
  CHECK(std::abs(lab::read_curve(circle).length() - 4.0 * kPi) < 1e-9);
}

TEST_CASE("inputs can come from files relative to the config") {
  const auto dir = scratch("files");
  std::ofstream(dir / "curve.json") << R"({"type": "polygon", "vertices": [[0, 0], [2, 0], [0, 2]]})";
  const JordanCurve c = lab::read_curve({{"file", "curve.json"}}, dir);
  CHECK(c.vertices().size() == 3);
  CHECK(error_kind([&] { lab::read_curve({{"file", "absent.json"}}, dir); }) == "unresolvable_input");
  std::ofstream(dir / "broken.json") << "{not json";
  CHECK(error_kind([&] { lab::read_curve({{"file", "broken.json"}}, dir); }) == "invalid_config");
}

TEST_CASE("coefficients: generators and value round trip") {
  const Lattice lat{64, 4.0};
  const auto mu = lab::read_coefficient({{"generator", "radial_bump"}, {"k", {0.1, 0.05}}, {"r_in", 0.3}, {"r_out", 0.8}}, lat);
  CHECK(mu.support() == Support::Disk);
  CHECK(std::abs(mu.sup_norm() - std::abs(cplx(0.1, 0.05))) < 1e-2);
  const auto back = lab::read_coefficient(lab::write_coefficient(mu), Lattice{8, 1.0});
  CHECK(back.lattice().n == 64);
  CHECK(back.values() == mu.values());
  CHECK(back.support() == mu.support());
  const auto ext = lab::read_coefficient({{"generator", "zero"}, {"support", "exterior"}}, lat);
  CHECK(ext.support() == Support::ExteriorDisk);
  CHECK(error_kind([&] { lab::read_coefficient({{"generator", "wavy"}}, lat); }) == "invalid_config");
  CHECK(error_kind([&] { lab::read_coefficient({{"generator", "radial_bump"}, {"k", 0.1}}, lat); }) == "invalid_config");
  CHECK(error_kind([&] { lab::read_coefficient({{"generator", "zero"}, {"support", "torus"}}, lat); }) ==
        "invalid_config");
}

TEST_CASE("homeomorphisms and functions") {
  const auto h = lab::read_homeomorphism({{"family", "rotation"}, {"angle", 0.5}, {"nodes", 256}});
  CHECK(std::abs(h.lift(1.0) - 1.5) < 1e-12);
  CHECK(error_kind([] { lab::read_homeomorphism({{"family", "spiral"}}); }) == "invalid_config");
  const auto f = lab::read_function({{"kind", "modes"}, {"modes", {{1, 1.0}}}, {"size", 32}});
  CHECK(std::abs(f(0.7) - std::polar(1.0, 0.7)) < 1e-13);
  CHECK(error_kind([] { lab::read_function({{"kind", "random_trig"}, {"degree", 4}}); }) == "invalid_config");
  const auto a = lab::read_function({{"kind", "random_trig"}, {"degree", 4}, {"seed", 9}, {"size", 64}});
  const auto b = lab::random_trig(64, 4, 9);
  CHECK(a.samples() == b.samples());
  CHECK(lab::random_trig(64, 4, 10).samples() != b.samples());
}

TEST_CASE("config validation") {
  CHECK(error_kind([] { lab::run({{"experiment", "nope"}}); }) == "unknown_experiment");
  CHECK(error_kind([] { lab::run({{"params", json::object()}}); }) == "invalid_config");
  CHECK(error_kind([] { lab::run({{"experiment", "douglas"}, {"params", {{"count", 1}}}}); }) == "missing_seed");
  CHECK(error_kind([] { lab::run({{"experiment", "douglas"}, {"params", {{"seed", 1}, {"colour", 2}}}}); }) ==
        "invalid_config");
  CHECK(error_kind([] { lab::run({{"experiment", "douglas"}, {"params", {{"seed", "one"}}}}); }) == "invalid_config");
  CHECK(error_kind([] { lab::run({{"experiment", "douglas"}, {"params", {{"seed", 1}}}, {"extra", 1}}); }) ==
        "invalid_config");
  CHECK(error_kind([] { lab::run({{"experiment", "chordarc"}}); }) == "unresolvable_input");
  const json t = {{"experiment", "transmit"},
                  {"params", {{"estimate_norm", true}}},
                  {"inputs", {{"curve", {{"type", "circle"}}}, {"function", {{"kind", "modes"}, {"modes", {{1, 1.0}}}}}}}};
  CHECK(error_kind([&] { lab::run(t); }) == "missing_seed");
  const auto names = lab::experiment_names();
  for (const char* n : {"douglas", "vodopyanov", "weld", "transmit", "chordarc", "wp-diagnostic", "convergence", "beltrami"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
}

TEST_CASE("records are deterministic and carry defaults") {
  const json cfg = {{"experiment", "douglas"}, {"params", {{"size", 256}, {"degree", 8}, {"count", 3}, {"seed", 4}}}};
  const json a = lab::run(cfg), b = lab::run(cfg);
  CHECK(a.at("scalars") == b.at("scalars"));
  CHECK(a.at("tables") == b.at("tables"));
  CHECK(a.at("params").at("count") == 3);
  CHECK(a.at("scalars").at("max_relative_deviation").get<double>() < 0.01);
  CHECK(a.at("provenance").contains("version"));
  CHECK(a.at("provenance").at("runtime_seconds").get<double>() >= 0.0);
  const json c = lab::run({{"experiment", "chordarc"}, {"inputs", {{"curve", {{"type", "circle"}}}}}});
  CHECK(c.at("params").at("pair_samples") == 512);
}

TEST_CASE("welding of the circle is the identity") {
  const json r = lab::run({{"experiment", "weld"}, {"inputs", {{"curve", {{"type", "circle"}}}}}});
  CHECK(r.at("scalars").at("sup_deviation_from_identity").get<double>() < 1e-8);
  CHECK(r.at("series").at("lift").size() == 257);
}

TEST_CASE("a constant sequence converges immediately") {
  const json r = lab::run({{"experiment", "convergence"},
                           {"params", {{"family", "constant"}, {"levels", {1, 2, 3}}, {"count", 2}, {"seed", 5}}}});
  for (const auto& row : r.at("tables").at("decay").at("rows"))
    for (std::size_t i = 1; i < row.size(); ++i) CHECK(row.at(i).get<double>() == 0.0);
  CHECK(error_kind([] {
          lab::run({{"experiment", "convergence"}, {"params", {{"family", "spiral"}, {"seed", 1}}}});
        }) == "invalid_config");
}

TEST_CASE("plots are byte-identical across runs") {
  const json cfg = {{"experiment", "weld"}, {"inputs", {{"curve", {{"type", "circle"}}}}}};
  json a = lab::run(cfg), b = lab::run(cfg);
  a["provenance"]["runtime_seconds"] = 1.0;
  for (const auto& kind : lab::plot_kinds()) {
    if (kind == "decay") continue;
    const std::string s = lab::emit_plot(a, kind);
    CHECK(s == lab::emit_plot(b, kind));
    CHECK(s.rfind("<svg", 0) == 0);
    CHECK(s.find("</svg>") != std::string::npos);
  }
  CHECK(error_kind([&] { lab::emit_plot(a, "decay"); }) == "missing_series");
  CHECK(error_kind([&] { lab::emit_plot(json{{"experiment", "x"}}, "curve"); }) == "missing_series");
  CHECK(error_kind([&] { lab::emit_plot(a, "pie"); }) == "invalid_argument");

  json d = {{"experiment", "convergence"},
            {"tables", {{"decay", {{"columns", {"n", "p2"}}, {"rows", {{1, 0.5}, {2, 0.01}, {4, 0.0}}}}}}}};
  const std::string s = lab::emit_plot(d, "decay");
  CHECK(s == lab::emit_plot(d, "decay"));
  CHECK(s.find(">p2</text>") != std::string::npos);
}

TEST_CASE("csv tables and output files") {
  const json t = {{"columns", {"n", "value"}}, {"rows", {{1, 0.5}, {2, 0.25}}}};
  CHECK(lab::table_csv(t) == "n,value\n1,0.5\n2,0.25\n");
  const auto dir = scratch("outputs");
  const json r = lab::run({{"experiment", "weld"}, {"inputs", {{"curve", {{"type", "circle"}}}}}});
  const auto written = lab::write_outputs(r, {{"dir", "o"}, {"name", "w"}, {"svg", {"lift"}}}, dir);
  CHECK(written.size() == 2);
  CHECK(std::filesystem::exists(dir / "o" / "w.json"));
  CHECK(std::filesystem::exists(dir / "o" / "w_lift.svg"));
  CHECK(lab::write_outputs(r, json(), dir).empty());
}

TEST_CASE("command line interface") {
  const auto dir = scratch("cli");
  const Cli list = lab_cli("list-experiments");
  CHECK(list.status == 0);
  CHECK(list.out.find("wp-diagnostic\n") != std::string::npos);

  std::ofstream(dir / "bad.json") << R"({"experiment": "nope"})";
  const Cli bad = lab_cli("run " + (dir / "bad.json").string());
  CHECK(bad.status == 1);
  const json err = json::parse(bad.out);
  CHECK(err.at("error").at("kind") == "unknown_experiment");
  CHECK(err.at("error").contains("message"));

  const Cli missing = lab_cli("run " + (dir / "absent.json").string());
  CHECK(missing.status == 1);
  CHECK(json::parse(missing.out).at("error").at("kind") == "unresolvable_input");

  const Cli usage = lab_cli("frobnicate");
  CHECK(usage.status == 1);
  CHECK(json::parse(usage.out).at("error").at("kind") == "usage");

  std::ofstream(dir / "chord.json") << R"({"experiment": "chordarc", "inputs": {"curve": {"type": "circle"}},
    "output": {"dir": "res", "name": "c", "svg": ["curve"]}})";
  const Cli ok = lab_cli("run " + (dir / "chord.json").string());
  CHECK(ok.status == 0);
  const json rec = json::parse(ok.out);
  CHECK(std::abs(rec.at("scalars").at("chord_arc_constant").get<double>() - kPi / 2) < 1e-3);
  CHECK(std::filesystem::exists(dir / "res" / "c.json"));
  const std::string svg_a = lab_cli("plot " + (dir / "res" / "c.json").string() + " --kind curve").out;
  const std::string svg_b = lab_cli("plot " + (dir / "res" / "c.json").string() + " --kind curve").out;
  CHECK(svg_a == svg_b);
  CHECK(svg_a.rfind("<svg", 0) == 0);
  const Cli nolift = lab_cli("plot " + (dir / "res" / "c.json").string() + " --kind lift");
  CHECK(nolift.status == 1);
  CHECK(json::parse(nolift.out).at("error").at("kind") == "missing_series");
}
