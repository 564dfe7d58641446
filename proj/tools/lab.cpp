// lab: experiment runner for the qclab library.
//
//   lab run <config.json>
//   lab plot <record.json> --kind curve|lift|decay [-o out.svg]
//   lab list-experiments
//
// Failures print {"error": {"kind", "message"}} on stdout and exit with 1.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qclab/lab.hpp"

namespace {

using qclab::lab::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qclab::Error("unresolvable_input", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw qclab::Error("invalid_config", path + ": " + e.what());
  }
}

int fail(const std::string& kind, const std::string& message) {
  std::cout << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiment runner for quasicircle and Beltrami computations"};
  app.require_subcommand(1);

  std::string config_path;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "config file")->required();
  run->add_flag("-q,--quiet", quiet, "do not print the record");

  std::string record_path, kind, out_path;
  auto* plot = app.add_subcommand("plot", "Render an SVG plot from a result record");
  plot->add_option("record", record_path, "record file")->required();
  plot->add_option("--kind", kind, "curve, lift or decay")->required();
  plot->add_option("-o,--output", out_path, "write to this file instead of stdout");

  auto* list = app.add_subcommand("list-experiments", "Print the experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what());
  }

  try {
    if (*list) {
      for (const auto& name : qclab::lab::experiment_names()) std::cout << name << "\n";
      return 0;
    }
    if (*run) {
      const json config = read_json(config_path);
      const auto base = std::filesystem::path(config_path).parent_path();
      const json record = qclab::lab::run(config, base);
      qclab::lab::write_outputs(record, config.value("output", json()), base);
      if (!quiet) std::cout << record.dump(2) << "\n";
      return 0;
    }
    const std::string svg = qclab::lab::emit_plot(read_json(record_path), kind);
    if (out_path.empty()) {
      std::cout << svg;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw qclab::Error("io_error", "cannot write " + out_path);
      f << svg;
    }
    return 0;
  } catch (const qclab::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
}
