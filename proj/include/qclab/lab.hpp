#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qclab/beltrami.hpp"
#include "qclab/circle_homeo.hpp"
#include "qclab/jordan_curve.hpp"

namespace qclab::lab {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Input objects. Every reader accepts either an inline object or
// {"file": "path"}, resolved against `base`.

/// {"type": "circle", "radius": r}
/// {"type": "polar", "g_coeffs": [[n, re, im], ...], "size": N}   g = Re sum c_n e^{in theta}
/// {"type": "polygon", "vertices": [[x, y], ...]}
/// {"type": "sampled", "points": [[x, y], ...]}
JordanCurve read_curve(const json& spec, const std::filesystem::path& base = {});
json write_curve(const JordanCurve& curve);

/// {"lattice": {"n", "half_width"}, "support": "disk", "values": [[re, im], ...]}, or a generator:
/// {"generator": "radial_bump" | "angular_bump" | "zero" | "constant", "k", "r_in", "r_out", "angle", "support"}
BeltramiCoefficient read_coefficient(const json& spec, const Lattice& lattice, const std::filesystem::path& base = {});
json write_coefficient(const BeltramiCoefficient& mu);

/// {"family": "identity" | "rotation" | "mobius" | "flat", "angle", "a", "beta", "nodes"}
CircleHomeomorphism read_homeomorphism(const json& spec);

/// {"kind": "modes", "modes": [[n, re, im], ...], "size": N}
/// {"kind": "random_trig", "degree", "seed", "size"}
BoundaryFunction read_function(const json& spec);

/// Seeded trig polynomial with modes 1 <= |n| <= degree and 1/(1+|n|) decay.
BoundaryFunction random_trig(std::size_t size, int degree, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiments

/// Names accepted by run().
std::vector<std::string> experiment_names();

/// Validates `config` ({"experiment", "params", "inputs", "output"}) and runs
/// the experiment. Returns the result record:
/// {"experiment", "params", "scalars", "tables", "series", "provenance"}.
/// Throws Error("invalid_config" | "unknown_experiment" | module kinds).
json run(const json& config, const std::filesystem::path& base = {});

/// Writes <dir>/<name>.json, one CSV per table and the requested SVG plots.
/// Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const json& record, const json& output,
                                                 const std::filesystem::path& base = {});

/// One row per line, header first; numbers in shortest round-trip form.
std::string table_csv(const json& table);

// ---------------------------------------------------------------------------
// Plots

/// Plot kinds: "curve" (closed path), "lift" (welding or trace lift), "decay"
/// (log-scale decay of every column of the "decay" table against its first column).
std::vector<std::string> plot_kinds();
/// Deterministic SVG: fixed viewport, fixed number formatting, no timestamps.
/// Throws Error("missing_series") if the record lacks the data for `kind`.
std::string emit_plot(const json& record, const std::string& kind);

}  // namespace qclab::lab
