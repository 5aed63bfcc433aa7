#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "aloe/benchmarks.hpp"
#include "aloe/estimator.hpp"
#include "aloe/halfspace.hpp"
#include "aloe/power_grid.hpp"

namespace aloe::io {

/// Reads and parses a JSON file. Throws Error(kInvalidInput) on I/O or syntax errors.
nlohmann::json read_json(const std::filesystem::path& path);

/// Problem file in whitened form {"d", "omega", "tau"} or raw form
/// {"eta", "sigma", "gamma", "kappa"}. Raw problems are whitened on load.
HalfSpaceProblem problem_from_json(const nlohmann::json& doc, double drop_tau = kDefaultDropTau);
GeneralGaussianSpec raw_spec_from_json(const nlohmann::json& doc);
bool is_raw_problem(const nlohmann::json& doc);

/// {"busses": [...], "lines": [...], "sigma": [[...]], "theta_bar": x}.
/// A missing or null p_min / p_max means an unbounded bus.
grid::GridCase grid_from_json(const nlohmann::json& doc);
nlohmann::json grid_to_json(const grid::GridCase& grid);

/// {"J", "tau", "angle_set": "full" | "prime"}.
PolygonSpec polygon_from_json(const nlohmann::json& doc);
/// {"d", "J", "target_log10_union_bound", "seed"}.
HighDimSpec highdim_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const AloeEstimate& estimate);

}  // namespace aloe::io
