#pragma once

#include <filesystem>
#include <string>

#include "lobsim/orderflow.hpp"

namespace lobsim {

/// Loads ModelParams from a JSON config file. Every key is optional and
/// falls back to the built-in default; `price_cdf_csv` / `size_curve_csv`
/// name sidecar CSV files resolved relative to the config file's directory.
/// The schema is documented in docs/params.schema.
ModelParams load_params(const std::filesystem::path& config_path);

/// Writes params.json plus price_cdf.csv and size_curve.csv into `dir`.
void save_params(const ModelParams& params, const std::filesystem::path& dir);

}  // namespace lobsim
