#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "mlg/types.hpp"

namespace mlg {

using KeyValueMap = std::map<std::string, std::string>;

// Flat "key = value" lines; '#' starts a comment; blank lines are ignored.
// Section-like keys use dotted prefixes, e.g. solver.0.lambda.
KeyValueMap parse_key_values(const std::filesystem::path& path);
KeyValueMap parse_key_values_text(const std::string& text);

// Recognized keys: k, d, delta, gamma, eigen_order, seed, oos.d,
// kmeans.restarts, kmeans.max_iters, kmeans.tol, solver.<v>.lambda,
// solver.<v>.id, solver.<v>.<anything-else> (passed through as extra).
// Unknown top-level keys raise ConfigError.
PipelineConfig pipeline_config_from_kv(const KeyValueMap& kv);

PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace mlg
