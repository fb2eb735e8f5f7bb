#include "mlg/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace mlg {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + value + "'");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
    return out;
}

// Splits "solver.<v>.<field>"; returns false when key is not solver-scoped.
bool split_solver_key(const std::string& key, int* layer, std::string* field) {
    if (key.rfind("solver.", 0) != 0) return false;
    const std::size_t second = key.find('.', 7);
    if (second == std::string::npos) {
        throw ConfigError("malformed solver key '" + key + "' (expected solver.<layer>.<field>)");
    }
    const std::string layer_str = key.substr(7, second - 7);
    try {
        *layer = std::stoi(layer_str);
    } catch (...) {
        throw ConfigError("malformed solver key '" + key + "': bad layer index '" + layer_str + "'");
    }
    if (*layer < 0) throw ConfigError("solver layer index must be nonnegative in '" + key + "'");
    *field = key.substr(second + 1);
    if (field->empty()) throw ConfigError("malformed solver key '" + key + "'");
    return true;
}

}  // namespace

KeyValueMap parse_key_values_text(const std::string& text) {
    KeyValueMap kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                              std::string(stripped) + "'");
        }
        const std::string key(trim(stripped.substr(0, eq)));
        const std::string value(trim(stripped.substr(eq + 1)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (kv.count(key) > 0) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        kv[key] = value;
    }
    return kv;
}

KeyValueMap parse_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_key_values_text(buffer.str());
}

PipelineConfig pipeline_config_from_kv(const KeyValueMap& kv) {
    PipelineConfig cfg;
    int max_solver_layer = -1;
    std::map<int, SolverParams> solver_params;

    for (const auto& [key, value] : kv) {
        int layer = 0;
        std::string field;
        if (split_solver_key(key, &layer, &field)) {
            auto& params = solver_params[layer];
            if (field == "lambda") {
                params.lambda = parse_real(key, value);
            } else if (field == "id") {
                if (value == "least_squares_reference") {
                    params.id = SolverParams::Id::least_squares_reference;
                } else if (value == "external") {
                    params.id = SolverParams::Id::external;
                } else {
                    throw ConfigError("key '" + key + "': unknown solver id '" + value + "'");
                }
            } else {
                params.extra[field] = value;
            }
            max_solver_layer = std::max(max_solver_layer, layer);
        } else if (key == "k") {
            cfg.k = parse_int(key, value);
        } else if (key == "d") {
            cfg.d = parse_int(key, value);
        } else if (key == "delta") {
            cfg.delta = parse_real(key, value);
        } else if (key == "gamma") {
            cfg.gamma = parse_real(key, value);
        } else if (key == "eigen_order") {
            cfg.eigen_order = eigen_order_from_string(value);
        } else if (key == "seed") {
            cfg.rng_seed = parse_u64(key, value);
        } else if (key == "oos.d") {
            cfg.oos_d = parse_int(key, value);
        } else if (key == "kmeans.restarts") {
            cfg.kmeans_restarts = parse_int(key, value);
        } else if (key == "kmeans.max_iters") {
            cfg.kmeans_max_iters = parse_int(key, value);
        } else if (key == "kmeans.tol") {
            cfg.kmeans_tol = parse_real(key, value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }

    if (max_solver_layer >= 0) {
        cfg.per_layer_solver_params.resize(static_cast<std::size_t>(max_solver_layer) + 1);
        for (const auto& [layer, params] : solver_params) {
            cfg.per_layer_solver_params[static_cast<std::size_t>(layer)] = params;
        }
    }
    return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    return pipeline_config_from_kv(parse_key_values(path));
}

}  // namespace mlg
