/// @file config.hpp
/// @brief Strict JSON experiment configuration: every object is checked
/// for missing and unknown keys before any computation starts.
#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kinreg/flux.hpp"
#include "kinreg/nondeg.hpp"
#include "kinreg/solver.hpp"
#include "kinreg/source.hpp"

namespace kinreg {

using json = nlohmann::json;

/// Reads and parses a JSON file; throws ConfigError on I/O or syntax errors.
json load_json(const std::filesystem::path& path);

/// View of one JSON object that records which keys were read. finish()
/// rejects the rest. Keys are reported as dotted paths ("grid.n_cells").
class ConfigObject {
public:
    ConfigObject(const json& j, std::string path);

    bool has(const std::string& key) const;
    const json& required(const std::string& key);
    const json* optional(const std::string& key);

    double number(const std::string& key);
    double number_or(const std::string& key, double fallback);
    long long integer(const std::string& key);
    long long integer_or(const std::string& key, long long fallback);
    std::string string(const std::string& key);
    std::string string_or(const std::string& key, const std::string& fallback);
    bool boolean_or(const std::string& key, bool fallback);
    std::vector<double> numbers(const std::string& key);

    std::string path_of(const std::string& key) const;
    const std::string& path() const { return path_; }

    /// Throws ConfigError naming the first key that was never read.
    void finish() const;

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

double as_number(const json& j, const std::string& path);
std::vector<double> as_numbers(const json& j, const std::string& path);

/// {"kind": "power_abs" | "power_signed", "ell": x}, {"kind": "sine"},
/// {"kind": "cosine"}, {"kind": "polynomial", "coefficients": [...]},
/// {"kind": "piecewise_polynomial", "breakpoints": [...], "pieces": [[...], ...]}
Flux parse_flux(const json& j, const std::string& path = "flux");

/// [lo, hi]
Interval parse_interval(const json& j, const std::string& path = "interval");

/// {"x_lo", "x_hi", "n_cells", "t_end", "cfl"?, "boundary"?, "store_every"?,
///  "max_slices"?, "fixed_dt"?}
GridSpec parse_grid(const json& j, const std::string& path = "grid");

/// Array of terms {"polynomial": {...}} | {"trig": {...}} | {"box": {...}}.
Expression parse_expression(const json& j, const std::string& path);

/// {"kind": "zero"} | {"kind": "constant", "value"} |
/// {"kind": "table", "times", "values"} | {"kind": "expression", "terms"}
SourceSpec parse_source(const json& j, const std::string& path = "source");

/// {"table": [...]} | {"riemann": {"left", "right", "x0"}} | {"expression": [...]}
std::vector<double> parse_initial_data(const json& j, const GridSpec& grid, const std::string& path = "u0");

/// {"delta_k": [first, last], "lambda_k": [first, last], "v_points", "scan_points",
///  "sphere_points", "search", "floor_cells", "fit_points", "min_r_squared"}, all optional.
NondegOptions parse_nondeg_options(const json& j, const std::string& path = "options");

}  // namespace kinreg
