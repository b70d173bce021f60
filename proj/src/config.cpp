#include "kinreg/config.hpp"

#include <fstream>
#include <sstream>

#include "kinreg/errors.hpp"
#include "kinreg/fit.hpp"

namespace kinreg {

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

ConfigObject::ConfigObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + " must be a JSON object", path_);
}

std::string ConfigObject::path_of(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool ConfigObject::has(const std::string& key) const { return j_.contains(key); }

const json& ConfigObject::required(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError("missing required key '" + path_of(key) + "'", path_of(key));
    return j_.at(key);
}

const json* ConfigObject::optional(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("'" + path + "' must be a number", path);
    return j.get<double>();
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError("'" + path + "' must be an array of numbers", path);
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_number(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

double ConfigObject::number(const std::string& key) { return as_number(required(key), path_of(key)); }

double ConfigObject::number_or(const std::string& key, double fallback) {
    const json* v = optional(key);
    return v ? as_number(*v, path_of(key)) : fallback;
}

long long ConfigObject::integer(const std::string& key) {
    const json& v = required(key);
    if (!v.is_number_integer()) throw ConfigError("'" + path_of(key) + "' must be an integer", path_of(key));
    return v.get<long long>();
}

long long ConfigObject::integer_or(const std::string& key, long long fallback) {
    return has(key) ? integer(key) : (seen_.insert(key), fallback);
}

std::string ConfigObject::string(const std::string& key) {
    const json& v = required(key);
    if (!v.is_string()) throw ConfigError("'" + path_of(key) + "' must be a string", path_of(key));
    return v.get<std::string>();
}

std::string ConfigObject::string_or(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : (seen_.insert(key), fallback);
}

bool ConfigObject::boolean_or(const std::string& key, bool fallback) {
    const json* v = optional(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError("'" + path_of(key) + "' must be true or false", path_of(key));
    return v->get<bool>();
}

std::vector<double> ConfigObject::numbers(const std::string& key) { return as_numbers(required(key), path_of(key)); }

void ConfigObject::finish() const {
    for (const auto& [key, value] : j_.items()) {
        if (!seen_.contains(key)) throw ConfigError("unknown key '" + path_of(key) + "'", path_of(key));
    }
}

namespace {

/// Library preconditions surface as std::invalid_argument; in a config
/// context they are configuration errors attributed to `path`.
template <class F>
auto attributed(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what(), path);
    }
}

}  // namespace

Flux parse_flux(const json& j, const std::string& path) {
    ConfigObject o(j, path);
    const std::string kind = o.string("kind");
    Flux flux = attributed(path, [&] {
        if (kind == "power_abs") return Flux::power_abs(o.number("ell"));
        if (kind == "power_signed") return Flux::power_signed(o.number("ell"));
        if (kind == "sine") return Flux::sine();
        if (kind == "cosine") return Flux::cosine();
        if (kind == "polynomial") return Flux::polynomial(o.numbers("coefficients"));
        if (kind == "piecewise_polynomial") {
            auto breakpoints = o.numbers("breakpoints");
            const json& pj = o.required("pieces");
            if (!pj.is_array()) throw ConfigError("'" + o.path_of("pieces") + "' must be an array", o.path_of("pieces"));
            std::vector<PolynomialPiece> pieces;
            for (std::size_t k = 0; k < pj.size(); ++k) {
                pieces.push_back({as_numbers(pj[k], o.path_of("pieces") + "[" + std::to_string(k) + "]")});
            }
            return Flux::piecewise_polynomial(std::move(breakpoints), std::move(pieces));
        }
        throw ConfigError("unknown flux kind '" + kind + "'", o.path_of("kind"));
    });
    o.finish();
    return flux;
}

Interval parse_interval(const json& j, const std::string& path) {
    const auto v = as_numbers(j, path);
    if (v.size() != 2 || !(v[1] > v[0])) throw ConfigError("'" + path + "' must be [lo, hi] with lo < hi", path);
    return {v[0], v[1]};
}

GridSpec parse_grid(const json& j, const std::string& path) {
    ConfigObject o(j, path);
    GridSpec g;
    g.x_lo = o.number("x_lo");
    g.x_hi = o.number("x_hi");
    g.n_cells = static_cast<int>(o.integer("n_cells"));
    g.t_end = o.number("t_end");
    g.cfl = o.number_or("cfl", g.cfl);
    const std::string boundary = o.string_or("boundary", "periodic");
    if (boundary == "periodic") {
        g.boundary = Boundary::periodic;
    } else if (boundary == "outflow") {
        g.boundary = Boundary::outflow;
    } else {
        throw ConfigError("'" + o.path_of("boundary") + "' must be periodic or outflow", o.path_of("boundary"));
    }
    g.store_every = static_cast<int>(o.integer_or("store_every", g.store_every));
    g.max_slices = static_cast<int>(o.integer_or("max_slices", g.max_slices));
    g.fixed_dt = o.number_or("fixed_dt", g.fixed_dt);
    o.finish();
    attributed(path, [&] {
        g.validate();
        return 0;
    });
    return g;
}

Expression parse_expression(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError("'" + path + "' must be an array of terms", path);
    Expression e;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string tp = path + "[" + std::to_string(k) + "]";
        if (!j[k].is_object() || j[k].size() != 1) {
            throw ConfigError("'" + tp + "' must be an object with one of polynomial, trig, box", tp);
        }
        const auto it = j[k].begin();
        const std::string name = it.key();
        const json& body = it.value();
        ConfigObject o(body, tp + "." + name);
        if (name == "polynomial") {
            PolynomialTerm t;
            t.scale = o.number_or("scale", 1.0);
            if (const json* x = o.optional("x")) t.x_coeffs = as_numbers(*x, o.path_of("x"));
            if (const json* tc = o.optional("t")) t.t_coeffs = as_numbers(*tc, o.path_of("t"));
            e.terms.emplace_back(t);
        } else if (name == "trig") {
            TrigTerm t;
            t.amplitude = o.number_or("amplitude", 1.0);
            t.kx = o.number_or("kx", 0.0);
            t.kt = o.number_or("kt", 0.0);
            t.phase = o.number_or("phase", 0.0);
            const std::string fn = o.string_or("function", "sin");
            if (fn != "sin" && fn != "cos") throw ConfigError("'" + o.path_of("function") + "' must be sin or cos", o.path_of("function"));
            t.cosine = fn == "cos";
            e.terms.emplace_back(t);
        } else if (name == "box") {
            BoxTerm t;
            t.value = o.number_or("value", 1.0);
            const auto x = o.numbers("x");
            if (x.size() != 2) throw ConfigError("'" + o.path_of("x") + "' must be [lo, hi]", o.path_of("x"));
            t.x_lo = x[0];
            t.x_hi = x[1];
            if (const json* tj = o.optional("t")) {
                const auto tt = as_numbers(*tj, o.path_of("t"));
                if (tt.size() != 2) throw ConfigError("'" + o.path_of("t") + "' must be [lo, hi]", o.path_of("t"));
                t.t_lo = tt[0];
                t.t_hi = tt[1];
            }
            e.terms.emplace_back(t);
        } else {
            throw ConfigError("unknown expression term '" + name + "'", tp);
        }
        o.finish();
    }
    return e;
}

SourceSpec parse_source(const json& j, const std::string& path) {
    ConfigObject o(j, path);
    const std::string kind = o.string("kind");
    SourceSpec s = attributed(path, [&] {
        if (kind == "zero") return SourceSpec::zero();
        if (kind == "constant") return SourceSpec::constant(o.number("value"));
        if (kind == "table") {
            auto times = o.numbers("times");
            const json& vj = o.required("values");
            if (!vj.is_array()) throw ConfigError("'" + o.path_of("values") + "' must be an array of rows", o.path_of("values"));
            std::vector<std::vector<double>> rows;
            for (std::size_t k = 0; k < vj.size(); ++k) {
                rows.push_back(as_numbers(vj[k], o.path_of("values") + "[" + std::to_string(k) + "]"));
            }
            return SourceSpec::table(std::move(times), std::move(rows));
        }
        if (kind == "expression") return SourceSpec::expression(parse_expression(o.required("terms"), o.path_of("terms")));
        throw ConfigError("unknown source kind '" + kind + "'", o.path_of("kind"));
    });
    o.finish();
    return s;
}

std::vector<double> parse_initial_data(const json& j, const GridSpec& grid, const std::string& path) {
    ConfigObject o(j, path);
    const int forms = o.has("table") + o.has("riemann") + o.has("expression");
    if (forms != 1) throw ConfigError("'" + path + "' needs exactly one of table, riemann, expression", path);
    std::vector<double> u;
    if (const json* t = o.optional("table")) {
        u = as_numbers(*t, o.path_of("table"));
        if (u.size() != static_cast<std::size_t>(grid.n_cells)) {
            throw ConfigError("'" + o.path_of("table") + "' has " + std::to_string(u.size()) + " values, grid has " +
                                  std::to_string(grid.n_cells) + " cells",
                              o.path_of("table"));
        }
    } else if (const json* r = o.optional("riemann")) {
        ConfigObject ro(*r, o.path_of("riemann"));
        const double left = ro.number("left"), right = ro.number("right");
        const double x0 = ro.number_or("x0", 0.5 * (grid.x_lo + grid.x_hi));
        ro.finish();
        u = riemann_data(grid, left, right, x0);
    } else {
        u = cell_averages(grid, parse_expression(*o.optional("expression"), o.path_of("expression")));
    }
    o.finish();
    return u;
}

NondegOptions parse_nondeg_options(const json& j, const std::string& path) {
    ConfigObject o(j, path);
    NondegOptions opt;
    auto range = [&](const std::string& key, std::vector<double>& grid) {
        if (!o.has(key)) return;
        const auto k = o.numbers(key);
        if (k.size() != 2 || k[0] != static_cast<int>(k[0]) || k[1] != static_cast<int>(k[1]) || k[1] < k[0]) {
            throw ConfigError("'" + o.path_of(key) + "' must be [first, last] integer exponents", o.path_of(key));
        }
        grid = dyadic_grid(static_cast<int>(k[0]), static_cast<int>(k[1]));
    };
    range("delta_k", opt.delta_grid);
    range("lambda_k", opt.lambda_grid);
    opt.v_points = static_cast<int>(o.integer_or("v_points", opt.v_points));
    opt.scan_points = static_cast<int>(o.integer_or("scan_points", opt.scan_points));
    opt.sphere_points = static_cast<int>(o.integer_or("sphere_points", opt.sphere_points));
    const std::string search = o.string_or("search", "exact");
    if (search == "exact") {
        opt.search = DirectionSearch::exact;
    } else if (search == "grid") {
        opt.search = DirectionSearch::grid;
    } else {
        throw ConfigError("'" + o.path_of("search") + "' must be exact or grid", o.path_of("search"));
    }
    opt.floor_cells = static_cast<int>(o.integer_or("floor_cells", opt.floor_cells));
    opt.fit_points = static_cast<int>(o.integer_or("fit_points", opt.fit_points));
    opt.min_r_squared = o.number_or("min_r_squared", opt.min_r_squared);
    o.finish();
    return opt;
}

}  // namespace kinreg
