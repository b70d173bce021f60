#include "kinreg/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "kinreg/config.hpp"
#include "kinreg/errors.hpp"
#include "kinreg/exponents.hpp"
#include "kinreg/kinetic.hpp"
#include "kinreg/nondeg.hpp"
#include "kinreg/regnorm.hpp"
#include "kinreg/rng.hpp"

namespace kinreg {

namespace fs = std::filesystem;

namespace {

const std::pair<Command, const char*> command_names[] = {
    {Command::analyze_flux, "analyze-flux"}, {Command::exponents, "exponents"},
    {Command::solve, "solve"},               {Command::defect, "defect"},
    {Command::regularity, "regularity"},     {Command::contraction, "contraction"},
    {Command::verify, "verify"},
};

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    for (const auto& [c, n] : command_names) {
        if (name == n) return c;
    }
    return std::nullopt;
}

std::string to_string(Command c) {
    for (const auto& [cmd, n] : command_names) {
        if (cmd == c) return n;
    }
    return "?";
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

/// JSON numbers cannot hold inf/nan; they are written as null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json fit_json(const FitDiagnostics& f) {
    json samples = json::array();
    for (const auto& [x, y] : f.samples) samples.push_back({number(x), number(y)});
    return {{"slope", number(f.slope)},
            {"intercept", number(f.intercept)},
            {"r_squared", number(f.r_squared)},
            {"log2_samples", samples}};
}

json grid_json(const GridSpec& g) {
    return {{"x_lo", g.x_lo},
            {"x_hi", g.x_hi},
            {"n_cells", g.n_cells},
            {"t_end", g.t_end},
            {"cfl", g.cfl},
            {"boundary", g.boundary == Boundary::periodic ? "periodic" : "outflow"},
            {"store_every", g.store_every},
            {"max_slices", g.max_slices},
            {"fixed_dt", g.fixed_dt}};
}

class OutputDir {
public:
    explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw std::runtime_error("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    std::ofstream open(const std::string& name) const {
        std::ofstream f(dir_ / name);
        if (!f) throw std::runtime_error("cannot write '" + (dir_ / name).string() + "'");
        return f;
    }

    void write_json(const std::string& name, const json& j) const { open(name) << j.dump(2) << '\n'; }

private:
    fs::path dir_;
};

struct Context {
    json config;
    OutputDir out;
    Tier tier;
    std::optional<std::uint64_t> seed;
};

json require_config(const RunOptions& options) {
    if (!options.config) throw ConfigError("--config is required for this command", "config");
    return load_json(*options.config);
}

/// Flux, grid, initial data and source shared by the solver-based commands.
struct Problem {
    Flux flux = Flux::sine();
    GridSpec grid;
    std::vector<double> u0;
    SourceSpec source = SourceSpec::zero();
};

Problem parse_problem(ConfigObject& o) {
    Problem p;
    p.flux = parse_flux(o.required("flux"), o.path_of("flux"));
    p.grid = parse_grid(o.required("grid"), o.path_of("grid"));
    p.u0 = parse_initial_data(o.required("u0"), p.grid, o.path_of("u0"));
    if (const json* s = o.optional("source")) p.source = parse_source(*s, o.path_of("source"));
    try {
        p.source.check_cells(static_cast<std::size_t>(p.grid.n_cells));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("source: ") + e.what(), o.path_of("source"));
    }
    return p;
}

json analyze_flux_command(Context& ctx) {
    ConfigObject o(ctx.config, "");
    const Flux flux = parse_flux(o.required("flux"));
    const Interval interval = parse_interval(o.required("interval"));
    NondegOptions opt;
    if (const json* j = o.optional("options")) opt = parse_nondeg_options(*j);
    o.finish();

    const auto p = analyze_flux(flux, interval, opt);
    json summary = {{"flux", flux.name()},
                    {"interval", {interval.lo, interval.hi}},
                    {"alpha", p.alpha},
                    {"beta", p.beta},
                    {"kappa", p.kappa},
                    {"tau", p.tau},
                    {"zeros", p.zeros.zeros},
                    {"low_confidence", p.low_confidence},
                    {"warnings", p.warnings},
                    {"fits",
                     {{"alpha", fit_json(p.alpha_fit)},
                      {"beta", fit_json(p.beta_fit)},
                      {"kappa", fit_json(p.kappa_fit)},
                      {"tau", fit_json(p.tau_fit)}}}};
    ctx.out.write_json("profile.json", summary);
    auto csv = ctx.out.open("measures.csv");
    csv << "delta,lambda,measure\n";
    for (const auto& m : p.table) {
        csv << format_number(m.delta) << ',' << format_number(m.lambda) << ',' << format_number(m.measure) << '\n';
    }
    return summary;
}

json exponents_json(const AveragingExponents& e) {
    return {{"s_star", e.s_star}, {"r", e.r},       {"theta_alpha", e.theta_alpha}, {"theta_beta", e.theta_beta},
            {"e1", e.e1},         {"e2", e.e2},     {"eta", e.eta},                 {"r_alpha", e.r_alpha},
            {"r_beta", e.r_beta}};
}

json exponents_command(Context& ctx) {
    ConfigObject o(ctx.config, "");
    double alpha, beta, kappa, tau;
    if (const json* pj = o.optional("profile")) {
        for (const char* k : {"alpha", "beta", "kappa", "tau"}) {
            if (o.has(k)) throw ConfigError("give either 'profile' or the exponents, not both", k);
        }
        // A profile is a data file (e.g. analyze-flux output); only the
        // four exponents are read from it.
        const json profile = pj->is_string() ? load_json(pj->get<std::string>()) : *pj;
        if (!profile.is_object()) throw ConfigError("'profile' must be a path or an object", "profile");
        auto get = [&](const char* k) {
            if (!profile.contains(k)) throw ConfigError(std::string("missing required key 'profile.") + k + "'", std::string("profile.") + k);
            return as_number(profile.at(k), std::string("profile.") + k);
        };
        alpha = get("alpha");
        beta = get("beta");
        kappa = get("kappa");
        tau = get("tau");
    } else {
        alpha = o.number("alpha");
        beta = o.number("beta");
        kappa = o.number("kappa");
        tau = o.number("tau");
    }
    const char* averaging_keys[] = {"gamma", "sigma", "p", "q", "pbar"};
    int given = 0;
    for (const char* k : averaging_keys) given += o.has(k) ? 1 : 0;
    const json* mu = o.optional("mu");

    json summary = {{"alpha", alpha}, {"beta", beta}, {"kappa", kappa}, {"tau", tau}};
    try {
        if (given == 0) {
            if (mu) throw ConfigError("'mu' applies only with the averaging inputs gamma, sigma, p, q, pbar", "mu");
            summary["mode"] = "entropy_solution";
            summary.update(exponents_json(scl_exponents(alpha, beta, kappa, tau)));
            summary["baseline"] = {{"lpt_s", lpt_scl_exponent(alpha)}};
        } else {
            if (given != 5) {
                for (const char* k : averaging_keys) o.required(k);
            }
            const auto in = AveragingInputs::make(alpha, beta, kappa, tau, o.number("gamma"), o.number("sigma"),
                                                  o.number("p"), o.number("q"), o.number("pbar"));
            summary["mode"] = "averaging";
            summary.update({{"gamma", in.gamma}, {"sigma", in.sigma}, {"p", in.p}, {"q", in.q}, {"pbar", in.pbar}});
            summary["pbar_admissible"] = in.pbar_admissible();
            summary.update(exponents_json(averaging_exponents(in)));
            if (in.p > 1.0) {
                const auto lpt = lpt_baseline(alpha, in.p, in.q);
                summary["baseline"] = {{"lpt_theta", lpt.theta}, {"lpt_r", lpt.r}};
            }
            if (mu) {
                summary["baseline"]["tadmor_tao_theta"] =
                    tadmor_tao_baseline(alpha, as_number(*mu, "mu"), in.p, in.q);
            }
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (given == 0 && mu) throw ConfigError("'mu' needs the averaging inputs gamma, sigma, p, q, pbar", "mu");
    o.finish();
    ctx.out.write_json("exponents.json", summary);
    return summary;
}

void write_field_csv(const OutputDir& out, const std::string& name, const SpaceTimeField& f,
                     const std::vector<std::vector<double>>& rows) {
    auto csv = out.open(name);
    csv << 't';
    for (int i = 0; i < f.grid.n_cells; ++i) csv << ",x=" << format_number(f.grid.centre(i));
    csv << '\n';
    for (std::size_t k = 0; k < f.times.size(); ++k) {
        csv << format_number(f.times[k]);
        for (double u : rows[k]) csv << ',' << format_number(u);
        csv << '\n';
    }
}

json solve_command(Context& ctx) {
    ConfigObject o(ctx.config, "");
    const Problem p = parse_problem(o);
    o.finish();
    const auto field = solve(p.flux, p.u0, p.source, p.grid);
    write_field_csv(ctx.out, "field.csv", field, field.values);
    write_field_csv(ctx.out, "source.csv", field, field.source_trace);
    json summary = {{"flux", p.flux.name()},
                    {"grid", grid_json(p.grid)},
                    {"steps", field.steps},
                    {"slices", field.times.size()},
                    {"cadence", field.cadence},
                    {"t_final", field.times.back()},
                    {"mass_initial", field.mass(0)},
                    {"mass_final", field.mass(field.times.size() - 1)},
                    {"min", field.min_value()},
                    {"max", field.max_value()},
                    {"files", {"field.csv", "source.csv"}}};
    ctx.out.write_json("field.json", summary);
    return summary;
}

json defect_command(Context& ctx) {
    ConfigObject o(ctx.config, "");
    Problem p = parse_problem(o);
    if (p.grid.store_every != 0 && p.grid.store_every != 1) {
        throw ConfigError("defect needs every time step stored; set grid.store_every to 1 or omit it",
                          "grid.store_every");
    }
    p.grid.store_every = 1;
    ConfigObject vo(o.required("velocity"), "velocity");
    const int n_v = static_cast<int>(vo.integer("n_v"));
    const double margin = vo.number_or("margin", 0.1);
    const bool explicit_range = vo.has("v_lo") || vo.has("v_hi");
    VelocityGrid vg;
    if (explicit_range) {
        vg = {vo.number("v_lo"), vo.number("v_hi"), n_v};
        if (vo.has("margin")) throw ConfigError("give either velocity.margin or velocity.v_lo/v_hi", "velocity.margin");
    }
    vo.finish();
    DefectOptions opt;
    if (const json* tj = o.optional("trim")) {
        ConfigObject to(*tj, "trim");
        opt.time_trim = to.number_or("time", opt.time_trim);
        opt.space_trim = to.number_or("space", opt.space_trim);
        to.finish();
    }
    opt.keep_density = o.boolean_or("density", false);
    std::vector<std::pair<double, double>> moments;
    if (const json* mj = o.optional("moments")) {
        if (!mj->is_array()) throw ConfigError("'moments' must be an array", "moments");
        for (std::size_t k = 0; k < mj->size(); ++k) {
            ConfigObject mo((*mj)[k], "moments[" + std::to_string(k) + "]");
            moments.emplace_back(mo.number("v0"), mo.number("alpha"));
            mo.finish();
        }
    }
    o.finish();

    const auto field = solve(p.flux, p.u0, p.source, p.grid);
    if (!explicit_range) {
        try {
            vg = VelocityGrid::bracketing(field, n_v, margin);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("velocity: ") + e.what(), "velocity");
        }
    }
    KineticDefect d;
    try {
        d = reconstruct_defect(field, p.flux, p.source, vg, opt);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    json mj = json::array();
    for (const auto& [v0, a] : moments) {
        double value;
        try {
            value = singular_moment(d, v0, a);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what(), "moments");
        }
        mj.push_back({{"v0", v0}, {"alpha", a}, {"moment", value}, {"per_unit_time", value / d.duration}});
    }
    json summary = {{"flux", p.flux.name()},
                    {"grid", grid_json(p.grid)},
                    {"velocity", {{"v_lo", vg.v_lo}, {"v_hi", vg.v_hi}, {"n_v", vg.n_v}}},
                    {"window",
                     {{"slice_begin", d.slice_begin},
                      {"slice_end", d.slice_end},
                      {"cell_begin", d.cell_begin},
                      {"cell_end", d.cell_end},
                      {"duration", d.duration}}},
                    {"total_mass", d.total_mass},
                    {"mass_per_unit_time", d.mass_rate()},
                    {"positive_mass", d.positive_mass},
                    {"negative_mass", d.negative_mass},
                    {"negativity_floor", d.negativity_floor},
                    {"negativity_ratio", d.negativity_ratio()},
                    {"bottom_residual", d.bottom_residual},
                    {"moments", mj}};
    ctx.out.write_json("defect.json", summary);
    auto csv = ctx.out.open("defect_columns.csv");
    csv << "v,column_mass,positive,negative\n";
    for (int j = 0; j < vg.n_v; ++j) {
        csv << format_number(vg.mid(j)) << ',' << format_number(d.column_mass[j]) << ','
            << format_number(d.column_positive[j]) << ',' << format_number(d.column_negative[j]) << '\n';
    }
    if (opt.keep_density) {
        auto dcsv = ctx.out.open("defect_density.csv");
        dcsv << "t,x,v,m\n";
        for (std::size_t w = 0; w < d.density.size(); ++w) {
            const double t = field.times[d.slice_begin + w];
            for (std::size_t i = 0; i < d.density[w].size(); ++i) {
                const double x = p.grid.centre(static_cast<int>(d.cell_begin + i));
                for (int j = 0; j < vg.n_v; ++j) {
                    dcsv << format_number(t) << ',' << format_number(x) << ',' << format_number(vg.mid(j)) << ','
                         << format_number(d.density[w][i][j]) << '\n';
                }
            }
        }
    }
    return summary;
}

json regularity_command(Context& ctx) {
    ConfigObject o(ctx.config, "");
    const Problem p = parse_problem(o);
    std::vector<double> ps{1.0};
    if (const json* pj = o.optional("p")) ps = pj->is_array() ? as_numbers(*pj, "p") : std::vector<double>{as_number(*pj, "p")};
    const std::string dir = o.string_or("direction", "both");
    std::vector<Direction> directions;
    if (dir == "space" || dir == "both") directions.push_back(Direction::space);
    if (dir == "time" || dir == "both") directions.push_back(Direction::time);
    if (directions.empty()) throw ConfigError("'direction' must be space, time or both", "direction");
    std::vector<int> h_cells;
    if (const json* hj = o.optional("h_cells")) {
        for (double h : as_numbers(*hj, "h_cells")) {
            if (h < 1 || h != static_cast<int>(h)) throw ConfigError("'h_cells' must hold positive integers", "h_cells");
            h_cells.push_back(static_cast<int>(h));
        }
    }
    o.finish();

    const auto field = solve(p.flux, p.u0, p.source, p.grid);
    json fits = json::array(), summary_by_p = json::array();
    auto csv = ctx.out.open("regularity_norms.csv");
    csv << "direction,p,h_cells,h,norm\n";
    for (double pv : ps) {
        double joint = INFINITY;
        for (Direction d : directions) {
            RegularityFit f;
            try {
                f = estimate_exponent(field, pv, d, h_cells);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            const char* name = d == Direction::space ? "space" : "time";
            for (std::size_t k = 0; k < f.window.h.size(); ++k) {
                csv << name << ',' << format_number(pv) << ',' << f.window.h_cells[k] << ','
                    << format_number(f.window.h[k]) << ',' << format_number(f.window.norms[k]) << '\n';
            }
            joint = std::min(joint, f.s_hat);
            fits.push_back({{"p", pv},
                            {"direction", name},
                            {"s_hat", number(f.s_hat)},
                            {"constant_field", f.constant_field},
                            {"fit", fit_json(f.fit)},
                            {"window",
                             {{"slice_begin", f.window.slice_begin},
                              {"slice_end", f.window.slice_end},
                              {"cell_begin", f.window.cell_begin},
                              {"cell_end", f.window.cell_end}}}});
        }
        summary_by_p.push_back({{"p", pv}, {"s_hat_min", number(joint)}});
    }
    json summary = {{"flux", p.flux.name()}, {"grid", grid_json(p.grid)}, {"fits", fits}, {"summary", summary_by_p}};
    ctx.out.write_json("regularity.json", summary);
    return summary;
}

json contraction_json(const ContractionResult& r) {
    return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"deficit", r.deficit}, {"pass", r.pass}};
}

json contraction_command(Context& ctx, bool& passed) {
    ConfigObject o(ctx.config, "");
    const Flux flux = parse_flux(o.required("flux"));
    GridSpec grid = parse_grid(o.required("grid"));
    const double tol = o.number_or("tolerance", 1e-10);
    json summary = {{"flux", flux.name()}, {"tolerance", tol}};
    if (const json* rj = o.optional("random")) {
        for (const char* k : {"run1", "run2"}) {
            if (o.has(k)) throw ConfigError("give either 'random' or run1/run2, not both", k);
        }
        ConfigObject ro(*rj, "random");
        const long long pairs = ro.integer("pairs");
        if (pairs < 1) throw ConfigError("'random.pairs' must be >= 1", "random.pairs");
        ro.finish();
        const std::uint64_t seed = ctx.seed.value_or(static_cast<std::uint64_t>(o.integer_or("seed", 20240917)));
        o.finish();
        SplitMix64 root(seed);
        json cases = json::array();
        double worst = INFINITY;
        passed = true;
        for (long long k = 0; k < pairs; ++k) {
            const auto c = random_contraction_case(root.next(), grid.n_cells, grid.t_end);
            auto r = run_contraction_case(flux, c, grid);
            r.pass = r.deficit >= -tol;
            passed = passed && r.pass;
            worst = std::min(worst, r.deficit);
            cases.push_back(contraction_json(r));
        }
        summary.update({{"seed", seed}, {"pairs", pairs}, {"min_deficit", worst}, {"pass", passed}, {"cases", cases}});
    } else {
        auto run_spec = [&](const char* key) {
            ConfigObject ro(o.required(key), key);
            auto u0 = parse_initial_data(ro.required("u0"), grid, ro.path_of("u0"));
            SourceSpec s = SourceSpec::zero();
            if (const json* sj = ro.optional("source")) s = parse_source(*sj, ro.path_of("source"));
            ro.finish();
            return std::pair{std::move(u0), std::move(s)};
        };
        auto [u01, s1] = run_spec("run1");
        auto [u02, s2] = run_spec("run2");
        o.finish();
        try {
            s1.check_cells(static_cast<std::size_t>(grid.n_cells));
            s2.check_cells(static_cast<std::size_t>(grid.n_cells));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (grid.fixed_dt == 0.0) grid.fixed_dt = stable_fixed_dt(flux, grid, {{&u01, &s1}, {&u02, &s2}});
        const auto run1 = solve(flux, u01, s1, grid);
        const auto run2 = solve(flux, u02, s2, grid);
        const auto r = contraction_check(run1, run2, u01, u02, s1, s2, tol);
        passed = r.pass;
        summary.update(contraction_json(r));
        summary["fixed_dt"] = grid.fixed_dt;
    }
    ctx.out.write_json("contraction.json", summary);
    return summary;
}

json verify_command(Context& ctx, const RunOptions& options, std::ostream& out, bool& passed) {
    std::vector<std::string> only;
    Tier tier = ctx.tier;
    std::uint64_t seed = ctx.seed.value_or(20240917);
    if (options.config) {
        ConfigObject o(ctx.config, "");
        if (const json* oj = o.optional("only")) {
            if (!oj->is_array()) throw ConfigError("'only' must be an array of criterion ids", "only");
            for (const auto& id : *oj) {
                if (!id.is_string()) throw ConfigError("'only' must be an array of criterion ids", "only");
                only.push_back(id.get<std::string>());
            }
        }
        if (!ctx.seed) seed = static_cast<std::uint64_t>(o.integer_or("seed", static_cast<long long>(seed)));
        o.finish();
    }
    VerifyReport report;
    try {
        report = verify(tier, seed, only);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), "only");
    }
    out << format_report(report);
    passed = report.all_pass();
    json criteria = json::array();
    for (const auto& c : report.criteria) {
        json rows = json::array();
        for (const auto& r : c.rows) {
            // Wall times vary between runs and stay out of the JSON report.
            if (r.quantity == "wall time [s]") continue;
            rows.push_back({{"quantity", r.quantity},
                            {"measured", number(r.measured)},
                            {"expected", number(r.expected)},
                            {"relation", r.relation},
                            {"pass", r.pass}});
        }
        criteria.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"rows", rows}, {"error", c.error}});
    }
    json summary = {{"tier", to_string(tier)}, {"seed", seed}, {"pass", passed}, {"criteria", criteria}};
    ctx.out.write_json("verify.json", summary);
    return summary;
}

void report_error(std::ostream& err, const char* kind, const std::string& message, const std::string& key = {}) {
    json e = {{"kind", kind}, {"message", message}};
    if (!key.empty()) e["key"] = key;
    err << json{{"error", e}}.dump() << '\n';
}

}  // namespace

int run(Command command, const RunOptions& options, std::ostream& out, std::ostream& err) {
    try {
        json config = command == Command::verify && !options.config ? json::object() : require_config(options);
        Context ctx{std::move(config), OutputDir(options.out_dir), options.tier, options.seed};
        bool passed = true;
        json summary;
        switch (command) {
            case Command::analyze_flux: summary = analyze_flux_command(ctx); break;
            case Command::exponents: summary = exponents_command(ctx); break;
            case Command::solve: summary = solve_command(ctx); break;
            case Command::defect: summary = defect_command(ctx); break;
            case Command::regularity: summary = regularity_command(ctx); break;
            case Command::contraction: summary = contraction_command(ctx, passed); break;
            case Command::verify: verify_command(ctx, options, out, passed); break;
        }
        if (command != Command::verify) out << summary.dump(2) << '\n';
        if (!passed) {
            report_error(err, "check_failed", to_string(command) + " check failed");
            return exit_computation;
        }
        return exit_ok;
    } catch (const ConfigError& e) {
        report_error(err, "config", e.what(), e.key());
        return exit_config;
    } catch (const std::invalid_argument& e) {
        report_error(err, "config", e.what());
        return exit_config;
    } catch (const json::exception& e) {
        report_error(err, "config", e.what());
        return exit_config;
    } catch (const ComputationError& e) {
        report_error(err, "computation", e.what());
        return exit_computation;
    } catch (const std::exception& e) {
        report_error(err, "runtime", e.what());
        return exit_computation;
    }
}

}  // namespace kinreg
