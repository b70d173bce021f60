#include "kinreg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "kinreg/exponents.hpp"
#include "kinreg/fit.hpp"
#include "kinreg/nondeg.hpp"
#include "kinreg/parallel.hpp"
#include "kinreg/regnorm.hpp"
#include "kinreg/rng.hpp"

namespace kinreg {

Tier parse_tier(const std::string& s) {
    if (s == "fast") return Tier::fast;
    if (s == "full") return Tier::full;
    throw std::invalid_argument("unknown tier '" + s + "' (expected fast or full)");
}

std::string to_string(Tier tier) { return tier == Tier::fast ? "fast" : "full"; }

bool VerifyReport::all_pass() const {
    return !criteria.empty() && std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
}

Flux burgers_flux() { return Flux::polynomial({0.0, 0.0, 0.5}); }

double riemann_l1_error(const Flux& flux, double u_left, double u_right, double x_lo, double x_hi, int n_cells,
                        double t_end, int sub) {
    GridSpec grid;
    grid.x_lo = x_lo;
    grid.x_hi = x_hi;
    grid.n_cells = n_cells;
    grid.t_end = t_end;
    grid.boundary = Boundary::outflow;
    const auto field = solve(flux, riemann_data(grid, u_left, u_right, 0.0), SourceSpec::zero(), grid);
    const RiemannSolution exact(flux, u_left, u_right);
    const double dx = grid.dx();
    double err = 0.0;
    for (int i = 0; i < n_cells; ++i) {
        double avg = 0.0;
        for (int k = 0; k < sub; ++k) avg += exact((x_lo + (i + (k + 0.5) / sub) * dx) / t_end);
        err += std::abs(field.values.back()[i] - avg / sub) * dx;
    }
    return err;
}

KineticDefect burgers_shock_defect(int n_cells, int n_v) {
    GridSpec grid;
    grid.x_lo = -0.5;
    grid.x_hi = 1.5;
    grid.n_cells = n_cells;
    grid.t_end = 1.0;
    grid.boundary = Boundary::outflow;
    grid.store_every = 1;
    const Flux flux = burgers_flux();
    const auto field = solve(flux, riemann_data(grid, 1.0, 0.0, 0.0), SourceSpec::zero(), grid);
    return reconstruct_defect(field, flux, SourceSpec::zero(), VelocityGrid::bracketing(field, n_v));
}

ContractionCase random_contraction_case(std::uint64_t seed, int n_cells, double t_end) {
    SplitMix64 rng(seed);
    ContractionCase c;
    auto data = [&] {
        const int blocks = 1 + static_cast<int>(rng.below(8));
        std::vector<double> levels(blocks);
        for (auto& l : levels) l = rng.uniform(-1.5, 1.5);
        std::vector<double> u(n_cells);
        for (int i = 0; i < n_cells; ++i) u[i] = levels[static_cast<std::size_t>(i) * blocks / n_cells];
        for (auto& x : u) x += rng.uniform(-0.1, 0.1);
        return u;
    };
    auto force = [&]() -> SourceSpec {
        switch (rng.below(4)) {
            case 0: return SourceSpec::zero();
            case 1: return SourceSpec::constant(rng.uniform(-1.0, 1.0));
            case 2: {
                std::vector<double> times{0.0, 0.25 * t_end, 0.5 * t_end, 0.75 * t_end};
                std::vector<std::vector<double>> rows(times.size(), std::vector<double>(n_cells));
                for (auto& row : rows) {
                    for (auto& s : row) s = rng.uniform(-1.0, 1.0);
                }
                return SourceSpec::table(std::move(times), std::move(rows));
            }
            default: {
                Expression e;
                TrigTerm t;
                t.amplitude = rng.uniform(-1.0, 1.0);
                t.kx = 2.0 * M_PI * static_cast<double>(1 + rng.below(3));
                t.kt = rng.uniform(-4.0, 4.0);
                t.phase = rng.uniform(0.0, 2.0 * M_PI);
                e.terms.emplace_back(t);
                return SourceSpec::expression(std::move(e));
            }
        }
    };
    c.u01 = data();
    c.u02 = data();
    c.s1 = force();
    // Half of the cases share the force.
    c.s2 = rng.below(2) == 0 ? c.s1 : force();
    return c;
}

ContractionResult run_contraction_case(const Flux& flux, const ContractionCase& c, const GridSpec& grid) {
    GridSpec g = grid;
    g.fixed_dt = stable_fixed_dt(flux, g, {{&c.u01, &c.s1}, {&c.u02, &c.s2}});
    const auto run1 = solve(flux, c.u01, c.s1, g);
    const auto run2 = solve(flux, c.u02, c.s2, g);
    return contraction_check(run1, run2, c.u01, c.u02, c.s1, c.s2);
}

namespace {

CheckRow within(std::string quantity, double measured, double expected, double tol) {
    char rel[64];
    std::snprintf(rel, sizeof rel, "|d| <= %.3g", tol);
    return {std::move(quantity), measured, expected, rel, std::abs(measured - expected) <= tol};
}

CheckRow at_least(std::string quantity, double measured, double bound) {
    return {std::move(quantity), measured, bound, ">=", measured >= bound};
}

CheckRow at_most(std::string quantity, double measured, double bound) {
    return {std::move(quantity), measured, bound, "<=", measured <= bound};
}

/// Reported value without a pass condition.
CheckRow info(std::string quantity, double measured) { return {std::move(quantity), measured, 0.0, "info", true}; }

CheckRow below(std::string quantity, double measured, double bound) {
    return {std::move(quantity), measured, bound, "<", measured < bound};
}

using Body = std::function<void(CriterionResult&, Tier, std::uint64_t)>;

struct Criterion {
    std::string id;
    std::string title;
    double fast_budget;  ///< seconds; 0 means no budget row
    Body body;
};

void exponent_table(CriterionResult& r, Tier, std::uint64_t) {
    for (int ell = 1; ell <= 5; ++ell) {
        const double s = scl_exponents(1.0 / ell, 1.0, ell - 1.0, ell - 1.0).s_star;
        r.rows.push_back(within("s* for ell=" + std::to_string(ell), s, std::min(1.0 / 3.0, 1.0 / (ell + 1.0)), 1e-12));
    }
}

void sine_profile(CriterionResult& r, Tier, std::uint64_t) {
    const auto e = scl_exponents(0.5, 1.0, 1.0, 1.0);
    r.rows.push_back(within("s*", e.s_star, 1.0 / 3.0, 1e-15));
    r.rows.push_back(within("r", e.r, 1.5, 1e-15));
    const double lpt = lpt_scl_exponent(0.5);
    r.rows.push_back(within("baseline s", lpt, 0.2, 1e-15));
    r.rows.push_back(below("baseline s vs s*", lpt, e.s_star));
}

void nondegeneracy(CriterionResult& r, Tier tier, std::uint64_t) {
    NondegOptions opt;
    if (tier == Tier::full) opt.v_points = 4'000'000;
    struct Case {
        std::string name;
        Flux flux;
        Interval interval;
        double alpha, beta, kappa, tau;
    };
    std::vector<Case> cases;
    for (int ell = 1; ell <= 3; ++ell) {
        cases.push_back({"sgn|v|^" + std::to_string(ell + 1), Flux::power_signed(ell), {-1.0, 1.0}, 1.0 / ell, 1.0,
                         ell - 1.0, ell - 1.0});
    }
    cases.push_back({"sin", Flux::sine(), {-4.0, 4.0}, 0.5, 1.0, 1.0, 1.0});
    for (const auto& c : cases) {
        const auto p = analyze_flux(c.flux, c.interval, opt);
        auto rel = [&](const char* sym, double got, double want) {
            r.rows.push_back(within(c.name + " " + sym, got, want, std::max(0.1 * std::abs(want), 1e-12)));
        };
        rel("alpha", p.alpha, c.alpha);
        rel("beta", p.beta, c.beta);
        rel("kappa", p.kappa, c.kappa);
        rel("tau", p.tau, c.tau);
    }
}

void averaging_limit(CriterionResult& r, Tier, std::uint64_t) {
    const double eps = 1e-4;
    const double profiles[4][4] = {{1.0, 1.0, 0.0, 0.0}, {0.5, 1.0, 1.0, 1.0}, {1.0 / 3.0, 1.0, 2.0, 2.0},
                                   {0.5, 1.0, 1.0, 1.0}};
    const char* names[4] = {"ell=1", "ell=2", "ell=3", "sin"};
    for (int k = 0; k < 4; ++k) {
        const auto& pr = profiles[k];
        const auto in = AveragingInputs::make(pr[0], pr[1], pr[2], pr[3], 1.0 - eps, 0.5 - eps, 2.0, 1.0, 1.0 + eps);
        const auto a = averaging_exponents(in);
        const auto s = scl_exponents(pr[0], pr[1], pr[2], pr[3]);
        r.rows.push_back(within(std::string(names[k]) + " s*", a.s_star, s.s_star, 10 * eps));
        r.rows.push_back(within(std::string(names[k]) + " r", a.r, s.r, 10 * eps));
    }
}

void solver_convergence(CriterionResult& r, Tier tier, std::uint64_t) {
    const Flux flux = Flux::power_abs(1);
    std::vector<int> ns{200, 400, 800};
    if (tier == Tier::full) ns.push_back(1600);
    struct Problem {
        const char* name;
        double u_left, u_right;
    };
    for (const auto& pb : {Problem{"shock", 1.0, 0.0}, Problem{"rarefaction", 0.0, 1.0}}) {
        std::vector<double> h, err(ns.size());
        parallel_for(ns.size(), [&](std::size_t k) {
            err[k] = riemann_l1_error(flux, pb.u_left, pb.u_right, -0.25, 1.25, ns[k], 0.5);
        });
        for (int n : ns) h.push_back(1.5 / n);
        const auto fit = fit_power_law(h, err);
        r.rows.push_back(at_least(std::string(pb.name) + " L1 order", fit.slope, 0.8));
        for (std::size_t k = 0; k < ns.size(); ++k) {
            r.rows.push_back(info(std::string(pb.name) + " L1 error n=" + std::to_string(ns[k]), err[k]));
        }
    }

    GridSpec grid;
    grid.n_cells = 400;
    grid.t_end = 0.5;
    Expression bump;
    bump.terms.emplace_back(PolynomialTerm{});
    bump.terms.emplace_back(TrigTerm{0.5, 2.0 * M_PI, 0.0, 0.0, false});
    const auto u0 = cell_averages(grid, bump);
    const auto free = solve(flux, u0, SourceSpec::zero(), grid);
    const double m0 = free.mass(0);
    r.rows.push_back(at_most("mass drift, S=0 (rel)", std::abs(free.mass(free.times.size() - 1) - m0) / std::abs(m0), 1e-12));
    const auto forced = solve(flux, u0, SourceSpec::constant(1.0), grid);
    const double growth = forced.mass(forced.times.size() - 1) - m0;
    const double expected = grid.t_end * (grid.x_hi - grid.x_lo);
    r.rows.push_back(at_most("mass growth error, S=1 (rel)", std::abs(growth - expected) / expected, 1e-10));
}

void defect_mass(CriterionResult& r, Tier tier, std::uint64_t) {
    std::vector<std::pair<int, int>> levels{{200, 64}, {400, 128}, {800, 256}};
    if (tier == Tier::full) levels.emplace_back(1600, 512);
    std::vector<double> mass_err, moment_err;
    KineticDefect finest;
    for (const auto& [n, nv] : levels) {
        auto d = burgers_shock_defect(n, nv);
        mass_err.push_back(std::abs(d.mass_rate() - 1.0 / 12.0));
        moment_err.push_back(std::abs(singular_moment(d, 0.0, 0.5) / d.duration - 2.0 / 15.0));
        finest = std::move(d);
    }
    r.rows.push_back(within("mass per unit time", finest.mass_rate(), 1.0 / 12.0, 0.1 / 12.0));
    r.rows.push_back(
        within("singular moment per unit time", singular_moment(finest, 0.0, 0.5) / finest.duration, 2.0 / 15.0, 0.2 / 15.0));
    bool mass_down = true, moment_down = true;
    for (std::size_t k = 1; k < levels.size(); ++k) {
        mass_down = mass_down && mass_err[k] < mass_err[k - 1];
        moment_down = moment_down && moment_err[k] < moment_err[k - 1];
    }
    r.rows.push_back({"mass error decreasing", mass_down ? 1.0 : 0.0, 1.0, "==", mass_down});
    r.rows.push_back({"moment error decreasing", moment_down ? 1.0 : 0.0, 1.0, "==", moment_down});
    r.rows.push_back(at_most("negative/positive column mass", finest.negativity_ratio(), 0.05));
}

void contraction(CriterionResult& r, Tier tier, std::uint64_t seed) {
    GridSpec grid;
    grid.n_cells = tier == Tier::fast ? 64 : 256;
    grid.t_end = tier == Tier::fast ? 0.25 : 0.5;
    const std::vector<std::pair<std::string, Flux>> fluxes{
        {"|v|^2", Flux::power_abs(1)}, {"sgn|v|^3", Flux::power_signed(2)}, {"sin", Flux::sine()}};
    constexpr int pairs = 50;
    SplitMix64 root(seed);
    for (const auto& [name, flux] : fluxes) {
        std::vector<std::uint64_t> seeds(pairs);
        for (auto& s : seeds) s = root.next();
        std::vector<double> deficit(pairs);
        parallel_for(pairs, [&](std::size_t k) {
            const auto c = random_contraction_case(seeds[k], grid.n_cells, grid.t_end);
            deficit[k] = run_contraction_case(flux, c, grid).deficit;
        });
        r.rows.push_back(at_least(name + " min deficit (50 pairs)", *std::min_element(deficit.begin(), deficit.end()), -1e-10));
    }
}

void regularity(CriterionResult& r, Tier tier, std::uint64_t) {
    const int n = tier == Tier::fast ? 2000 : 8000;
    std::vector<double> step(n);
    for (int i = 0; i < n; ++i) step[i] = (-1.0 + (i + 0.5) * 2.0 / n) > 0.0 ? 1.0 : 0.0;
    const auto field = profile_field(-1.0, 1.0, step);
    r.rows.push_back(within("step s_hat, p=1", estimate_exponent(field, 1.0, Direction::space).s_hat, 1.0, 0.05));
    r.rows.push_back(within("step s_hat, p=2", estimate_exponent(field, 2.0, Direction::space).s_hat, 0.5, 0.05));

    GridSpec grid;
    grid.x_lo = -1.0;
    grid.x_hi = 1.0;
    grid.n_cells = tier == Tier::fast ? 800 : 1600;
    grid.t_end = 0.5;
    grid.boundary = Boundary::outflow;
    const auto shock = solve(Flux::power_abs(1), riemann_data(grid, 1.0, 0.0, -0.5), SourceSpec::zero(), grid);
    r.rows.push_back(at_least("Burgers shock s_hat, p=1", estimate_exponent(shock, 1.0, Direction::space).s_hat,
                              model_flux_exponent(1) - 0.05));
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {"exponent_table", "exponent table for |v|^(l+1) fluxes", 1.0, exponent_table},
        {"sine_profile", "sine profile exponents and baseline", 1.0, sine_profile},
        {"nondegeneracy", "nondegeneracy exponent estimation", 120.0, nondegeneracy},
        {"averaging_limit", "averaging exponents approach the entropy-solution limit", 1.0, averaging_limit},
        {"solver_convergence", "Godunov convergence and mass balance", 60.0, solver_convergence},
        {"defect_mass", "entropy defect mass against the shock formula", 120.0, defect_mass},
        {"contraction", "L1 contraction over random pairs", 120.0, contraction},
        {"regularity", "difference-norm exponent estimator", 0.0, regularity},
    };
    return all;
}

}  // namespace

const std::vector<std::string>& criterion_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& c : criteria()) out.push_back(c.id);
        return out;
    }();
    return ids;
}

CriterionResult run_criterion(const std::string& id, Tier tier, std::uint64_t seed) {
    const auto& all = criteria();
    const auto it = std::find_if(all.begin(), all.end(), [&](const Criterion& c) { return c.id == id; });
    if (it == all.end()) throw std::invalid_argument("unknown criterion '" + id + "'");
    CriterionResult r;
    r.id = it->id;
    r.title = it->title;
    const auto start = std::chrono::steady_clock::now();
    try {
        it->body(r, tier, seed);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (tier == Tier::fast && it->fast_budget > 0.0) r.rows.push_back(below("wall time [s]", r.seconds, it->fast_budget));
    r.pass = r.error.empty() && !r.rows.empty() &&
             std::all_of(r.rows.begin(), r.rows.end(), [](const CheckRow& row) { return row.pass; });
    return r;
}

VerifyReport verify(Tier tier, std::uint64_t seed, const std::vector<std::string>& only) {
    for (const auto& id : only) {
        if (std::find(criterion_ids().begin(), criterion_ids().end(), id) == criterion_ids().end()) {
            throw std::invalid_argument("unknown criterion '" + id + "'");
        }
    }
    VerifyReport report;
    report.tier = tier;
    report.seed = seed;
    for (const auto& id : criterion_ids()) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        report.criteria.push_back(run_criterion(id, tier, seed));
    }
    return report;
}

std::string format_report(const VerifyReport& report) {
    std::ostringstream os;
    char line[256];
    for (const auto& c : report.criteria) {
        std::snprintf(line, sizeof line, "[%s] %-20s %8.2fs  %s\n", c.pass ? "PASS" : "FAIL", c.id.c_str(), c.seconds,
                      c.title.c_str());
        os << line;
        for (const auto& row : c.rows) {
            if (row.relation == "info") {
                std::snprintf(line, sizeof line, "         %-4s %-40s measured %.10g\n", "", row.quantity.c_str(),
                              row.measured);
            } else {
                std::snprintf(line, sizeof line, "         %-4s %-40s measured %.10g  expected %s %.10g\n",
                              row.pass ? "ok" : "BAD", row.quantity.c_str(), row.measured, row.relation.c_str(),
                              row.expected);
            }
            os << line;
        }
        if (!c.error.empty()) os << "         error: " << c.error << '\n';
    }
    std::size_t passed = 0;
    for (const auto& c : report.criteria) passed += c.pass ? 1 : 0;
    os << passed << '/' << report.criteria.size() << " criteria passed (tier " << to_string(report.tier) << ", seed "
       << report.seed << ")\n";
    return os.str();
}

}  // namespace kinreg
