#include "kinreg/nondeg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "kinreg/errors.hpp"
#include "kinreg/parallel.hpp"

namespace kinreg {

namespace {

bool is_dyadic(double x) {
    int e = 0;
    return x > 0.0 && std::frexp(x, &e) == 0.5;
}

void check_dyadic_grid(const std::vector<double>& grid, const char* what) {
    if (grid.size() < 4) throw std::invalid_argument(std::string(what) + " needs at least 4 values");
    for (double x : grid) {
        if (!is_dyadic(x)) throw std::invalid_argument(std::string(what) + " must contain powers of two");
    }
}

struct WindowFit {
    FitDiagnostics fit;
    std::vector<std::size_t> used;
};

/// Fits log2(measure) against log2(delta) over the fit_points smallest
/// deltas whose measure is at least floor_cells cells.
std::optional<WindowFit> fit_resolved_window(const std::vector<double>& deltas,
                                             const std::vector<double>& measures, double cell_width,
                                             const NondegOptions& options) {
    std::vector<std::size_t> order(deltas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deltas[a] < deltas[b]; });
    const double floor = options.floor_cells * cell_width;
    WindowFit w;
    for (std::size_t i : order) {
        if (measures[i] >= floor) w.used.push_back(i);
        if (w.used.size() == static_cast<std::size_t>(options.fit_points)) break;
    }
    if (w.used.size() < static_cast<std::size_t>(std::max(2, options.fit_points))) return std::nullopt;
    std::vector<double> x, y;
    for (std::size_t i : w.used) {
        x.push_back(deltas[i]);
        y.push_back(measures[i]);
    }
    w.fit = fit_power_law(x, y);
    return w;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double sublevel_measure(const Flux& flux, Interval interval, double tau_dir, double xi_dir,
                        double delta, double lambda, const DegeneracySet& zeros, int v_points) {
    if (std::abs(tau_dir * tau_dir + xi_dir * xi_dir - 1.0) > 1e-12) {
        throw std::invalid_argument("sublevel_measure: direction (tau, xi) must be a unit vector");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("sublevel_measure: delta must be positive");
    if (!(lambda >= 0.0)) throw std::invalid_argument("sublevel_measure: lambda must be nonnegative");
    if (v_points < 100) throw std::invalid_argument("sublevel_measure: v_points must be >= 100");
    if (!(interval.hi > interval.lo)) throw std::invalid_argument("sublevel_measure: empty interval");

    const double w = interval.length() / v_points;
    std::size_t count = 0;
    for (int i = 0; i < v_points; ++i) {
        const double v = interval.lo + (i + 0.5) * w;
        if (zeros.distance(v) < lambda) continue;
        if (std::abs(tau_dir + flux.velocity(v) * xi_dir) <= delta) ++count;
    }
    return static_cast<double>(count) * w;
}

VelocitySamples::VelocitySamples(const Flux& flux, Interval interval, const DegeneracySet& zeros,
                                 int v_points)
    : width_(interval.length() / v_points), velocity_(v_points), distance_(v_points) {
    if (v_points < 100) throw std::invalid_argument("VelocitySamples: v_points must be >= 100");
    for (int i = 0; i < v_points; ++i) {
        const double v = interval.lo + (i + 0.5) * width_;
        velocity_[i] = flux.velocity(v);
        distance_[i] = zeros.distance(v);
    }
}

std::vector<double> VelocitySamples::restricted_sorted(double lambda) const {
    std::vector<double> out;
    out.reserve(velocity_.size());
    for (std::size_t i = 0; i < velocity_.size(); ++i) {
        if (distance_[i] >= lambda) out.push_back(velocity_[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> sup_sublevel_measures(const std::vector<double>& a, double cell_width,
                                          const std::vector<double>& delta_grid, DirectionSearch search,
                                          int sphere_points) {
    const std::size_t n = a.size();
    std::vector<double> result(delta_grid.size(), 0.0);
    if (n == 0) return result;
    for (std::size_t d = 0; d < delta_grid.size(); ++d) {
        const double delta = delta_grid[d];
        std::size_t best = 0;
        if (search == DirectionSearch::exact) {
            if (delta >= 1.0) {
                best = n;  // xi = 0, |tau| = 1 <= delta
            } else {
                // With xi = 1/sqrt(1+c^2), tau = -c xi the constraint reads
                // |a - c| <= delta*sqrt(1+c^2). Both window ends increase with
                // c, so an optimal window has its lower end on a sample.
                const double shrink = 1.0 - delta * delta;
                std::size_t j = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k > 0 && a[k] == a[k - 1]) continue;
                    const double c = (a[k] + delta * std::sqrt(1.0 + a[k] * a[k] - delta * delta)) / shrink;
                    const double upper = c + delta * std::sqrt(1.0 + c * c);
                    j = std::max(j, k);
                    while (j < n && a[j] <= upper) ++j;
                    best = std::max(best, j - k);
                }
            }
        } else {
            for (int s = 0; s < sphere_points; ++s) {
                const double theta = std::numbers::pi * s / sphere_points;
                const double tau = std::cos(theta), xi = std::sin(theta);
                std::size_t count = 0;
                if (s == 0) {
                    count = std::abs(tau) <= delta ? n : 0;
                } else {
                    const double lo = (-tau - delta) / xi, hi = (-tau + delta) / xi;
                    count = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), hi) -
                                                     std::lower_bound(a.begin(), a.end(), lo));
                }
                best = std::max(best, count);
            }
        }
        result[d] = static_cast<double>(best) * cell_width;
    }
    return result;
}

ExponentEstimate estimate_alpha(const Flux& flux, Interval interval, const NondegOptions& options,
                                std::vector<MeasureSample>* table) {
    check_dyadic_grid(options.delta_grid, "delta_grid");
    const auto [lo_it, hi_it] = std::minmax_element(options.delta_grid.begin(), options.delta_grid.end());
    if (*hi_it / *lo_it < 100.0) throw std::invalid_argument("delta_grid must span at least two decades");
    if (options.sphere_points < 64) throw std::invalid_argument("sphere_points must be >= 64");

    const VelocitySamples samples(flux, interval, DegeneracySet{interval, {}}, options.v_points);
    const auto sorted = samples.restricted_sorted(0.0);
    const auto measures = sup_sublevel_measures(sorted, samples.cell_width(), options.delta_grid,
                                                options.search, options.sphere_points);
    if (table) {
        for (std::size_t d = 0; d < measures.size(); ++d) {
            table->push_back({options.delta_grid[d], 0.0, measures[d]});
        }
    }
    if (std::all_of(measures.begin(), measures.end(), [](double m) { return m == 0.0; })) {
        throw ComputationError("interval does not see the flux range");
    }
    auto w = fit_resolved_window(options.delta_grid, measures, samples.cell_width(), options);
    if (!w) throw ComputationError("estimate_alpha: too few resolved sublevel measures to fit");
    return {w->fit.slope, std::move(w->fit)};
}

ExponentEstimate estimate_kappa(const Flux& flux, Interval interval, const DegeneracySet& zeros,
                                const std::vector<double>& lambda_grid) {
    check_dyadic_grid(lambda_grid, "lambda_grid");
    if (zeros.empty()) return {0.0, {}};
    constexpr int samples_per_zero = 4097;
    std::vector<double> sups;
    for (double lambda : lambda_grid) {
        double sup = 0.0;
        for (double z : zeros.zeros) {
            const double lo = std::max(interval.lo, z - lambda), hi = std::min(interval.hi, z + lambda);
            for (int i = 0; i < samples_per_zero; ++i) {
                const double v = lo + (hi - lo) * i / (samples_per_zero - 1);
                sup = std::max(sup, std::abs(flux.velocity_derivative(v)));
            }
        }
        sups.push_back(sup);
    }
    if (std::any_of(sups.begin(), sups.end(), [](double s) { return !(s > 0.0); })) {
        throw ComputationError("estimate_kappa: a' vanishes identically near Z");
    }
    auto fit = fit_power_law(lambda_grid, sups);
    return {fit.slope, std::move(fit)};
}

BetaTauEstimate estimate_beta_tau(const Flux& flux, Interval interval, const DegeneracySet& zeros,
                                  const NondegOptions& options, std::vector<MeasureSample>* table) {
    check_dyadic_grid(options.delta_grid, "delta_grid");
    check_dyadic_grid(options.lambda_grid, "lambda_grid");

    const VelocitySamples samples(flux, interval, zeros, options.v_points);
    const auto& lambdas = options.lambda_grid;
    std::vector<std::vector<double>> measures(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t l) {
        const auto sorted = samples.restricted_sorted(lambdas[l]);
        if (sorted.empty()) return;
        measures[l] = sup_sublevel_measures(sorted, samples.cell_width(), options.delta_grid, options.search,
                                            options.sphere_points);
    });

    struct Row {
        double lambda;
        WindowFit window;
    };
    std::vector<Row> rows;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        if (measures[l].empty()) continue;  // {dist(v,Z) >= lambda} is empty
        if (table) {
            for (std::size_t d = 0; d < measures[l].size(); ++d) {
                table->push_back({options.delta_grid[d], lambdas[l], measures[l][d]});
            }
        }
        if (auto w = fit_resolved_window(options.delta_grid, measures[l], samples.cell_width(), options)) {
            rows.push_back({lambdas[l], std::move(*w)});
        }
    }
    if (rows.empty()) throw ComputationError("estimate_beta_tau: no lambda gave a resolved fit");

    BetaTauEstimate est;
    for (const auto& r : rows) {
        est.beta_per_lambda.push_back(r.window.fit.slope);
        est.lambdas_used.push_back(r.lambda);
    }
    est.beta = median(est.beta_per_lambda);
    // Report the fit whose slope is closest to the median.
    const auto closest = std::min_element(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        return std::abs(a.window.fit.slope - est.beta) < std::abs(b.window.fit.slope - est.beta);
    });
    est.beta_fit = closest->window.fit;

    // Intercepts with the slope pinned at the median beta.
    std::vector<std::pair<double, double>> intercepts;
    for (const auto& r : rows) {
        double c = 0.0;
        for (const auto& [log_delta, log_measure] : r.window.fit.samples) c += log_measure - est.beta * log_delta;
        intercepts.emplace_back(std::log2(r.lambda), c / static_cast<double>(r.window.fit.samples.size()));
    }
    if (zeros.empty()) {
        est.tau = 0.0;  // no restriction is active; the intercepts are flat
    } else if (intercepts.size() >= 2) {
        est.tau_fit = fit_line(intercepts);
        est.tau = -est.tau_fit.slope;
    } else {
        throw ComputationError("estimate_beta_tau: need at least two resolved lambda values for tau");
    }
    return est;
}

DegeneracyProfile analyze_flux(const Flux& flux, Interval interval, const NondegOptions& options) {
    DegeneracyProfile profile;
    profile.interval = interval;
    profile.zeros = degeneracy_set(flux, interval, options.scan_points);

    auto alpha = estimate_alpha(flux, interval, options, &profile.table);
    auto kappa = estimate_kappa(flux, interval, profile.zeros, options.lambda_grid);
    auto bt = estimate_beta_tau(flux, interval, profile.zeros, options, &profile.table);

    profile.alpha = alpha.value;
    profile.kappa = kappa.value;
    profile.beta = bt.beta;
    profile.tau = bt.tau;
    profile.alpha_fit = std::move(alpha.fit);
    profile.kappa_fit = std::move(kappa.fit);
    profile.beta_fit = std::move(bt.beta_fit);
    profile.tau_fit = std::move(bt.tau_fit);
    if (profile.zeros.empty()) profile.warnings.push_back("Z is empty on the interval: kappa = tau = 0 by convention");

    auto clip = [&](double& x, double lo, double hi, const char* name) {
        if (x > hi) {
            profile.warnings.push_back(std::string(name) + " estimate " + std::to_string(x) + " clipped to " +
                                       std::to_string(hi));
            x = hi;
        }
        if (x < lo) {
            profile.warnings.push_back(std::string(name) + " estimate " + std::to_string(x) + " clipped to " +
                                       std::to_string(lo));
            x = lo;
        }
    };
    clip(profile.beta, 0.0, 1.0, "beta");
    clip(profile.alpha, 0.0, 1.0, "alpha");
    clip(profile.kappa, 0.0, std::numeric_limits<double>::infinity(), "kappa");
    clip(profile.tau, 0.0, std::numeric_limits<double>::infinity(), "tau");
    if (profile.alpha > profile.beta) {
        profile.warnings.push_back("alpha estimate exceeds beta; alpha clipped to beta");
        profile.alpha = profile.beta;
    }
    if (!(profile.alpha > 0.0) || !(profile.beta > 0.0)) {
        throw ComputationError("analyze_flux: nonpositive alpha or beta estimate");
    }
    for (const auto* fit : {&profile.alpha_fit, &profile.beta_fit, &profile.kappa_fit, &profile.tau_fit}) {
        if (!fit->samples.empty() && fit->r_squared < options.min_r_squared) profile.low_confidence = true;
    }
    return profile;
}

}  // namespace kinreg
