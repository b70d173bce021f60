#include "kinreg/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kinreg/errors.hpp"

namespace kinreg {

std::vector<double> GridSpec::centres() const {
    std::vector<double> c(static_cast<std::size_t>(n_cells));
    for (int i = 0; i < n_cells; ++i) c[i] = centre(i);
    return c;
}

void GridSpec::validate() const {
    if (!(x_hi > x_lo) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
        throw std::invalid_argument("grid: x_hi must exceed x_lo");
    }
    if (n_cells < 8) throw std::invalid_argument("grid: n_cells must be >= 8");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("grid: t_end must be positive");
    if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("grid: cfl must lie in (0, 1)");
    if (store_every < 0) throw std::invalid_argument("grid: store_every must be >= 0");
    if (max_slices < 2) throw std::invalid_argument("grid: max_slices must be >= 2");
    if (!(fixed_dt >= 0.0)) throw std::invalid_argument("grid: fixed_dt must be >= 0");
}

double SpaceTimeField::mass(std::size_t slice) const {
    double m = 0.0;
    for (double u : values.at(slice)) m += u;
    return m * dx();
}

double SpaceTimeField::min_value() const {
    double m = values.front().front();
    for (const auto& row : values) m = std::min(m, *std::min_element(row.begin(), row.end()));
    return m;
}

double SpaceTimeField::max_value() const {
    double m = values.front().front();
    for (const auto& row : values) m = std::max(m, *std::max_element(row.begin(), row.end()));
    return m;
}

double godunov_flux(const Flux& flux, double u_left, double u_right) {
    if (u_left == u_right) return flux.value(u_left);
    return u_left < u_right ? flux.min_on(u_left, u_right) : flux.max_on(u_right, u_left);
}

Interval reachable_range(const std::vector<double>& u0, const SourceSpec& source, const GridSpec& grid) {
    const auto [lo, hi] = std::minmax_element(u0.begin(), u0.end());
    double forcing = 0.0;
    switch (source.kind()) {
        case SourceSpec::Kind::zero: break;
        case SourceSpec::Kind::constant: forcing = std::abs(source.constant_value()) * grid.t_end; break;
        default: {
            // Piecewise-constant tables are integrated exactly; expressions
            // are bounded by their sampled supremum times T.
            const auto centres = grid.centres();
            if (source.kind() == SourceSpec::Kind::table) {
                const auto& times = source.table_times();
                for (std::size_t k = 0; k < times.size(); ++k) {
                    const double t0 = std::max(0.0, times[k]);
                    const double t1 = k + 1 < times.size() ? std::min(grid.t_end, times[k + 1]) : grid.t_end;
                    if (t1 > t0) forcing += (t1 - t0) * source.sup_abs(t0, centres);
                }
            } else {
                double sup = 0.0;
                constexpr int samples = 257;
                for (int k = 0; k < samples; ++k) {
                    sup = std::max(sup, source.sup_abs(grid.t_end * k / (samples - 1), centres));
                }
                forcing = sup * grid.t_end;
            }
        }
    }
    return {*lo - forcing, *hi + forcing};
}

double stable_fixed_dt(const Flux& flux, const GridSpec& grid,
                       const std::vector<std::pair<const std::vector<double>*, const SourceSpec*>>& runs) {
    double amax = 0.0;
    for (const auto& [u0, source] : runs) {
        const auto range = reachable_range(*u0, *source, grid);
        amax = std::max(amax, flux.max_abs_velocity(range.lo, range.hi));
    }
    if (!std::isfinite(amax)) throw ComputationError("stable_fixed_dt: unbounded velocity on the reachable range");
    return grid.cfl * grid.dx() / std::max(amax, 1e-12);
}

SpaceTimeField solve(const Flux& flux, const std::vector<double>& u0, const SourceSpec& source,
                     const GridSpec& grid) {
    grid.validate();
    const auto n = static_cast<std::size_t>(grid.n_cells);
    if (u0.size() != n) {
        throw std::invalid_argument("solve: u0 has " + std::to_string(u0.size()) + " cells, grid has " +
                                    std::to_string(n));
    }
    for (double u : u0) {
        if (!std::isfinite(u)) throw std::invalid_argument("solve: u0 must be finite");
    }
    source.check_cells(n);
    const auto range = reachable_range(u0, source, grid);
    if (!std::isfinite(flux.max_abs_velocity(range.lo, range.hi))) {
        throw ComputationError("solve: max|a| over the reachable range is not finite");
    }

    const double dx = grid.dx();
    const auto centres = grid.centres();
    auto source_row = [&](double t) {
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = source.value(t, i, centres[i]);
        return s;
    };

    SpaceTimeField field;
    field.grid = grid;
    field.cadence = grid.store_every > 0 ? grid.store_every : 1;
    std::vector<std::size_t> stored_steps{0};
    field.times.push_back(0.0);
    field.values.push_back(u0);
    field.source_trace.push_back(source_row(0.0));
    field.step_times.push_back(0.0);

    std::vector<double> u = u0, next(n), interface_flux(n + 1);
    double t = 0.0;
    std::size_t step = 0;
    bool done = false;
    while (!done) {
        double dt = grid.fixed_dt;
        if (dt == 0.0) {
            double amax = 0.0;
            for (double ui : u) amax = std::max(amax, std::abs(flux.velocity(ui)));
            dt = grid.cfl * dx / std::max(amax, 1e-12);
        }
        if (t + dt >= grid.t_end * (1.0 - 1e-14)) {
            dt = grid.t_end - t;
            done = true;
        }
        // interface_flux[i] sits between cells i-1 and i.
        for (std::size_t i = 0; i <= n; ++i) {
            double left, right;
            if (grid.boundary == Boundary::periodic) {
                left = u[(i + n - 1) % n];
                right = u[i % n];
            } else {
                left = u[i == 0 ? 0 : i - 1];
                right = u[i == n ? n - 1 : i];
            }
            interface_flux[i] = godunov_flux(flux, left, right);
        }
        const double ratio = dt / dx;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = u[i] - ratio * (interface_flux[i + 1] - interface_flux[i]) + dt * source.value(t, i, centres[i]);
            if (!std::isfinite(next[i])) {
                throw ComputationError("solve: non-finite state at step " + std::to_string(step + 1) + ", cell " +
                                       std::to_string(i));
            }
        }
        u.swap(next);
        t = done ? grid.t_end : t + dt;
        ++step;
        field.step_times.push_back(t);

        if (done || step % static_cast<std::size_t>(field.cadence) == 0) {
            field.times.push_back(t);
            field.values.push_back(u);
            field.source_trace.push_back(source_row(t));
            stored_steps.push_back(step);
        }
        if (grid.store_every == 0 && field.times.size() > static_cast<std::size_t>(grid.max_slices)) {
            // Double the cadence and drop the slices that fall off it.
            field.cadence *= 2;
            std::size_t keep = 0;
            for (std::size_t k = 0; k < stored_steps.size(); ++k) {
                if (stored_steps[k] % static_cast<std::size_t>(field.cadence) != 0) continue;
                if (keep == k) {
                    ++keep;
                    continue;
                }
                stored_steps[keep] = stored_steps[k];
                field.times[keep] = field.times[k];
                field.values[keep] = std::move(field.values[k]);
                field.source_trace[keep] = std::move(field.source_trace[k]);
                ++keep;
            }
            stored_steps.resize(keep);
            field.times.resize(keep);
            field.values.resize(keep);
            field.source_trace.resize(keep);
        }
    }
    if (field.times.back() != grid.t_end) {
        field.times.push_back(grid.t_end);
        field.values.push_back(u);
        field.source_trace.push_back(source_row(grid.t_end));
    }
    field.steps = step;
    return field;
}

std::vector<double> riemann_data(const GridSpec& grid, double u_left, double u_right, double x0) {
    std::vector<double> u(static_cast<std::size_t>(grid.n_cells));
    const double dx = grid.dx();
    for (int i = 0; i < grid.n_cells; ++i) {
        const double a = grid.x_lo + i * dx, b = a + dx;
        const double left_fraction = std::clamp((x0 - a) / dx, 0.0, 1.0);
        u[i] = (b <= x0) ? u_left : (a >= x0 ? u_right : left_fraction * u_left + (1.0 - left_fraction) * u_right);
    }
    return u;
}

std::vector<double> cell_averages(const GridSpec& grid, const Expression& e) {
    // Gauss-Legendre nodes and weights on [-1, 1].
    constexpr std::array<double, 4> nodes{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                          0.8611363115940526};
    constexpr std::array<double, 4> weights{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                            0.3478548451374538};
    std::vector<double> u(static_cast<std::size_t>(grid.n_cells));
    const double half = 0.5 * grid.dx();
    for (int i = 0; i < grid.n_cells; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * e(0.0, grid.centre(i) + half * nodes[k]);
        u[i] = 0.5 * acc;
    }
    return u;
}

RiemannSolution::RiemannSolution(const Flux& flux, double u_left, double u_right, int samples)
    : flux_(flux), u_left_(u_left), u_right_(u_right), reflected_(u_left > u_right) {
    if (samples < 2) throw std::invalid_argument("RiemannSolution: need at least two samples");
    if (u_left == u_right) return;
    // In the reflected frame w = -u the data increase and the lower convex
    // envelope of B(w) = -A(-w) gives the solution.
    const double lo = reflected_ ? -u_left : u_left;
    const double hi = reflected_ ? -u_right : u_right;
    auto value = [&](double w) { return reflected_ ? -flux_.value(-w) : flux_.value(w); };

    struct Point {
        double x, y;
    };
    std::vector<Point> pts(static_cast<std::size_t>(samples) + 1);
    for (int k = 0; k <= samples; ++k) {
        const double w = (k == samples) ? hi : lo + (hi - lo) * k / samples;
        pts[k] = {w, value(w)};
        if (!std::isfinite(pts[k].y)) throw ComputationError("RiemannSolution: non-finite flux sample");
    }
    // Monotone chain, lower hull; near-collinear points (relative cross
    // product below 1e-12) are dropped.
    std::vector<std::size_t> hull;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        while (hull.size() >= 2) {
            const Point& a = pts[hull[hull.size() - 2]];
            const Point& b = pts[hull.back()];
            const Point& c = pts[k];
            const double dx1 = b.x - a.x, dy1 = b.y - a.y, dx2 = c.x - a.x, dy2 = c.y - a.y;
            const double cross = dx1 * dy2 - dy1 * dx2;
            const double scale = std::abs(dx1 * dy2) + std::abs(dy1 * dx2);
            if (cross <= 1e-12 * scale) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(k);
    }
    for (std::size_t k : hull) hull_.push_back({pts[k].x, k});
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const Point& a = pts[hull[e]];
        const Point& b = pts[hull[e + 1]];
        slopes_.push_back((b.y - a.y) / (b.x - a.x));
    }
}

std::size_t RiemannSolution::shock_count() const {
    std::size_t shocks = 0;
    for (std::size_t e = 0; e + 1 < hull_.size(); ++e) {
        if (hull_[e + 1].index - hull_[e].index > 1) ++shocks;
    }
    return shocks;
}

double RiemannSolution::lower_value(double xi) const {
    // Increasing data w_lo < w_hi in the (possibly reflected) frame.
    if (xi < slopes_.front()) return hull_.front().v;
    if (xi > slopes_.back()) return hull_.back().v;
    const auto e = static_cast<std::size_t>(std::lower_bound(slopes_.begin(), slopes_.end(), xi) - slopes_.begin());
    // xi lies in (slopes_[e-1], slopes_[e]]: the envelope's derivative
    // crosses xi at vertex e.
    const bool tight_left = e > 0 && hull_[e].index - hull_[e - 1].index == 1;
    const bool tight_right = hull_[e + 1].index - hull_[e].index == 1;
    double lo = tight_left ? hull_[e - 1].v : hull_[e].v;
    double hi = tight_right ? hull_[e + 1].v : hull_[e].v;
    if (!(hi > lo)) return hull_[e].v;
    auto speed = [&](double w) { return reflected_ ? flux_.velocity(-w) : flux_.velocity(w); };
    // On a stretch where the envelope follows A, the characteristic
    // speed is monotone; invert it by bisection.
    if (!(speed(lo) <= xi && xi <= speed(hi))) return hull_[e].v;
    for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        (speed(m) < xi ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

double RiemannSolution::operator()(double xi) const {
    if (u_left_ == u_right_) return u_left_;
    const double w = lower_value(xi);
    return reflected_ ? -w : w;
}

double riemann_exact(const Flux& flux, double u_left, double u_right, double xi) {
    return RiemannSolution(flux, u_left, u_right)(xi);
}

}  // namespace kinreg
