#include "kinreg/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kinreg/errors.hpp"
#include "kinreg/parallel.hpp"

namespace kinreg {

double chi_cell_average(double lo, double hi, double u) noexcept {
    const double positive = std::max(0.0, std::min(hi, u) - std::max(lo, 0.0));
    const double negative = std::max(0.0, std::min(hi, 0.0) - std::max(lo, u));
    return (positive - negative) / (hi - lo);
}

VelocityGrid VelocityGrid::bracketing(double u_min, double u_max, int n_v, double margin) {
    if (n_v < 32) throw std::invalid_argument("velocity grid: n_v must be >= 32");
    if (!(margin >= 0.1)) throw std::invalid_argument("velocity grid: margin must be >= 0.1");
    const double lo = std::min({0.0, u_min, u_max});
    const double hi = std::max({0.0, u_min, u_max});
    const double range = hi > lo ? hi - lo : 1.0;
    // Strictly larger than the requested margin.
    const double pad = margin * range * (1.0 + 1e-9);
    return {lo - pad, hi + pad, n_v};
}

VelocityGrid VelocityGrid::bracketing(const SpaceTimeField& field, int n_v, double margin) {
    return bracketing(field.min_value(), field.max_value(), n_v, margin);
}

void VelocityGrid::validate() const {
    if (!(v_hi > v_lo)) throw std::invalid_argument("velocity grid: v_hi must exceed v_lo");
    if (n_v < 32) throw std::invalid_argument("velocity grid: n_v must be >= 32");
}

namespace {

void require_bracket(const SpaceTimeField& field, const VelocityGrid& vgrid) {
    vgrid.validate();
    if (field.values.empty()) throw std::invalid_argument("velocity grid: empty field");
    if (field.min_value() < vgrid.v_lo || field.max_value() > vgrid.v_hi) {
        throw std::invalid_argument("velocity grid does not bracket the field range");
    }
}

}  // namespace

std::vector<std::vector<double>> velocity_average(const SpaceTimeField& field, const VelocityGrid& vgrid,
                                                  const std::function<double(double)>& phi) {
    require_bracket(field, vgrid);
    std::vector<double> weight(static_cast<std::size_t>(vgrid.n_v));
    for (int j = 0; j < vgrid.n_v; ++j) weight[j] = phi(vgrid.mid(j)) * vgrid.dv();
    std::vector<std::vector<double>> out(field.values.size());
    for (std::size_t k = 0; k < field.values.size(); ++k) {
        const auto& row = field.values[k];
        out[k].resize(row.size());
        for (std::size_t i = 0; i < row.size(); ++i) {
            double acc = 0.0;
            for (int j = 0; j < vgrid.n_v; ++j) acc += chi(vgrid.mid(j), row[i]) * weight[j];
            out[k][i] = acc;
        }
    }
    return out;
}

std::vector<std::vector<double>> velocity_average(const SpaceTimeField& field, const VelocityGrid& vgrid) {
    return velocity_average(field, vgrid, [](double) { return 1.0; });
}

double KineticDefect::negativity_ratio(double relative_cutoff) const {
    double largest = 0.0;
    for (double p : column_positive) largest = std::max(largest, p);
    if (largest <= 0.0) return 0.0;
    double ratio = 0.0;
    for (std::size_t j = 0; j < column_positive.size(); ++j) {
        if (column_positive[j] < relative_cutoff * largest) continue;
        ratio = std::max(ratio, -column_negative[j] / column_positive[j]);
    }
    return ratio;
}

namespace {

struct SliceTotals {
    std::vector<double> column, positive, negative;
    double floor = 0.0;
    double bottom = 0.0;
};

}  // namespace

KineticDefect reconstruct_defect(const SpaceTimeField& field, const Flux& flux, const SourceSpec& source,
                                 const VelocityGrid& vgrid, const DefectOptions& options) {
    require_bracket(field, vgrid);
    if (field.cadence != 1 || field.times.size() != field.step_times.size()) {
        throw std::invalid_argument("reconstruct_defect: every time step must be stored (store_every = 1)");
    }
    if (!(options.time_trim >= 0.0 && options.time_trim < 0.5) ||
        !(options.space_trim >= 0.0 && options.space_trim < 0.5)) {
        throw std::invalid_argument("reconstruct_defect: trims must lie in [0, 0.5)");
    }
    const auto& grid = field.grid;
    const auto n = static_cast<std::size_t>(grid.n_cells);
    const std::size_t steps = field.times.size() - 1;
    const auto n0 = static_cast<std::size_t>(std::lround(options.time_trim * static_cast<double>(steps)));
    const auto i0 = static_cast<std::size_t>(std::lround(options.space_trim * static_cast<double>(n)));
    if (2 * n0 >= steps || 2 * i0 >= n) throw std::invalid_argument("reconstruct_defect: empty measurement window");

    KineticDefect out;
    out.grid = grid;
    out.vgrid = vgrid;
    out.slice_begin = n0;
    out.slice_end = steps - n0;
    out.cell_begin = i0;
    out.cell_end = n - i0;
    out.duration = field.times[out.slice_end] - field.times[out.slice_begin];

    if (grid.boundary == Boundary::outflow) {
        if (i0 == 0) throw ComputationError("reconstruct_defect: measurement window touches the outflow boundary");
        // Diffusive tails far below the defect resolution are tolerated.
        const double tol = 1e-6 * std::max(1.0, field.max_value() - field.min_value());
        for (std::size_t edge : {std::size_t{0}, n - 1}) {
            const double ref = field.values[0][edge];
            for (std::size_t k = 0; k <= out.slice_end; ++k) {
                if (std::abs(field.values[k][edge] - ref) > tol) {
                    throw ComputationError("reconstruct_defect: waves reach the outflow boundary at t = " +
                                           std::to_string(field.times[k]));
                }
            }
        }
    }

    const int nv = vgrid.n_v;
    const double dv = vgrid.dv();
    const double dx = grid.dx();
    std::vector<double> speed(static_cast<std::size_t>(nv)), lo(nv), hi(nv);
    for (int j = 0; j < nv; ++j) {
        speed[j] = flux.velocity(vgrid.mid(j));
        lo[j] = vgrid.edge(j);
        hi[j] = vgrid.edge(j + 1);
    }
    auto cell_index = [&](std::ptrdiff_t i) -> std::size_t {
        if (grid.boundary == Boundary::periodic) {
            const auto m = static_cast<std::ptrdiff_t>(n);
            return static_cast<std::size_t>(((i % m) + m) % m);
        }
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
    };

    const std::size_t window = out.slice_end - out.slice_begin;
    const std::size_t width = out.cell_end - out.cell_begin;
    std::vector<SliceTotals> totals(window);
    if (options.keep_density) out.density.assign(window, {});

    parallel_for(window, [&](std::size_t w) {
        const std::size_t k = out.slice_begin + w;
        const double dt = field.times[k + 1] - field.times[k];
        const auto& now = field.values[k];
        const auto& next = field.values[k + 1];
        SliceTotals acc{std::vector<double>(nv, 0.0), std::vector<double>(nv, 0.0), std::vector<double>(nv, 0.0)};
        std::vector<double> residual(nv), m(nv);
        if (options.keep_density) out.density[w].assign(width, {});
        for (std::size_t i = out.cell_begin; i < out.cell_end; ++i) {
            const double u = now[i];
            const double u_left = now[cell_index(static_cast<std::ptrdiff_t>(i) - 1)];
            const double u_right = now[cell_index(static_cast<std::ptrdiff_t>(i) + 1)];
            for (int j = 0; j < nv; ++j) {
                const double f = chi_cell_average(lo[j], hi[j], u);
                const double dfdt = (chi_cell_average(lo[j], hi[j], next[i]) - f) / dt;
                const double dfdx = speed[j] >= 0.0 ? (f - chi_cell_average(lo[j], hi[j], u_left)) / dx
                                                    : (chi_cell_average(lo[j], hi[j], u_right) - f) / dx;
                residual[j] = dfdt + speed[j] * dfdx;
            }
            const double s = source.value(field.times[k], i, grid.centre(static_cast<int>(i)));
            if (s != 0.0) {
                const int j = std::clamp(static_cast<int>(std::floor((u - vgrid.v_lo) / dv)), 0, nv - 1);
                residual[j] -= s / dv;
            }
            // m_j = -dv (sum_{l > j} R_l + R_j / 2)
            double above = 0.0;
            for (int j = nv - 1; j >= 0; --j) {
                m[j] = -dv * (above + 0.5 * residual[j]);
                above += residual[j];
            }
            acc.bottom = std::max(acc.bottom, std::abs(m[0]));
            for (int j = 0; j < nv; ++j) {
                const double weight = m[j] * dt * dx;
                acc.column[j] += weight;
                (m[j] >= 0.0 ? acc.positive[j] : acc.negative[j]) += weight;
                acc.floor = std::min(acc.floor, m[j]);
            }
            if (options.keep_density) out.density[w][i - out.cell_begin] = m;
        }
        totals[w] = std::move(acc);
    });

    out.column_mass.assign(nv, 0.0);
    out.column_positive.assign(nv, 0.0);
    out.column_negative.assign(nv, 0.0);
    for (const auto& t : totals) {
        for (int j = 0; j < nv; ++j) {
            out.column_mass[j] += t.column[j];
            out.column_positive[j] += t.positive[j];
            out.column_negative[j] += t.negative[j];
        }
        out.negativity_floor = std::min(out.negativity_floor, t.floor);
        out.bottom_residual = std::max(out.bottom_residual, t.bottom);
    }
    for (int j = 0; j < nv; ++j) {
        out.total_mass += out.column_mass[j] * dv;
        out.positive_mass += out.column_positive[j] * dv;
        out.negative_mass += out.column_negative[j] * dv;
    }
    return out;
}

double singular_moment(const KineticDefect& defect, double v0, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("singular_moment: alpha must lie in (0, 1]");
    const auto& vg = defect.vgrid;
    const double dv = vg.dv();
    double total = 0.0;
    for (int j = 0; j < vg.n_v && j < static_cast<int>(defect.column_mass.size()); ++j) {
        const double d = std::abs(vg.mid(j) - v0);
        double kernel;
        if (d < 0.5 * dv) {
            const double below = v0 - vg.edge(j), above = vg.edge(j + 1) - v0;
            kernel = (std::pow(below, alpha) + std::pow(above, alpha)) / (alpha * dv);
        } else {
            kernel = std::pow(d, alpha - 1.0);
        }
        total += kernel * defect.column_mass[j] * dv;
    }
    return total;
}

ContractionResult contraction_check(const SpaceTimeField& run1, const SpaceTimeField& run2,
                                    const std::vector<double>& u01, const std::vector<double>& u02,
                                    const SourceSpec& s1, const SourceSpec& s2, double tolerance) {
    const auto& g1 = run1.grid;
    const auto& g2 = run2.grid;
    if (g1.x_lo != g2.x_lo || g1.x_hi != g2.x_hi || g1.n_cells != g2.n_cells || g1.boundary != g2.boundary) {
        throw std::invalid_argument("contraction_check: runs use different grids");
    }
    if (run1.step_times != run2.step_times || run1.times != run2.times) {
        throw std::invalid_argument("contraction_check: runs use different time levels");
    }
    const auto n = static_cast<std::size_t>(g1.n_cells);
    if (u01.size() != n || u02.size() != n) throw std::invalid_argument("contraction_check: data size mismatch");
    const double dx = g1.dx();

    ContractionResult r;
    for (std::size_t k = 0; k < run1.values.size(); ++k) {
        double positive = 0.0;
        for (std::size_t i = 0; i < n; ++i) positive += std::max(0.0, run1.values[k][i] - run2.values[k][i]);
        r.lhs = std::max(r.lhs, positive * dx);
    }
    double initial = 0.0;
    for (std::size_t i = 0; i < n; ++i) initial += std::max(0.0, u01[i] - u02[i]);
    double forcing = 0.0;
    const auto centres = g1.centres();
    for (std::size_t k = 0; k + 1 < run1.step_times.size(); ++k) {
        const double t = run1.step_times[k];
        const double dt = run1.step_times[k + 1] - t;
        double row = 0.0;
        for (std::size_t i = 0; i < n; ++i) row += std::abs(s1.value(t, i, centres[i]) - s2.value(t, i, centres[i]));
        forcing += row * dt;
    }
    r.rhs = (initial + forcing) * dx;
    r.deficit = r.rhs - r.lhs;
    r.pass = r.deficit >= -tolerance;
    return r;
}

}  // namespace kinreg
