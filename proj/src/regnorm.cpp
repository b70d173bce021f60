#include "kinreg/regnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kinreg/errors.hpp"
#include "kinreg/parallel.hpp"

namespace kinreg {

SpaceTimeField profile_field(double x_lo, double x_hi, std::vector<double> values) {
    SpaceTimeField field;
    field.grid.x_lo = x_lo;
    field.grid.x_hi = x_hi;
    field.grid.n_cells = static_cast<int>(values.size());
    field.grid.t_end = 0.0;
    field.times = {0.0};
    field.step_times = {0.0};
    field.source_trace = {std::vector<double>(values.size(), 0.0)};
    field.values = {std::move(values)};
    return field;
}

RegularityWindow regularity_window(const SpaceTimeField& field, double trim) {
    if (field.values.empty()) throw std::invalid_argument("regularity: empty field");
    RegularityWindow w;
    const std::size_t n = field.values.front().size();
    const std::size_t rows = field.values.size();
    const auto i0 = static_cast<std::size_t>(std::lround(trim * static_cast<double>(n)));
    w.cell_begin = i0;
    w.cell_end = n - i0;
    if (rows > 1) {
        const auto k0 = static_cast<std::size_t>(std::lround(trim * static_cast<double>(rows)));
        w.slice_begin = k0;
        w.slice_end = rows - k0;
    } else {
        w.slice_end = 1;
    }
    if (w.cell_end <= w.cell_begin || w.slice_end <= w.slice_begin) {
        throw std::invalid_argument("regularity: empty window");
    }
    return w;
}

namespace {

double mean_row_spacing(const SpaceTimeField& field, const RegularityWindow& w) {
    if (w.slice_end - w.slice_begin < 2) return 1.0;
    return (field.times[w.slice_end - 1] - field.times[w.slice_begin]) /
           static_cast<double>(w.slice_end - w.slice_begin - 1);
}

}  // namespace

double shift_length(const SpaceTimeField& field, int h_cells, Direction direction) {
    if (direction == Direction::space) return h_cells * field.dx();
    return h_cells * mean_row_spacing(field, regularity_window(field));
}

double difference_norm(const SpaceTimeField& field, int h_cells, double p, Direction direction) {
    if (h_cells < 1) throw std::invalid_argument("difference_norm: h_cells must be >= 1");
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("difference_norm: p must be finite and >= 1");
    const auto w = regularity_window(field);
    const auto h = static_cast<std::size_t>(h_cells);
    const std::size_t rows = w.slice_end - w.slice_begin;
    const std::size_t cells = w.cell_end - w.cell_begin;
    const std::size_t extent = direction == Direction::space ? cells : rows;
    if (h >= extent) {
        throw std::invalid_argument("difference_norm: shift of " + std::to_string(h_cells) +
                                    " exceeds the window (" + std::to_string(extent) + ")");
    }
    const double cell_size = field.dx() * (rows > 1 ? mean_row_spacing(field, w) : 1.0);
    double acc = 0.0;
    if (direction == Direction::space) {
        for (std::size_t k = w.slice_begin; k < w.slice_end; ++k) {
            const auto& row = field.values[k];
            for (std::size_t i = w.cell_begin; i + h < w.cell_end; ++i) acc += std::pow(std::abs(row[i + h] - row[i]), p);
        }
    } else {
        for (std::size_t k = w.slice_begin; k + h < w.slice_end; ++k) {
            const auto& row = field.values[k];
            const auto& later = field.values[k + h];
            for (std::size_t i = w.cell_begin; i < w.cell_end; ++i) acc += std::pow(std::abs(later[i] - row[i]), p);
        }
    }
    return std::pow(acc * cell_size, 1.0 / p);
}

RegularityFit estimate_exponent(const SpaceTimeField& field, double p, Direction direction, std::vector<int> h_cells) {
    RegularityFit out;
    out.p = p;
    out.direction = direction;
    out.window = regularity_window(field);
    if (h_cells.empty()) {
        const std::size_t extent = direction == Direction::space ? out.window.cell_end - out.window.cell_begin
                                                                 : out.window.slice_end - out.window.slice_begin;
        for (std::size_t h = 4; 8 * h <= extent; h *= 2) h_cells.push_back(static_cast<int>(h));
    }
    if (h_cells.size() < 4) {
        throw std::invalid_argument("estimate_exponent: need at least 4 shifts inside the window, have " +
                                    std::to_string(h_cells.size()));
    }
    std::vector<double> norms(h_cells.size());
    parallel_for(h_cells.size(), [&](std::size_t k) { norms[k] = difference_norm(field, h_cells[k], p, direction); });

    std::vector<double> hs, positive;
    for (std::size_t k = 0; k < h_cells.size(); ++k) {
        out.window.h_cells.push_back(h_cells[k]);
        out.window.h.push_back(shift_length(field, h_cells[k], direction));
        out.window.norms.push_back(norms[k]);
        if (norms[k] > 0.0) {
            hs.push_back(out.window.h.back());
            positive.push_back(norms[k]);
        }
    }
    if (positive.empty()) {
        out.constant_field = true;
        out.s_hat = std::numeric_limits<double>::infinity();
        return out;
    }
    if (positive.size() < 2) throw ComputationError("estimate_exponent: fewer than two nonzero norms");
    out.fit = fit_power_law(hs, positive);
    out.s_hat = out.fit.slope;
    return out;
}

}  // namespace kinreg
