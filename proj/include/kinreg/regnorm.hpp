/// @file regnorm.hpp
/// @brief Finite-difference L^p norms of a space-time field and log-log
/// fits of their decay in the shift h.
#pragma once

#include <cstddef>
#include <vector>

#include "kinreg/fit.hpp"
#include "kinreg/solver.hpp"

namespace kinreg {

enum class Direction { space, time };

struct RegularityWindow {
    std::size_t slice_begin = 0, slice_end = 0;  ///< rows [begin, end)
    std::size_t cell_begin = 0, cell_end = 0;    ///< cells [begin, end)
    std::vector<int> h_cells;                    ///< shifts used in the fit
    std::vector<double> h;                       ///< same, in physical units
    std::vector<double> norms;
};

struct RegularityFit {
    double p = 1.0;
    Direction direction = Direction::space;
    /// Least-squares slope; +infinity when the field is constant on the window.
    double s_hat = 0.0;
    FitDiagnostics fit;
    RegularityWindow window;
    bool constant_field = false;
};

/// Single-slice field holding a sampled profile on [x_lo, x_hi].
SpaceTimeField profile_field(double x_lo, double x_hi, std::vector<double> values);

/// Interior window: 5% of the cells (and of the rows, when there is more
/// than one) dropped at each end.
RegularityWindow regularity_window(const SpaceTimeField& field, double trim = 0.05);

/// (sum over the window of |u(shifted) - u|^p * cell size)^(1/p), with the
/// shift of h_cells grid steps kept inside the window. The cell size is
/// dx times the mean row spacing, or dx alone for a single row.
/// Throws std::invalid_argument if the shift does not fit in the window.
double difference_norm(const SpaceTimeField& field, int h_cells, double p, Direction direction);

/// Shift length in physical units (h_cells*dx, or h_cells times the mean
/// row spacing in time).
double shift_length(const SpaceTimeField& field, int h_cells, Direction direction);

/// Fits log2 difference_norm against log2 h. With no h list, uses the
/// dyadic shifts 4, 8, ... up to a window/8. Needs at least 4 shifts.
RegularityFit estimate_exponent(const SpaceTimeField& field, double p, Direction direction,
                                std::vector<int> h_cells = {});

}  // namespace kinreg
