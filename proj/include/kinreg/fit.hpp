/// @file fit.hpp
/// @brief Least-squares power-law fits in log-log coordinates.
#pragma once

#include <span>
#include <utility>
#include <vector>

namespace kinreg {

struct FitDiagnostics {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    /// (log2 x, log2 y) pairs the line was fitted to.
    std::vector<std::pair<double, double>> samples;
};

/// Ordinary least squares y = intercept + slope * x over the given pairs.
/// Requires at least two distinct x values.
FitDiagnostics fit_line(std::vector<std::pair<double, double>> samples);

/// Fits log2(y) against log2(x). Pairs with y <= 0 are rejected by the caller.
FitDiagnostics fit_power_law(std::span<const double> x, std::span<const double> y);

/// Dyadic grid {2^-k : k = k_first..k_last}, descending values.
std::vector<double> dyadic_grid(int k_first, int k_last);

}  // namespace kinreg
