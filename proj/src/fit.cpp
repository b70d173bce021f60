#include "kinreg/fit.hpp"

#include <cmath>
#include <stdexcept>

#include "kinreg/errors.hpp"

namespace kinreg {

FitDiagnostics fit_line(std::vector<std::pair<double, double>> samples) {
    const auto n = static_cast<double>(samples.size());
    if (samples.size() < 2) throw ComputationError("fit needs at least two samples");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : samples) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : samples) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0.0) throw ComputationError("fit needs two distinct abscissae");
    FitDiagnostics fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    // A perfectly flat response is fitted exactly.
    fit.r_squared = syy > 0.0 ? std::min(1.0, (sxy * sxy) / (sxx * syy)) : 1.0;
    fit.samples = std::move(samples);
    return fit;
}

FitDiagnostics fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    std::vector<std::pair<double, double>> samples;
    samples.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw ComputationError("fit_power_law: non-positive sample");
        }
        samples.emplace_back(std::log2(x[i]), std::log2(y[i]));
    }
    return fit_line(std::move(samples));
}

std::vector<double> dyadic_grid(int k_first, int k_last) {
    std::vector<double> grid;
    for (int k = k_first; k <= k_last; ++k) grid.push_back(std::ldexp(1.0, -k));
    return grid;
}

}  // namespace kinreg
