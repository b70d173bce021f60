/// @file nondeg.hpp
/// @brief Brute-force measurement of the nondegeneracy exponents of a flux:
/// alpha (sublevel sets of |tau + a(v) xi|), kappa (vanishing of a' near Z),
/// and beta/tau (sublevel sets restricted away from Z).
#pragma once

#include <string>
#include <vector>

#include "kinreg/fit.hpp"
#include "kinreg/flux.hpp"

namespace kinreg {

/// How the sup over unit directions (tau, xi) is taken.
enum class DirectionSearch {
    /// Exact sup over the whole half-circle, by sliding a window over the
    /// sorted velocity samples.
    exact,
    /// Uniform angles pi*j/sphere_points, j = 0..sphere_points-1.
    grid,
};

struct NondegOptions {
    std::vector<double> delta_grid = dyadic_grid(4, 27);
    std::vector<double> lambda_grid = dyadic_grid(2, 8);
    int sphere_points = 720;
    int v_points = 1'000'000;
    int scan_points = 4096;
    DirectionSearch search = DirectionSearch::exact;
    /// Measures below this many v-cells are treated as resolution-limited.
    int floor_cells = 32;
    /// Number of smallest resolved delta values entering each fit.
    int fit_points = 4;
    /// Fits with r^2 below this flag the profile as low confidence.
    double min_r_squared = 0.9;
};

/// Measure of {v in I : dist(v,Z) >= lambda, |tau_dir + a(v) xi_dir| <= delta}
/// by the midpoint rule on v_points cells. Throws std::invalid_argument if the
/// direction is not a unit vector (to 1e-12) or the parameters are out of range.
double sublevel_measure(const Flux& flux, Interval interval, double tau_dir, double xi_dir,
                        double delta, double lambda, const DegeneracySet& zeros, int v_points);

/// Velocity samples at the midpoints of a uniform partition of I, with
/// their distance to Z. Reused across all (delta, lambda, direction) queries.
class VelocitySamples {
public:
    VelocitySamples(const Flux& flux, Interval interval, const DegeneracySet& zeros, int v_points);

    double cell_width() const { return width_; }
    std::size_t size() const { return velocity_.size(); }

    /// Sorted a-values of the samples with dist(v, Z) >= lambda.
    std::vector<double> restricted_sorted(double lambda) const;

private:
    double width_;
    std::vector<double> velocity_;
    std::vector<double> distance_;
};

/// sup over directions of the restricted sublevel measure, for every delta
/// in the grid, given the sorted a-values of the restricted set.
std::vector<double> sup_sublevel_measures(const std::vector<double>& sorted_velocity,
                                          double cell_width, const std::vector<double>& delta_grid,
                                          DirectionSearch search, int sphere_points);

struct ExponentEstimate {
    double value = 0.0;
    FitDiagnostics fit;
};

struct BetaTauEstimate {
    double beta = 0.0;
    double tau = 0.0;
    FitDiagnostics beta_fit;  ///< fit at the lambda giving the median beta
    FitDiagnostics tau_fit;   ///< intercepts against log2(lambda)
    std::vector<double> beta_per_lambda;
    std::vector<double> lambdas_used;
};

/// One row of the raw (delta, lambda, measure) table; lambda = 0 is the
/// unrestricted measure used for alpha.
struct MeasureSample {
    double delta;
    double lambda;
    double measure;
};

ExponentEstimate estimate_alpha(const Flux& flux, Interval interval, const NondegOptions& options,
                                std::vector<MeasureSample>* table = nullptr);

/// Slope of sup_{dist(v,Z) <= lambda} |a'(v)| against lambda; kappa = 0 when
/// Z is empty.
ExponentEstimate estimate_kappa(const Flux& flux, Interval interval, const DegeneracySet& zeros,
                                const std::vector<double>& lambda_grid);

BetaTauEstimate estimate_beta_tau(const Flux& flux, Interval interval, const DegeneracySet& zeros,
                                  const NondegOptions& options,
                                  std::vector<MeasureSample>* table = nullptr);

struct DegeneracyProfile {
    double alpha = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
    Interval interval;
    DegeneracySet zeros;
    FitDiagnostics alpha_fit;
    FitDiagnostics beta_fit;
    FitDiagnostics kappa_fit;
    FitDiagnostics tau_fit;
    bool low_confidence = false;
    std::vector<std::string> warnings;
    std::vector<MeasureSample> table;
};

/// Runs all estimators and enforces the profile invariants
/// (alpha <= beta, alpha and beta clipped into (0, 1]) with warnings.
DegeneracyProfile analyze_flux(const Flux& flux, Interval interval, const NondegOptions& options = {});

}  // namespace kinreg
