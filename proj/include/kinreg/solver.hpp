/// @file solver.hpp
/// @brief First-order Godunov finite-volume solver for
/// u_t + A(u)_x = S in one space dimension, and exact Riemann solutions
/// built from convex/concave envelopes of A.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kinreg/flux.hpp"
#include "kinreg/source.hpp"

namespace kinreg {

enum class Boundary { periodic, outflow };

struct GridSpec {
    double x_lo = 0.0;
    double x_hi = 1.0;
    int n_cells = 100;
    double t_end = 1.0;
    double cfl = 0.5;
    Boundary boundary = Boundary::periodic;
    /// Store every k-th step; 0 picks k automatically so that at most
    /// max_slices slices are kept.
    int store_every = 0;
    int max_slices = 4096;
    /// Fixed time step; 0 means dt = cfl*dx/max|a(u)| recomputed each step.
    double fixed_dt = 0.0;

    double dx() const { return (x_hi - x_lo) / n_cells; }
    double centre(int i) const { return x_lo + (i + 0.5) * dx(); }
    std::vector<double> centres() const;
    /// Throws std::invalid_argument on an inconsistent specification.
    void validate() const;
};

struct SpaceTimeField {
    GridSpec grid;
    std::vector<double> times;                     ///< stored slice times, times[0] = 0
    std::vector<std::vector<double>> values;       ///< u[slice][cell]
    std::vector<std::vector<double>> source_trace; ///< S[slice][cell]
    std::vector<double> step_times;                ///< every time level of the run
    int cadence = 1;                               ///< steps between stored slices
    std::size_t steps = 0;

    double dx() const { return grid.dx(); }
    double mass(std::size_t slice) const;
    double min_value() const;
    double max_value() const;
};

/// Godunov flux: min of A on [uL, uR] if uL <= uR, else max of A on [uR, uL].
double godunov_flux(const Flux& flux, double u_left, double u_right);

/// Bound on |u| reachable from u0 under the forcing: [min u0 - I, max u0 + I]
/// with I = int_0^T sup_x |S| dt.
Interval reachable_range(const std::vector<double>& u0, const SourceSpec& source, const GridSpec& grid);

/// cfl*dx / max|a| over the reachable range of every listed run.
double stable_fixed_dt(const Flux& flux, const GridSpec& grid,
                       const std::vector<std::pair<const std::vector<double>*, const SourceSpec*>>& runs);

/// Forward-Euler Godunov update with first-order splitting of the source.
/// Throws ComputationError on non-finite states (with the step index).
SpaceTimeField solve(const Flux& flux, const std::vector<double>& u0, const SourceSpec& source,
                     const GridSpec& grid);

/// Exact cell averages of Riemann data with a jump at x0.
std::vector<double> riemann_data(const GridSpec& grid, double u_left, double u_right, double x0);

/// Cell averages of an expression at t = 0 (4-point Gauss-Legendre per cell).
std::vector<double> cell_averages(const GridSpec& grid, const Expression& e);

/// Entropy solution of a Riemann problem as a function of xi = x/t. The
/// envelope of A on [min(uL,uR), max(uL,uR)] is built once from `samples`
/// points; affine stretches are shocks, stretches where it follows A are
/// rarefactions.
class RiemannSolution {
public:
    RiemannSolution(const Flux& flux, double u_left, double u_right, int samples = 10'000);

    double operator()(double xi) const;

    /// Number of shocks (chords of the envelope) in the wave fan.
    std::size_t shock_count() const;

private:
    struct Vertex {
        double v;
        std::size_t index;
    };

    double lower_value(double xi) const;

    Flux flux_;
    double u_left_;
    double u_right_;
    bool reflected_ = false;  ///< uL > uR handled through B(w) = -A(-w)
    std::vector<Vertex> hull_;
    std::vector<double> slopes_;
};

double riemann_exact(const Flux& flux, double u_left, double u_right, double xi);

}  // namespace kinreg
