/// @file kinetic.hpp
/// @brief Kinetic formulation diagnostics: chi, velocity averages, the
/// entropy dissipation measure reconstructed from a numerical solution,
/// its singular moments, and the L1 contraction check.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "kinreg/flux.hpp"
#include "kinreg/solver.hpp"
#include "kinreg/source.hpp"

namespace kinreg {

/// chi(v, u) = 1 on 0 < v < u, -1 on u < v < 0, 0 otherwise.
constexpr double chi(double v, double u) noexcept {
    if (0.0 < v && v < u) return 1.0;
    if (u < v && v < 0.0) return -1.0;
    return 0.0;
}

/// Exact average of chi(., u) over the velocity cell [lo, hi].
double chi_cell_average(double lo, double hi, double u) noexcept;

struct VelocityGrid {
    double v_lo = -1.0;
    double v_hi = 1.0;
    int n_v = 64;

    double dv() const { return (v_hi - v_lo) / n_v; }
    double mid(int j) const { return v_lo + (j + 0.5) * dv(); }
    double edge(int j) const { return v_lo + j * dv(); }

    /// Grid bracketing the hull of {0, u_min, u_max} with the given
    /// relative margin on each side. Throws std::invalid_argument if
    /// n_v < 32 or margin < 0.1.
    static VelocityGrid bracketing(double u_min, double u_max, int n_v, double margin = 0.1);
    static VelocityGrid bracketing(const SpaceTimeField& field, int n_v, double margin = 0.1);

    void validate() const;
};

/// bar f[slice][cell] = sum_j chi(v_j, u) phi(v_j) dv over velocity midpoints.
std::vector<std::vector<double>> velocity_average(const SpaceTimeField& field, const VelocityGrid& vgrid,
                                                  const std::function<double(double)>& phi);

/// velocity_average with phi = 1.
std::vector<std::vector<double>> velocity_average(const SpaceTimeField& field, const VelocityGrid& vgrid);

struct DefectOptions {
    double time_trim = 0.05;   ///< fraction of slices dropped at each end
    double space_trim = 0.05;  ///< fraction of cells dropped at each end
    bool keep_density = false;
};

struct KineticDefect {
    GridSpec grid;
    VelocityGrid vgrid;
    std::size_t slice_begin = 0, slice_end = 0;  ///< time steps [begin, end)
    std::size_t cell_begin = 0, cell_end = 0;    ///< cells [begin, end)
    double duration = 0.0;                       ///< t[slice_end] - t[slice_begin]

    std::vector<double> column_mass;      ///< sum of m dt dx per velocity cell
    std::vector<double> column_positive;  ///< same, positive part of m
    std::vector<double> column_negative;  ///< same, negative part (<= 0)
    double total_mass = 0.0;              ///< sum of m dt dx dv
    double positive_mass = 0.0;
    double negative_mass = 0.0;
    double negativity_floor = 0.0;  ///< most negative cell value of m
    double bottom_residual = 0.0;   ///< max |m| in the lowest velocity cell

    /// m[slice - slice_begin][cell - cell_begin][v], filled on request.
    std::vector<std::vector<std::vector<double>>> density;

    double mass_rate() const { return duration > 0.0 ? total_mass / duration : 0.0; }

    /// max over columns of negative/positive mass, ignoring columns whose
    /// positive mass is below `relative_cutoff` of the largest one.
    double negativity_ratio(double relative_cutoff = 1e-3) const;
};

/// Solves the kinetic equation for m on the measurement window by a
/// downward cumulative sum in v of the discrete residual of f.
/// Requires every time step stored (cadence 1). Throws std::invalid_argument
/// on bad inputs and ComputationError if an outflow run has waves at the
/// boundary during the window.
KineticDefect reconstruct_defect(const SpaceTimeField& field, const Flux& flux, const SourceSpec& source,
                                 const VelocityGrid& vgrid, const DefectOptions& options = {});

/// sum of |v - v0|^(alpha-1) m dt dx dv; the cell containing v0 uses the
/// cell average of the kernel.
double singular_moment(const KineticDefect& defect, double v0, double alpha);

struct ContractionResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double deficit = 0.0;
    bool pass = false;
};

/// sup_t ||(u1 - u2)_+||_1 against ||(u01 - u02)_+||_1 + ||S1 - S2||_{L1(0,T;L1)}.
/// Both runs must share the grid and time levels.
ContractionResult contraction_check(const SpaceTimeField& run1, const SpaceTimeField& run2,
                                    const std::vector<double>& u01, const std::vector<double>& u02,
                                    const SourceSpec& s1, const SourceSpec& s2, double tolerance = 1e-10);

}  // namespace kinreg
