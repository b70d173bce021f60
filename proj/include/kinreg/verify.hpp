/// @file verify.hpp
/// @brief End-to-end acceptance battery shared by `kinreg verify` and the
/// acceptance test binary.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kinreg/flux.hpp"
#include "kinreg/kinetic.hpp"
#include "kinreg/solver.hpp"

namespace kinreg {

enum class Tier { fast, full };

Tier parse_tier(const std::string& s);
std::string to_string(Tier tier);

/// One measured quantity of a criterion.
struct CheckRow {
    std::string quantity;
    double measured = 0.0;
    double expected = 0.0;
    std::string relation;  ///< e.g. "|d| <= 1e-12", ">= 0.8"
    bool pass = false;
};

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    std::vector<CheckRow> rows;
    std::string error;  ///< set when the check threw
};

struct VerifyReport {
    Tier tier = Tier::fast;
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;

    bool all_pass() const;
};

/// Identifiers in report order.
const std::vector<std::string>& criterion_ids();

/// Runs one criterion; exceptions are caught and reported as failures.
CriterionResult run_criterion(const std::string& id, Tier tier, std::uint64_t seed);

/// Runs the listed criteria (all when empty), in criterion_ids() order.
VerifyReport verify(Tier tier, std::uint64_t seed = 20240917, const std::vector<std::string>& only = {});

/// Fixed-width pass/fail table.
std::string format_report(const VerifyReport& report);

// Building blocks of the battery, reused by the unit tests.

/// A(v) = v^2/2.
Flux burgers_flux();

/// L1 distance at time t between the Godunov solution of a Riemann problem
/// (jump at x = 0, outflow box [x_lo, x_hi]) and the exact solution,
/// the latter averaged with `sub` midpoint samples per cell.
double riemann_l1_error(const Flux& flux, double u_left, double u_right, double x_lo, double x_hi, int n_cells,
                        double t_end, int sub = 16);

/// Defect of the Burgers shock uL = 1, uR = 0 on [-0.5, 1.5] up to T = 1,
/// with n_v velocity cells.
KineticDefect burgers_shock_defect(int n_cells, int n_v);

/// Random data/force pair for the contraction suite on a periodic grid.
struct ContractionCase {
    std::vector<double> u01, u02;
    SourceSpec s1 = SourceSpec::zero();
    SourceSpec s2 = SourceSpec::zero();
};
ContractionCase random_contraction_case(std::uint64_t seed, int n_cells, double t_end);
ContractionResult run_contraction_case(const Flux& flux, const ContractionCase& c, const GridSpec& grid);

}  // namespace kinreg
