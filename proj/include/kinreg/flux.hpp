/// @file flux.hpp
/// @brief One-dimensional flux functions A with exact derivatives a = A',
/// a' = A'', and the degeneracy set Z = {a' = 0}.
#pragma once

#include <string>
#include <vector>

namespace kinreg {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

/// One polynomial piece A(v) = sum_k coefficients[k] * v^k, in global v.
struct PolynomialPiece {
    std::vector<double> coefficients;
};

class Flux {
public:
    enum class Kind { power_abs, power_signed, sine, cosine, piecewise_polynomial };

    /// A(v) = |v|^(ell+1), ell >= 1.
    static Flux power_abs(double ell);
    /// A(v) = sgn(v) |v|^(ell+1), ell >= 1.
    static Flux power_signed(double ell);
    static Flux sine();
    static Flux cosine();
    /// Pieces on (-inf, b_0], [b_0, b_1], ..., [b_{k-1}, inf); breakpoints
    /// strictly increasing, pieces.size() == breakpoints.size() + 1. Throws
    /// std::invalid_argument unless A, A', A'' match at every breakpoint.
    static Flux piecewise_polynomial(std::vector<double> breakpoints,
                                     std::vector<PolynomialPiece> pieces);
    /// Single global polynomial, e.g. {0, 0, 0.5} for Burgers' A = v^2/2.
    static Flux polynomial(std::vector<double> coefficients);

    Kind kind() const { return kind_; }
    double ell() const { return ell_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<PolynomialPiece>& pieces() const { return pieces_; }
    std::string name() const;

    double value(double v) const;                ///< A(v)
    double velocity(double v) const;             ///< a(v) = A'(v)
    double velocity_derivative(double v) const;  ///< a'(v) = A''(v)

    /// Points in [lo, hi] where a changes sign or vanishes, sorted. These
    /// are the interior extremum candidates of A on the interval.
    std::vector<double> critical_points(double lo, double hi) const;

    /// min and max of A over [lo, hi] (endpoints and critical points).
    double min_on(double lo, double hi) const;
    double max_on(double lo, double hi) const;

    /// sup |a| over [lo, hi].
    double max_abs_velocity(double lo, double hi) const;

private:
    Flux(Kind kind, double ell) : kind_(kind), ell_(ell) {}
    std::size_t piece_index(double v) const;

    Kind kind_;
    double ell_ = 0.0;
    std::vector<double> breakpoints_;
    std::vector<PolynomialPiece> pieces_;
};

double eval_flux(const Flux& flux, double v);
double eval_velocity(const Flux& flux, double v);
double eval_velocity_derivative(const Flux& flux, double v);

/// Zeros of a' located in an interval.
struct DegeneracySet {
    Interval interval;
    std::vector<double> zeros;

    bool empty() const { return zeros.empty(); }
    /// Distance from v to the nearest zero; +inf when the set is empty.
    double distance(double v) const;
};

struct DegeneracyOptions {
    double root_tol = 1e-12;
    int max_bisection = 200;
    std::size_t max_zeros = 64;
};

/// All zeros of a' in the interval: sign changes on a uniform scan refined
/// by bisection, plus tangential zeros found as local minima of |a'|
/// refined by ternary search. Throws ComputationError if more than
/// max_zeros are found.
DegeneracySet degeneracy_set(const Flux& flux, Interval interval, int scan_points,
                             const DegeneracyOptions& options = {});

}  // namespace kinreg
