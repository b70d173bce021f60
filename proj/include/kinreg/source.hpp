/// @file source.hpp
/// @brief Space-time expressions and forcing terms S(t, x).
#pragma once

#include <variant>
#include <vector>

namespace kinreg {

/// c * (sum_k x_coeffs[k] x^k) * (sum_k t_coeffs[k] t^k)
struct PolynomialTerm {
    double scale = 1.0;
    std::vector<double> x_coeffs{1.0};
    std::vector<double> t_coeffs{1.0};
};

/// amplitude * sin(kx x + kt t + phase), or cos when cosine is set.
struct TrigTerm {
    double amplitude = 1.0;
    double kx = 0.0;
    double kt = 0.0;
    double phase = 0.0;
    bool cosine = false;
};

/// value on [x_lo, x_hi) x [t_lo, t_hi), zero elsewhere.
struct BoxTerm {
    double value = 1.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double t_lo = 0.0;
    double t_hi = 1e300;
};

using ExpressionTerm = std::variant<PolynomialTerm, TrigTerm, BoxTerm>;

/// Sum of closed-form terms evaluated at (t, x).
struct Expression {
    std::vector<ExpressionTerm> terms;

    double operator()(double t, double x) const;
};

/// Forcing term. Tables hold one row of cell values per time breakpoint and
/// are piecewise constant in time: row k applies on [times[k], times[k+1]).
class SourceSpec {
public:
    enum class Kind { zero, constant, table, expression };

    static SourceSpec zero() { return SourceSpec(Kind::zero); }
    static SourceSpec constant(double c);
    static SourceSpec table(std::vector<double> times, std::vector<std::vector<double>> values);
    static SourceSpec expression(Expression e);

    Kind kind() const { return kind_; }
    double constant_value() const { return constant_; }
    const std::vector<double>& table_times() const { return times_; }
    const std::vector<std::vector<double>>& table_values() const { return values_; }
    const Expression& expr() const { return expression_; }

    /// S at time t in cell `cell` whose centre is x.
    double value(double t, std::size_t cell, double x) const;

    /// sup_x |S(t, .)| over the cell centres, used to bound the reachable range.
    double sup_abs(double t, const std::vector<double>& centres) const;

    /// Throws std::invalid_argument if a table does not match n_cells.
    void check_cells(std::size_t n_cells) const;

private:
    explicit SourceSpec(Kind k) : kind_(k) {}

    Kind kind_;
    double constant_ = 0.0;
    std::vector<double> times_;
    std::vector<std::vector<double>> values_;
    Expression expression_;
};

}  // namespace kinreg
