#include "kinreg/source.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinreg {

namespace {

double horner(const std::vector<double>& c, double v) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * v + *it;
    return acc;
}

struct TermEvaluator {
    double t;
    double x;
    double operator()(const PolynomialTerm& p) const { return p.scale * horner(p.x_coeffs, x) * horner(p.t_coeffs, t); }
    double operator()(const TrigTerm& s) const {
        const double arg = s.kx * x + s.kt * t + s.phase;
        return s.amplitude * (s.cosine ? std::cos(arg) : std::sin(arg));
    }
    double operator()(const BoxTerm& b) const {
        return (x >= b.x_lo && x < b.x_hi && t >= b.t_lo && t < b.t_hi) ? b.value : 0.0;
    }
};

}  // namespace

double Expression::operator()(double t, double x) const {
    double acc = 0.0;
    for (const auto& term : terms) acc += std::visit(TermEvaluator{t, x}, term);
    return acc;
}

SourceSpec SourceSpec::constant(double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("constant source must be finite");
    SourceSpec s(Kind::constant);
    s.constant_ = c;
    return s;
}

SourceSpec SourceSpec::table(std::vector<double> times, std::vector<std::vector<double>> values) {
    if (times.empty() || times.size() != values.size()) {
        throw std::invalid_argument("source table needs one row per time breakpoint");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw std::invalid_argument("source table times must increase");
    }
    for (const auto& row : values) {
        if (row.size() != values.front().size()) throw std::invalid_argument("source table rows differ in length");
        for (double v : row) {
            if (!std::isfinite(v)) throw std::invalid_argument("source table values must be finite");
        }
    }
    SourceSpec s(Kind::table);
    s.times_ = std::move(times);
    s.values_ = std::move(values);
    return s;
}

SourceSpec SourceSpec::expression(Expression e) {
    SourceSpec s(Kind::expression);
    s.expression_ = std::move(e);
    return s;
}

double SourceSpec::value(double t, std::size_t cell, double x) const {
    switch (kind_) {
        case Kind::zero: return 0.0;
        case Kind::constant: return constant_;
        case Kind::table: {
            auto it = std::upper_bound(times_.begin(), times_.end(), t);
            if (it == times_.begin()) return 0.0;  // before the first breakpoint
            return values_[static_cast<std::size_t>(it - times_.begin()) - 1][cell];
        }
        case Kind::expression: return expression_(t, x);
    }
    return 0.0;
}

double SourceSpec::sup_abs(double t, const std::vector<double>& centres) const {
    double m = 0.0;
    for (std::size_t i = 0; i < centres.size(); ++i) m = std::max(m, std::abs(value(t, i, centres[i])));
    return m;
}

void SourceSpec::check_cells(std::size_t n_cells) const {
    if (kind_ == Kind::table && values_.front().size() != n_cells) {
        throw std::invalid_argument("source table has " + std::to_string(values_.front().size()) +
                                    " cells, grid has " + std::to_string(n_cells));
    }
}

}  // namespace kinreg
