#include "kinreg/flux.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kinreg/errors.hpp"

namespace kinreg {

namespace {

constexpr double pi = std::numbers::pi;

double sgn(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

double horner(const std::vector<double>& c, double v) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * v + *it;
    return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    return d;
}

bool close(double x, double y) {
    return std::abs(x - y) <= 1e-9 * (1.0 + std::max(std::abs(x), std::abs(y)));
}

/// Sign changes and exact zeros of f on a uniform scan of [lo, hi],
/// refined by bisection. Used for the critical points of polynomial pieces.
template <class F>
std::vector<double> sign_change_roots(F&& f, double lo, double hi, int n) {
    std::vector<double> roots;
    if (!(hi > lo)) {
        if (f(lo) == 0.0) roots.push_back(lo);
        return roots;
    }
    double prev_v = lo;
    double prev = f(lo);
    if (prev == 0.0) roots.push_back(lo);
    for (int i = 1; i <= n; ++i) {
        const double v = (i == n) ? hi : lo + (hi - lo) * i / n;
        const double cur = f(v);
        if (cur == 0.0) {
            roots.push_back(v);
        } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
            double a = prev_v, b = v, fa = prev;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const double fm = f(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_v = v;
        prev = cur;
    }
    return roots;
}

/// Points v0 + k*period inside [lo, hi].
std::vector<double> lattice_points(double v0, double period, double lo, double hi) {
    std::vector<double> pts;
    const double k0 = std::ceil((lo - v0) / period);
    for (double k = k0;; k += 1.0) {
        const double v = v0 + k * period;
        if (v > hi) break;
        if (v >= lo) pts.push_back(v);
    }
    return pts;
}

}  // namespace

Flux Flux::power_abs(double ell) {
    if (!(ell >= 1.0) || !std::isfinite(ell)) throw std::invalid_argument("power_abs: ell must be >= 1");
    return Flux(Kind::power_abs, ell);
}

Flux Flux::power_signed(double ell) {
    if (!(ell >= 1.0) || !std::isfinite(ell)) throw std::invalid_argument("power_signed: ell must be >= 1");
    return Flux(Kind::power_signed, ell);
}

Flux Flux::sine() { return Flux(Kind::sine, 0.0); }
Flux Flux::cosine() { return Flux(Kind::cosine, 0.0); }

Flux Flux::piecewise_polynomial(std::vector<double> breakpoints, std::vector<PolynomialPiece> pieces) {
    if (pieces.size() != breakpoints.size() + 1) {
        throw std::invalid_argument("piecewise_polynomial: need exactly one more piece than breakpoints");
    }
    for (const auto& p : pieces) {
        if (p.coefficients.empty()) throw std::invalid_argument("piecewise_polynomial: empty piece");
        for (double c : p.coefficients) {
            if (!std::isfinite(c)) throw std::invalid_argument("piecewise_polynomial: non-finite coefficient");
        }
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!std::isfinite(breakpoints[i]) || (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))) {
            throw std::invalid_argument("piecewise_polynomial: breakpoints must be finite and strictly increasing");
        }
        const double b = breakpoints[i];
        auto left = pieces[i].coefficients;
        auto right = pieces[i + 1].coefficients;
        for (int order = 0; order <= 2; ++order) {
            if (!close(horner(left, b), horner(right, b))) {
                throw std::invalid_argument("piecewise_polynomial: flux is not C^2 at breakpoint " +
                                            std::to_string(b) + " (derivative order " +
                                            std::to_string(order) + ")");
            }
            left = derivative(left);
            right = derivative(right);
        }
    }
    Flux f(Kind::piecewise_polynomial, 0.0);
    f.breakpoints_ = std::move(breakpoints);
    f.pieces_ = std::move(pieces);
    return f;
}

Flux Flux::polynomial(std::vector<double> coefficients) {
    return piecewise_polynomial({}, {PolynomialPiece{std::move(coefficients)}});
}

namespace {

std::string format_ell(double ell) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", ell);
    return buf;
}

}  // namespace

std::string Flux::name() const {
    switch (kind_) {
        case Kind::power_abs: return "power_abs(" + format_ell(ell_) + ")";
        case Kind::power_signed: return "power_signed(" + format_ell(ell_) + ")";
        case Kind::sine: return "sine";
        case Kind::cosine: return "cosine";
        case Kind::piecewise_polynomial: return pieces_.size() == 1 ? "polynomial" : "piecewise_polynomial";
    }
    return "unknown";
}

std::size_t Flux::piece_index(double v) const {
    return static_cast<std::size_t>(std::lower_bound(breakpoints_.begin(), breakpoints_.end(), v) -
                                    breakpoints_.begin());
}

double Flux::value(double v) const {
    switch (kind_) {
        case Kind::power_abs: return std::pow(std::abs(v), ell_ + 1.0);
        case Kind::power_signed: return sgn(v) * std::pow(std::abs(v), ell_ + 1.0);
        case Kind::sine: return std::sin(v);
        case Kind::cosine: return std::cos(v);
        case Kind::piecewise_polynomial: return horner(pieces_[piece_index(v)].coefficients, v);
    }
    return 0.0;
}

double Flux::velocity(double v) const {
    switch (kind_) {
        case Kind::power_abs: return (ell_ + 1.0) * sgn(v) * std::pow(std::abs(v), ell_);
        case Kind::power_signed: return (ell_ + 1.0) * std::pow(std::abs(v), ell_);
        case Kind::sine: return std::cos(v);
        case Kind::cosine: return -std::sin(v);
        case Kind::piecewise_polynomial: return horner(derivative(pieces_[piece_index(v)].coefficients), v);
    }
    return 0.0;
}

double Flux::velocity_derivative(double v) const {
    switch (kind_) {
        case Kind::power_abs:
            return (ell_ + 1.0) * ell_ * (ell_ == 1.0 ? 1.0 : std::pow(std::abs(v), ell_ - 1.0));
        case Kind::power_signed:
            // ell = 1 gives A = v|v|, which is only C^{1,1}; a' takes its
            // one-sided value at 0 and never vanishes.
            if (ell_ == 1.0) return v >= 0.0 ? 2.0 : -2.0;
            return (ell_ + 1.0) * ell_ * sgn(v) * std::pow(std::abs(v), ell_ - 1.0);
        case Kind::sine: return -std::sin(v);
        case Kind::cosine: return -std::cos(v);
        case Kind::piecewise_polynomial:
            return horner(derivative(derivative(pieces_[piece_index(v)].coefficients)), v);
    }
    return 0.0;
}

std::vector<double> Flux::critical_points(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    std::vector<double> pts;
    switch (kind_) {
        case Kind::power_abs:
        case Kind::power_signed:
            if (lo <= 0.0 && hi >= 0.0) pts.push_back(0.0);
            break;
        case Kind::sine: pts = lattice_points(0.5 * pi, pi, lo, hi); break;
        case Kind::cosine: pts = lattice_points(0.0, pi, lo, hi); break;
        case Kind::piecewise_polynomial: {
            // Each piece is scanned on its own sub-interval.
            double seg_lo = lo;
            for (std::size_t i = 0; i <= breakpoints_.size(); ++i) {
                const double seg_hi = i < breakpoints_.size() ? std::min(hi, breakpoints_[i]) : hi;
                if (seg_hi >= seg_lo) {
                    const auto d = derivative(pieces_[i].coefficients);
                    auto r = sign_change_roots([&](double v) { return horner(d, v); }, seg_lo, seg_hi, 256);
                    pts.insert(pts.end(), r.begin(), r.end());
                }
                if (i < breakpoints_.size()) seg_lo = std::max(lo, breakpoints_[i]);
                if (seg_lo > hi) break;
            }
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            break;
        }
    }
    return pts;
}

double Flux::min_on(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    double m = std::min(value(lo), value(hi));
    for (double c : critical_points(lo, hi)) m = std::min(m, value(c));
    return m;
}

double Flux::max_on(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    double m = std::max(value(lo), value(hi));
    for (double c : critical_points(lo, hi)) m = std::max(m, value(c));
    return m;
}

double Flux::max_abs_velocity(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    double m = std::max(std::abs(velocity(lo)), std::abs(velocity(hi)));
    switch (kind_) {
        case Kind::power_abs:
        case Kind::power_signed: break;  // |a| is monotone in |v|
        case Kind::sine:
            if (!lattice_points(0.0, pi, lo, hi).empty()) m = 1.0;
            break;
        case Kind::cosine:
            if (!lattice_points(0.5 * pi, pi, lo, hi).empty()) m = 1.0;
            break;
        case Kind::piecewise_polynomial:
            for (double b : breakpoints_) {
                if (b > lo && b < hi) m = std::max(m, std::abs(velocity(b)));
            }
            for (std::size_t i = 0; i < pieces_.size(); ++i) {
                const auto d2 = derivative(derivative(pieces_[i].coefficients));
                auto r = sign_change_roots([&](double v) { return horner(d2, v); }, lo, hi, 256);
                for (double v : r) {
                    if (piece_index(v) == i) m = std::max(m, std::abs(velocity(v)));
                }
            }
            break;
    }
    return m;
}

double eval_flux(const Flux& flux, double v) { return flux.value(v); }
double eval_velocity(const Flux& flux, double v) { return flux.velocity(v); }
double eval_velocity_derivative(const Flux& flux, double v) { return flux.velocity_derivative(v); }

double DegeneracySet::distance(double v) const {
    if (zeros.empty()) return std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(zeros.begin(), zeros.end(), v);
    double d = std::numeric_limits<double>::infinity();
    if (it != zeros.end()) d = *it - v;
    if (it != zeros.begin()) d = std::min(d, v - *std::prev(it));
    return d;
}

DegeneracySet degeneracy_set(const Flux& flux, Interval interval, int scan_points,
                             const DegeneracyOptions& options) {
    if (scan_points < 2) throw std::invalid_argument("degeneracy_set: scan_points must be >= 2");
    if (!(interval.hi > interval.lo)) throw std::invalid_argument("degeneracy_set: empty interval");

    const auto ap = [&](double v) { return flux.velocity_derivative(v); };
    const int n = scan_points;
    const double h = interval.length() / (n - 1);
    std::vector<double> v(n), g(n);
    for (int i = 0; i < n; ++i) {
        v[i] = (i == n - 1) ? interval.hi : interval.lo + h * i;
        g[i] = ap(v[i]);
    }

    std::vector<double> candidates;
    for (int i = 0; i < n; ++i) {
        if (g[i] == 0.0) candidates.push_back(v[i]);
    }
    // Sign changes, refined by bisection.
    for (int i = 0; i + 1 < n; ++i) {
        if (g[i] == 0.0 || g[i + 1] == 0.0 || (g[i] < 0.0) == (g[i + 1] < 0.0)) continue;
        double a = v[i], b = v[i + 1], fa = g[i];
        for (int it = 0; it < options.max_bisection; ++it) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            const double fm = ap(m);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if ((fm < 0.0) == (fa < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        const double m = 0.5 * (a + b);
        double best = m;
        for (double c : {a, b}) {
            if (std::abs(ap(c)) < std::abs(ap(best))) best = c;
        }
        // A jump through zero (a' discontinuous) is not a zero.
        if (std::abs(ap(best)) <= options.root_tol) candidates.push_back(best);
    }
    // Tangential zeros: local minima of |a'| without a sign change.
    for (int i = 1; i + 1 < n; ++i) {
        const double l = std::abs(g[i - 1]), c = std::abs(g[i]), r = std::abs(g[i + 1]);
        if (g[i] == 0.0 || !(c < l) || !(c <= r)) continue;
        if ((g[i - 1] < 0.0) != (g[i] < 0.0) || (g[i + 1] < 0.0) != (g[i] < 0.0)) continue;
        double a = v[i - 1], b = v[i + 1];
        for (int it = 0; it < options.max_bisection; ++it) {
            const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (!(m1 > a) || !(m2 < b)) break;
            if (std::abs(ap(m1)) <= std::abs(ap(m2))) {
                b = m2;
            } else {
                a = m1;
            }
        }
        const double z = 0.5 * (a + b);
        if (std::abs(ap(z)) <= options.root_tol) candidates.push_back(z);
    }

    std::sort(candidates.begin(), candidates.end());
    DegeneracySet set{interval, {}};
    for (double z : candidates) {
        if (!set.zeros.empty() && z - set.zeros.back() < 0.5 * h) {
            if (std::abs(ap(z)) < std::abs(ap(set.zeros.back()))) set.zeros.back() = z;
            continue;
        }
        set.zeros.push_back(z);
        if (set.zeros.size() > options.max_zeros) {
            throw ComputationError("degeneracy_set: more than " + std::to_string(options.max_zeros) +
                                   " zeros of a' found; Z is not locally finite at this resolution");
        }
    }
    return set;
}

}  // namespace kinreg
