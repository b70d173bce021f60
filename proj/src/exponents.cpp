#include "kinreg/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kinreg/errors.hpp"

namespace kinreg {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_profile(double alpha, double beta, double kappa, double tau) {
    require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
    require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
    require(alpha <= beta, "alpha must not exceed beta");
    require(kappa >= 0.0 && std::isfinite(kappa), "kappa must be finite and >= 0");
    require(tau >= 0.0 && std::isfinite(tau), "tau must be finite and >= 0");
}

/// Shared tail: eta, s_star and r from theta_a, E1, E2, r_a.
AveragingExponents combine(double theta_alpha, double theta_beta, double e1, double e2, double inv_r_alpha,
                           double inv_r_beta) {
    AveragingExponents out;
    out.theta_alpha = theta_alpha;
    out.theta_beta = theta_beta;
    out.e1 = e1;
    out.e2 = e2;
    out.eta = e2 == 0.0 ? 1.0 : e1 / (e1 + e2);
    out.s_star = (1.0 - out.eta) * theta_alpha + out.eta * theta_beta;
    out.r_alpha = 1.0 / inv_r_alpha;
    out.r_beta = 1.0 / inv_r_beta;
    out.r = 1.0 / ((1.0 - out.eta) * inv_r_alpha + out.eta * inv_r_beta);
    return out;
}

}  // namespace

double inverse_conjugate(double p) {
    if (std::isinf(p)) return 1.0;
    return 1.0 - 1.0 / p;
}

AveragingInputs AveragingInputs::make(double alpha, double beta, double kappa, double tau, double gamma,
                                      double sigma, double p, double q, double pbar) {
    check_profile(alpha, beta, kappa, tau);
    require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
    require(sigma >= 0.0 && sigma < 1.0, "sigma must lie in [0, 1)");
    require(p >= 1.0 && p <= 2.0 && q >= 1.0 && q <= 2.0, "p and q must lie in [1, 2]");
    require(p >= q, "p must be >= q");
    const double p_conj = 1.0 / inverse_conjugate(p);  // inf for p = 1
    require(pbar > 1.0 && pbar <= p_conj * (1.0 + 1e-15), "pbar must lie in (1, p']");
    return {alpha, beta, kappa, tau, gamma, sigma, p, q, pbar};
}

bool AveragingInputs::pbar_admissible() const {
    const double inv_pc = inverse_conjugate(p);
    if (inv_pc == 0.0) return true;  // p = 1: p' = inf and the lower bound is 1/sigma
    const double p_conj = 1.0 / inv_pc;
    return pbar >= p_conj / (1.0 + sigma * p_conj) && pbar <= p_conj;
}

AveragingExponents averaging_exponents(const AveragingInputs& in) {
    const double inv_pbar = 1.0 / in.pbar;
    const double inv_qc = inverse_conjugate(in.q);  // 0 for q = 1
    auto theta = [&](double a) { return (a * inv_pbar) / (a * (inv_pbar - inv_qc) + 2.0); };
    const double ta = theta(in.alpha), tb = theta(in.beta);
    const double e1 = std::min(in.kappa + in.gamma, 1.0 / in.alpha - (1.0 - in.gamma)) * ta;
    const double e2 = std::max({2.0 * in.tau / in.beta - in.kappa - in.gamma,
                                (in.tau - 1.0) / in.beta + 1.0 - in.gamma, 0.0}) *
                      tb;
    if (!(e1 > 0.0)) throw ComputationError("degenerate small-velocity gain: E1 <= 0");
    auto inv_r = [&](double t) { return (1.0 - t) / in.p + t / in.q; };
    return combine(ta, tb, e1, e2, inv_r(ta), inv_r(tb));
}

AveragingExponents scl_exponents(double alpha, double beta, double kappa, double tau) {
    check_profile(alpha, beta, kappa, tau);
    auto theta = [](double a) { return a / (a + 2.0); };
    const double ta = theta(alpha), tb = theta(beta);
    const double e1 = std::min(kappa + 1.0, 1.0 / alpha) * ta;
    const double e2 = std::max({2.0 * tau / beta - kappa - 1.0, (tau - 1.0) / beta, 0.0}) * tb;
    auto inv_r = [](double t) { return (1.0 + t) / 2.0; };
    return combine(ta, tb, e1, e2, inv_r(ta), inv_r(tb));
}

double model_flux_exponent(double ell) {
    require(ell >= 1.0 && std::isfinite(ell), "ell must be >= 1");
    return std::min(1.0 / 3.0, 1.0 / (ell + 1.0));
}

BaselineExponent lpt_baseline(double alpha, double p, double q) {
    require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
    require(p > 1.0 && (p <= 2.0 || std::isinf(p)), "p must lie in (1, 2] or be infinite");
    require(q >= 1.0 && q <= 2.0 && q <= p, "q must lie in [1, 2] with q <= p");
    const double inv_pc = inverse_conjugate(p), inv_qc = inverse_conjugate(q);
    BaselineExponent out;
    out.theta = (alpha * inv_pc) / (alpha * (inv_pc - inv_qc) + 2.0);
    const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    out.r = 1.0 / ((1.0 - out.theta) * inv_p + out.theta / q);
    return out;
}

double lpt_scl_exponent(double alpha) { return lpt_baseline(alpha, infinite_p, 1.0).theta; }

double tadmor_tao_baseline(double alpha, double mu, double p, double q) {
    require(mu >= 0.0 && mu <= 1.0, "mu must lie in [0, 1]");
    require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
    require(p > 1.0 && (p <= 2.0 || std::isinf(p)), "p must lie in (1, 2] or be infinite");
    require(q >= 1.0 && q <= 2.0 && q <= p, "q must lie in [1, 2] with q <= p");
    const double inv_pc = inverse_conjugate(p), inv_qc = inverse_conjugate(q);
    const double denom = alpha * (inv_pc - inv_qc) + 2.0 - mu;
    if (!(denom > 0.0)) throw ComputationError("tadmor_tao_baseline: nonpositive denominator");
    return (alpha * inv_pc) / denom;
}

}  // namespace kinreg
