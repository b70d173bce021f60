/// @file exponents.hpp
/// @brief Closed-form regularity exponents for velocity averages and for
/// entropy solutions of scalar conservation laws, plus the classical
/// Lions-Perthame-Tadmor and Tadmor-Tao baselines.
#pragma once

#include <limits>

namespace kinreg {

/// Inputs of the general averaging exponent. Construct through make(),
/// which checks every range constraint.
struct AveragingInputs {
    double alpha = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;
    double p = 2.0;
    double q = 2.0;
    double pbar = 2.0;

    /// Throws std::invalid_argument unless alpha <= beta in (0,1],
    /// kappa, tau >= 0, gamma in [0,1], sigma in [0,1), 1 <= q <= p <= 2,
    /// and 1 < pbar <= p'.
    static AveragingInputs make(double alpha, double beta, double kappa, double tau, double gamma,
                                double sigma, double p, double q, double pbar);

    /// Whether pbar also meets the lower bound p'/(1 + sigma p') tied to the
    /// v-regularity sigma. The formulas are evaluated either way.
    bool pbar_admissible() const;
};

struct AveragingExponents {
    double theta_alpha = 0.0;
    double theta_beta = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double eta = 0.0;
    double s_star = 0.0;  ///< supremum of admissible orders, never attained
    double r = 0.0;
    double r_alpha = 0.0;
    double r_beta = 0.0;
};

/// Conjugate exponent 1/p' = 1 - 1/p (p = 1 gives 0, p = inf gives 1).
double inverse_conjugate(double p);

/// General averaging exponents. Throws ComputationError if E1 <= 0.
AveragingExponents averaging_exponents(const AveragingInputs& in);

/// Specialisation to entropy solutions: theta_a = a/(a+2),
/// 1/r_a = (1+theta_a)/2. Throws std::invalid_argument on out-of-range input.
AveragingExponents scl_exponents(double alpha, double beta, double kappa, double tau);

/// min(1/3, 1/(ell+1)) for the model fluxes |v|^(ell+1), sgn(v)|v|^(ell+1).
double model_flux_exponent(double ell);

struct BaselineExponent {
    double theta = 0.0;
    double r = 0.0;
};

constexpr double infinite_p = std::numeric_limits<double>::infinity();

/// theta = (alpha/p') / (alpha(1/p' - 1/q') + 2), 1/r = (1-theta)/p + theta/q.
/// Accepts p in (1, inf] and q in [1, 2] with q <= p; (p, q) = (inf, 1)
/// is the endpoint used for entropy solutions, where theta = alpha/(alpha+2).
BaselineExponent lpt_baseline(double alpha, double p, double q);

/// Order of differentiability the baseline gives for entropy solutions.
double lpt_scl_exponent(double alpha);

/// theta' = (alpha/p') / (alpha(1/p' - 1/q') + 2 - mu). Throws
/// ComputationError when the denominator is not positive.
double tadmor_tao_baseline(double alpha, double mu, double p, double q);

}  // namespace kinreg
