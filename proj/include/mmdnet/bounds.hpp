#pragma once

#include <cstdint>

#include "mmdnet/kernels.hpp"

namespace mmdnet {

/// Inputs to the estimation-error bound. p and gamma describe the
/// fat-shattering growth of the two induced function classes; they are
/// user-supplied, never estimated. The absolute constants c_p1/c_p2
/// default to 1, so the calculators expose scaling, not certified values.
struct BoundInputs {
    int p1 = 1;
    int p2 = 1;
    double gamma1 = 2.0;
    double gamma2 = 2.0;
    double delta = 0.05;
    std::size_t m = 2;
    double kernel_bound = 1.0;
    double c_p1 = 1.0;
    double c_p2 = 1.0;
};

/// Rate r(p, gamma, M) = C_p sqrt(gamma) * { M^-1/2 if p < 2;
/// M^-1/2 log^{3/2} M if p = 2; M^-1/p if p > 2 }.
double rate(int p, double gamma, std::size_t m, double c_p = 1.0);

/// epsilon = r(p1, gamma1, M) + r(p2, gamma2, M-1) + 12 M^-1/2 sqrt(log(2/delta)).
double epsilon_bound(const BoundInputs& in);

/// Tail probability delta_eps = min(1, 2 exp(-eps^2 M / (16 K^2))).
double theorem3_tail(double eps, std::size_t m, double kernel_bound = 1.0);

/// Failure probability min(1, (T+1) * delta_eps) for a finite parameter
/// set of size T.
double finite_theta_failure_prob(std::size_t t, double eps, std::size_t m,
                                 double kernel_bound = 1.0);

/// Inverse of the above at confidence 1-delta:
/// eps_delta = 8 K sqrt((1/M) log(2(T+1)/delta)).
double finite_theta_epsilon(std::size_t t, double delta, std::size_t m,
                            double kernel_bound = 1.0);

struct GaussianPair {
    double mean1 = 0.0;
    double var1 = 1.0;
    double mean2 = 0.0;
    double var2 = 1.0;
    std::size_t dim = 1;
};

struct ConcentrationCheck {
    double empirical_frequency = 0.0;
    double analytic_bound = 0.0;  // theorem3_tail at this (eps, M)
    std::size_t trials = 0;
};

/// Monte Carlo check of the concentration bound: frequency over trials of
/// |MMD_u^2 - population MMD^2| > eps, with M = N samples per side. RBF
/// kernel and Gaussian pair only (the population value comes from the
/// closed-form oracle).
ConcentrationCheck validate_theorem3(const GaussianPair& pair, const KernelSpec& kspec,
                                     std::size_t m, double eps, std::size_t trials,
                                     std::uint64_t seed);

}  // namespace mmdnet
