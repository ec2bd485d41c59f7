#include "mmdnet/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "mmdnet/mmd.hpp"
#include "mmdnet/rng.hpp"

namespace mmdnet {

double rate(int p, double gamma, std::size_t m, double c_p) {
    if (p < 1) throw std::invalid_argument("rate: p must be a positive integer");
    if (gamma < 1.0) throw std::invalid_argument("rate: gamma must be >= 1");
    if (m < 2) throw std::invalid_argument("rate: M must be >= 2");
    const auto md = static_cast<double>(m);
    double factor;
    if (p < 2) {
        factor = 1.0 / std::sqrt(md);
    } else if (p == 2) {
        factor = std::pow(std::log(md), 1.5) / std::sqrt(md);
    } else {
        factor = std::pow(md, -1.0 / static_cast<double>(p));
    }
    return c_p * std::sqrt(gamma) * factor;
}

double epsilon_bound(const BoundInputs& in) {
    if (in.delta <= 0.0 || in.delta >= 1.0) {
        throw std::invalid_argument("epsilon_bound: delta must be in (0,1)");
    }
    if (in.m < 3) {
        throw std::invalid_argument("epsilon_bound: M must be >= 3 (rate uses M-1)");
    }
    const auto md = static_cast<double>(in.m);
    return rate(in.p1, in.gamma1, in.m, in.c_p1) +
           rate(in.p2, in.gamma2, in.m - 1, in.c_p2) +
           12.0 / std::sqrt(md) * std::sqrt(std::log(2.0 / in.delta));
}

double theorem3_tail(double eps, std::size_t m, double kernel_bound) {
    if (eps <= 0.0) throw std::invalid_argument("theorem3_tail: eps must be > 0");
    if (m < 2) throw std::invalid_argument("theorem3_tail: M must be >= 2");
    if (kernel_bound <= 0.0) {
        throw std::invalid_argument("theorem3_tail: kernel bound must be > 0");
    }
    const double value = 2.0 * std::exp(-eps * eps * static_cast<double>(m) /
                                        (16.0 * kernel_bound * kernel_bound));
    return std::min(1.0, value);
}

double finite_theta_failure_prob(std::size_t t, double eps, std::size_t m,
                                 double kernel_bound) {
    if (t < 1) throw std::invalid_argument("finite_theta_failure_prob: T must be >= 1");
    return std::min(1.0, static_cast<double>(t + 1) *
                             theorem3_tail(eps, m, kernel_bound));
}

double finite_theta_epsilon(std::size_t t, double delta, std::size_t m,
                            double kernel_bound) {
    if (t < 1) throw std::invalid_argument("finite_theta_epsilon: T must be >= 1");
    if (delta <= 0.0 || delta >= 1.0) {
        throw std::invalid_argument("finite_theta_epsilon: delta must be in (0,1)");
    }
    return 8.0 * kernel_bound *
           std::sqrt(std::log(2.0 * static_cast<double>(t + 1) / delta) /
                     static_cast<double>(m));
}

ConcentrationCheck validate_theorem3(const GaussianPair& pair, const KernelSpec& kspec,
                                     std::size_t m, double eps, std::size_t trials,
                                     std::uint64_t seed) {
    if (kspec.family != KernelFamily::Rbf) {
        throw std::invalid_argument("validate_theorem3: RBF kernel required");
    }
    if (trials < 100) {
        throw std::invalid_argument("validate_theorem3: need at least 100 trials");
    }
    const double population = population_mmd_gaussian(kspec, pair.mean1, pair.var1,
                                                      pair.mean2, pair.var2, pair.dim);
    const double sd1 = std::sqrt(pair.var1);
    const double sd2 = std::sqrt(pair.var2);
    Rng root(seed);
    std::size_t exceedances = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng(root.derive_seed());  // independent stream per trial
        Matrix x(m, pair.dim);
        Matrix y(m, pair.dim);
        for (double& v : x.data()) v = pair.mean1 + sd1 * rng.normal();
        for (double& v : y.data()) v = pair.mean2 + sd2 * rng.normal();
        const double est = mmd_u_squared(kspec, x, y).value;
        if (std::abs(est - population) > eps) ++exceedances;
    }
    return ConcentrationCheck{
        static_cast<double>(exceedances) / static_cast<double>(trials),
        theorem3_tail(eps, m, 1.0), trials};
}

}  // namespace mmdnet
