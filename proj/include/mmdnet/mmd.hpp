#pragma once

#include "mmdnet/kernels.hpp"
#include "mmdnet/matrix.hpp"

namespace mmdnet {

/// Result of the unbiased squared-MMD estimator. The value may be
/// negative; it is never clamped.
struct MmdEstimate {
    double value = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;
    KernelSpec kernel;
};

/// Unbiased estimator
///   1/(N(N-1)) sum_{n != n'} k(x_n, x_n')
/// + 1/(M(M-1)) sum_{m != m'} k(y_m, y_m')
/// - 2/(MN)     sum_{m, n}    k(x_n, y_m),
/// with diagonal terms excluded from the within-sample sums.
MmdEstimate mmd_u_squared(const KernelSpec& spec, const Matrix& x, const Matrix& y);

/// Closed-form population MMD^2 between two isotropic Gaussians
/// N(mean1, var1 I_D) and N(mean2, var2 I_D) under the RBF kernel.
/// Serves as an analytic oracle for the unbiased estimator.
double population_mmd_gaussian(const KernelSpec& spec, double mean1, double var1,
                               double mean2, double var2, std::size_t dim);

/// Training cost: the generated-sample-dependent part of the unbiased
/// estimator,
///   1/(M(M-1)) sum_{m != m'} k(y_m, y_m') - 2/(MN) sum_{m,n} k(y_m, x_n).
double mmd_cost(const KernelSpec& spec, const Matrix& y, const Matrix& x);

/// Gradient of mmd_cost with respect to each generated point; row m is
///   2/(M(M-1)) sum_{m' != m} dk(y_m, y_m')/dy_m - 2/(MN) sum_n dk(y_m, x_n)/dy_m.
Matrix mmd_cost_grad(const KernelSpec& spec, const Matrix& y, const Matrix& x);

}  // namespace mmdnet
