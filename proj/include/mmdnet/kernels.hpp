#pragma once

#include <span>
#include <vector>

#include "mmdnet/matrix.hpp"
#include "mmdnet/rng.hpp"

namespace mmdnet {

enum class KernelFamily { Rbf, Laplacian, RationalQuadratic };

/// Positive-definite kernel on R^D with k(x,x) = 1 and 0 < k <= 1 for all
/// three families, so the kernel bound K of the concentration results is 1.
struct KernelSpec {
    KernelFamily family = KernelFamily::Rbf;
    double bandwidth = 1.0;  // length-scale, > 0
    double rq_alpha = 1.0;   // rational-quadratic shape, > 0
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

/// G[i][j] = k(A.row(i), B.row(j)).
Matrix gram(const KernelSpec& spec, const Matrix& a, const Matrix& b);

/// d k(x, y) / d x. For the Laplacian kernel, sign(0) is taken as 0
/// (subgradient at ties).
std::vector<double> kernel_grad_first(const KernelSpec& spec,
                                      std::span<const double> x,
                                      std::span<const double> y);

/// Median of pairwise Euclidean distances, used directly as the
/// length-scale. All N(N-1)/2 pairs when that count fits in max_pairs,
/// otherwise max_pairs uniformly sampled unordered pairs. Even counts take
/// the lower-middle element. Throws if every sampled distance is zero.
double median_heuristic(const Matrix& data, Rng& rng,
                        std::size_t max_pairs = 100000);

}  // namespace mmdnet
