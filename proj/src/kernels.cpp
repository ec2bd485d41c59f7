#include "mmdnet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mmdnet {

namespace {

void check_dims(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("kernel: dimension mismatch " +
                                    std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()));
    }
}

void check_spec(const KernelSpec& spec) {
    if (!(spec.bandwidth > 0.0)) {
        throw std::invalid_argument("kernel: bandwidth must be > 0");
    }
    if (spec.family == KernelFamily::RationalQuadratic && !(spec.rq_alpha > 0.0)) {
        throw std::invalid_argument("kernel: rq_alpha must be > 0");
    }
}

double sq_dist(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - y[d];
        s += diff * diff;
    }
    return s;
}

double l1_dist(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) s += std::abs(x[d] - y[d]);
    return s;
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
    check_dims(x, y);
    check_spec(spec);
    const double ell = spec.bandwidth;
    switch (spec.family) {
        case KernelFamily::Rbf:
            return std::exp(-sq_dist(x, y) / (2.0 * ell * ell));
        case KernelFamily::Laplacian:
            return std::exp(-l1_dist(x, y) / ell);
        case KernelFamily::RationalQuadratic: {
            const double a = spec.rq_alpha;
            return std::pow(1.0 + sq_dist(x, y) / (2.0 * a * ell * ell), -a);
        }
    }
    throw std::logic_error("kernel_eval: unknown family");
}

Matrix gram(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("gram: dimension mismatch " +
                                    std::to_string(a.cols()) + " vs " +
                                    std::to_string(b.cols()));
    }
    Matrix g(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto xi = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            g(i, j) = kernel_eval(spec, xi, b.row(j));
        }
    }
    return g;
}

std::vector<double> kernel_grad_first(const KernelSpec& spec,
                                      std::span<const double> x,
                                      std::span<const double> y) {
    check_dims(x, y);
    check_spec(spec);
    const double ell = spec.bandwidth;
    std::vector<double> grad(x.size());
    switch (spec.family) {
        case KernelFamily::Rbf: {
            const double k = kernel_eval(spec, x, y);
            for (std::size_t d = 0; d < x.size(); ++d) {
                grad[d] = -(x[d] - y[d]) / (ell * ell) * k;
            }
            return grad;
        }
        case KernelFamily::Laplacian: {
            const double k = kernel_eval(spec, x, y);
            for (std::size_t d = 0; d < x.size(); ++d) {
                const double diff = x[d] - y[d];
                const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
                grad[d] = -sign / ell * k;
            }
            return grad;
        }
        case KernelFamily::RationalQuadratic: {
            const double a = spec.rq_alpha;
            const double base = 1.0 + sq_dist(x, y) / (2.0 * a * ell * ell);
            const double factor = std::pow(base, -a - 1.0);
            for (std::size_t d = 0; d < x.size(); ++d) {
                grad[d] = -(x[d] - y[d]) / (ell * ell) * factor;
            }
            return grad;
        }
    }
    throw std::logic_error("kernel_grad_first: unknown family");
}

double median_heuristic(const Matrix& data, Rng& rng, std::size_t max_pairs) {
    const std::size_t n = data.rows();
    if (n < 2) {
        throw std::invalid_argument("median_heuristic: need at least 2 rows");
    }
    if (max_pairs < 1) {
        throw std::invalid_argument("median_heuristic: max_pairs must be >= 1");
    }
    const std::size_t all_pairs = n * (n - 1) / 2;
    std::vector<double> dists;
    if (all_pairs <= max_pairs) {
        dists.reserve(all_pairs);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                dists.push_back(std::sqrt(sq_dist(data.row(i), data.row(j))));
            }
        }
    } else {
        dists.reserve(max_pairs);
        while (dists.size() < max_pairs) {
            const std::size_t i = rng.next_below(n);
            const std::size_t j = rng.next_below(n);
            if (i == j) continue;
            dists.push_back(std::sqrt(sq_dist(data.row(i), data.row(j))));
        }
    }
    std::sort(dists.begin(), dists.end());
    const double med = dists[(dists.size() - 1) / 2];  // lower-middle for even counts
    if (med <= 0.0) {
        throw std::runtime_error(
            "median_heuristic: degenerate data, median pairwise distance is zero");
    }
    return med;
}

}  // namespace mmdnet
