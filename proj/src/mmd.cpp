#include "mmdnet/mmd.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmdnet {

namespace {

void check_shapes(const Matrix& x, const Matrix& y, std::size_t min_x_rows,
                  std::size_t min_y_rows, const char* what) {
    if (x.cols() != y.cols()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch " +
                                    std::to_string(x.cols()) + " vs " +
                                    std::to_string(y.cols()));
    }
    if (x.rows() < min_x_rows || y.rows() < min_y_rows) {
        throw std::invalid_argument(std::string(what) +
                                    ": too few rows (denominators vanish)");
    }
}

// Off-diagonal Gram sum over one sample set, fixed row-major order.
double within_sum(const KernelSpec& spec, const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto ri = a.row(i);
        for (std::size_t j = 0; j < a.rows(); ++j) {
            if (i == j) continue;
            s += kernel_eval(spec, ri, a.row(j));
        }
    }
    return s;
}

double cross_sum(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto ri = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            s += kernel_eval(spec, ri, b.row(j));
        }
    }
    return s;
}

// Accumulates the cross sum in an order that does not depend on which
// argument came first, so mmd_u_squared(X, Y) == mmd_u_squared(Y, X)
// exactly.
double cross_sum_symmetric(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
    const bool a_first =
        a.rows() != b.rows() ? a.rows() < b.rows()
        : a.cols() != b.cols()
            ? a.cols() < b.cols()
            : !std::lexicographical_compare(b.data().begin(), b.data().end(),
                                            a.data().begin(), a.data().end());
    return a_first ? cross_sum(spec, a, b) : cross_sum(spec, b, a);
}

// E[exp(-||Z||^2 / (2 ell^2))] for Z with independent coordinates
// N(delta, s2): product over D of (ell/sqrt(ell^2+s2)) exp(-delta^2/(2(ell^2+s2))).
double gaussian_rbf_expectation(double ell, double delta, double s2, std::size_t dim) {
    const double denom = ell * ell + s2;
    const double per_coord =
        ell / std::sqrt(denom) * std::exp(-delta * delta / (2.0 * denom));
    return std::pow(per_coord, static_cast<double>(dim));
}

}  // namespace

MmdEstimate mmd_u_squared(const KernelSpec& spec, const Matrix& x, const Matrix& y) {
    check_shapes(x, y, 2, 2, "mmd_u_squared");
    const auto n = static_cast<double>(x.rows());
    const auto m = static_cast<double>(y.rows());
    const double xx = within_sum(spec, x) / (n * (n - 1.0));
    const double yy = within_sum(spec, y) / (m * (m - 1.0));
    const double xy = cross_sum_symmetric(spec, x, y) * 2.0 / (m * n);
    return MmdEstimate{xx + yy - xy, x.rows(), y.rows(), spec};
}

double population_mmd_gaussian(const KernelSpec& spec, double mean1, double var1,
                               double mean2, double var2, std::size_t dim) {
    if (spec.family != KernelFamily::Rbf) {
        throw std::invalid_argument(
            "population_mmd_gaussian: only the RBF kernel is supported");
    }
    if (var1 <= 0.0 || var2 <= 0.0) {
        throw std::invalid_argument("population_mmd_gaussian: variances must be > 0");
    }
    const double ell = spec.bandwidth;
    const double e_xx = gaussian_rbf_expectation(ell, 0.0, 2.0 * var1, dim);
    const double e_yy = gaussian_rbf_expectation(ell, 0.0, 2.0 * var2, dim);
    const double e_xy =
        gaussian_rbf_expectation(ell, mean1 - mean2, var1 + var2, dim);
    return e_xx + e_yy - 2.0 * e_xy;
}

double mmd_cost(const KernelSpec& spec, const Matrix& y, const Matrix& x) {
    check_shapes(x, y, 1, 2, "mmd_cost");
    const auto n = static_cast<double>(x.rows());
    const auto m = static_cast<double>(y.rows());
    const double yy = within_sum(spec, y) / (m * (m - 1.0));
    const double yx = cross_sum(spec, y, x) * 2.0 / (m * n);
    return yy - yx;
}

Matrix mmd_cost_grad(const KernelSpec& spec, const Matrix& y, const Matrix& x) {
    check_shapes(x, y, 1, 2, "mmd_cost_grad");
    const auto n = static_cast<double>(x.rows());
    const auto m = static_cast<double>(y.rows());
    const double within_coef = 2.0 / (m * (m - 1.0));  // y_m sits in both kernel slots
    const double cross_coef = 2.0 / (m * n);
    Matrix grad(y.rows(), y.cols());
    for (std::size_t i = 0; i < y.rows(); ++i) {
        const auto yi = y.row(i);
        auto gi = grad.row(i);
        for (std::size_t j = 0; j < y.rows(); ++j) {
            if (i == j) continue;
            const auto g = kernel_grad_first(spec, yi, y.row(j));
            for (std::size_t d = 0; d < g.size(); ++d) gi[d] += within_coef * g[d];
        }
        for (std::size_t j = 0; j < x.rows(); ++j) {
            const auto g = kernel_grad_first(spec, yi, x.row(j));
            for (std::size_t d = 0; d < g.size(); ++d) gi[d] -= cross_coef * g[d];
        }
    }
    return grad;
}

}  // namespace mmdnet
