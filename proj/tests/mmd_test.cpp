#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mmdnet/mmd.hpp"
#include "mmdnet/rng.hpp"
#include "test_util.hpp"

using mmdnet::gram;
using mmdnet::kernel_eval;
using mmdnet::KernelFamily;
using mmdnet::KernelSpec;
using mmdnet::Matrix;
using mmdnet::mmd_cost;
using mmdnet::mmd_cost_grad;
using mmdnet::mmd_u_squared;
using mmdnet::population_mmd_gaussian;
using mmdnet::Rng;

namespace {

KernelSpec rbf(double bw = 1.0) {
    KernelSpec s;
    s.family = KernelFamily::Rbf;
    s.bandwidth = bw;
    return s;
}

Matrix permuted_rows(const Matrix& m, Rng& rng) {
    std::vector<std::size_t> idx(m.rows());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    return m.take_rows(idx);
}

}  // namespace

TEST_CASE("estimator at hand-checked points") {
    auto x = Matrix::from_rows({{0.0}, {1.0}});
    auto y = Matrix::from_rows({{0.0}, {1.0}});
    auto est = mmd_u_squared(rbf(), x, y);
    // identical two-point samples: e^-1/2 - 1, strictly negative
    CHECK(est.value == doctest::Approx(std::exp(-0.5) - 1.0).epsilon(1e-15));
    CHECK(est.value < 0.0);
    CHECK(est.n == 2);
    CHECK(est.m == 2);

    auto far = Matrix::from_rows({{5.0}, {5.0}});
    auto x0 = Matrix::from_rows({{0.0}, {0.0}});
    auto est2 = mmd_u_squared(rbf(), x0, far);
    CHECK(est2.value ==
          doctest::Approx(2.0 - 2.0 * std::exp(-12.5)).epsilon(1e-15));
}

TEST_CASE("estimator shape and size errors") {
    auto x = Matrix::from_rows({{0.0}, {1.0}});
    CHECK_THROWS(mmd_u_squared(rbf(), x, Matrix::from_rows({{0.0, 1.0}, {1.0, 2.0}})));
    CHECK_THROWS(mmd_u_squared(rbf(), x, Matrix::from_rows({{0.0}})));
    CHECK_THROWS(mmd_u_squared(rbf(), Matrix::from_rows({{0.0}}), x));
}

TEST_CASE("estimator is exactly symmetric in its arguments") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix x = rng.standard_normal(5 + trial % 3, 2);
        Matrix y = rng.standard_normal(4, 2);
        CHECK(mmd_u_squared(rbf(0.9), x, y).value ==
              mmd_u_squared(rbf(0.9), y, x).value);
    }
}

TEST_CASE("estimator is invariant to row permutation") {
    Rng rng(23);
    Matrix x = rng.standard_normal(8, 3);
    Matrix y = rng.standard_normal(6, 3);
    const double base = mmd_u_squared(rbf(), x, y).value;
    for (int trial = 0; trial < 10; ++trial) {
        Matrix xp = permuted_rows(x, rng);
        Matrix yp = permuted_rows(y, rng);
        CHECK(mmd_u_squared(rbf(), xp, yp).value ==
              doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("estimator mean over resamples is near zero for equal distributions") {
    Rng rng(101);
    const int resamples = 500;
    std::vector<double> values(resamples);
    bool any_negative = false;
    for (auto& v : values) {
        Matrix x = rng.standard_normal(30, 1);
        Matrix y = rng.standard_normal(30, 1);
        v = mmd_u_squared(rbf(), x, y).value;
        if (v < 0.0) any_negative = true;
    }
    const double m = testutil::mean(values);
    const double se = std::sqrt(testutil::sample_variance(values) / resamples);
    CHECK(std::abs(m) < 4.0 * se);
    // the unbiased estimator must be allowed to go negative
    CHECK(any_negative);
}

TEST_CASE("gaussian population oracle basic identities") {
    auto spec = rbf(1.3);
    CHECK(population_mmd_gaussian(spec, 0.7, 1.2, 0.7, 1.2, 3) == 0.0);
    CHECK(population_mmd_gaussian(spec, 0.0, 1.0, 2.0, 1.0, 1) ==
          doctest::Approx(population_mmd_gaussian(spec, 2.0, 1.0, 0.0, 1.0, 1))
              .epsilon(1e-15));
    CHECK(population_mmd_gaussian(spec, 0.0, 1.0, 2.0, 1.0, 2) > 0.0);
    CHECK_THROWS(population_mmd_gaussian(spec, 0.0, 0.0, 1.0, 1.0, 1));
    KernelSpec lap;
    lap.family = KernelFamily::Laplacian;
    CHECK_THROWS(population_mmd_gaussian(lap, 0.0, 1.0, 1.0, 1.0, 1));
}

TEST_CASE("gaussian population oracle against direct Monte Carlo") {
    auto spec = rbf(1.0);
    const double mean2 = 1.5, var2 = 2.0;
    const std::size_t dim = 2;
    const double oracle = population_mmd_gaussian(spec, 0.0, 1.0, mean2, var2, dim);

    Rng rng(314);
    const int pairs = 200000;
    std::vector<double> terms(pairs);
    const double sd2 = std::sqrt(var2);
    for (auto& t : terms) {
        std::vector<double> x1(dim), x2(dim), y1(dim), y2(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            x1[d] = rng.normal();
            x2[d] = rng.normal();
            y1[d] = mean2 + sd2 * rng.normal();
            y2[d] = mean2 + sd2 * rng.normal();
        }
        t = kernel_eval(spec, x1, x2) + kernel_eval(spec, y1, y2) -
            2.0 * kernel_eval(spec, x1, y1);
    }
    const double mc = testutil::mean(terms);
    const double se = std::sqrt(testutil::sample_variance(terms) / pairs);
    CHECK(std::abs(mc - oracle) < 4.0 * se);
}

TEST_CASE("cost at hand-checked points") {
    auto x = Matrix::from_rows({{0.0}, {1.0}});
    auto y = Matrix::from_rows({{0.0}, {1.0}});
    CHECK(mmd_cost(rbf(), y, x) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("cost differs from the estimator by a Y-independent constant") {
    Rng rng(5);
    Matrix x = rng.standard_normal(7, 2);
    Matrix y1 = rng.standard_normal(5, 2);
    Matrix y2 = rng.standard_normal(5, 2);
    auto spec = rbf(0.8);
    const double diff1 = mmd_u_squared(spec, x, y1).value - mmd_cost(spec, y1, x);
    const double diff2 = mmd_u_squared(spec, x, y2).value - mmd_cost(spec, y2, x);
    CHECK(diff1 == doctest::Approx(diff2).epsilon(1e-14));

    // the constant is the within-X term
    Matrix g = gram(spec, x, x);
    double xx = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
            if (i != j) xx += g(i, j);
        }
    }
    xx /= 7.0 * 6.0;
    CHECK(diff1 == doctest::Approx(xx).epsilon(1e-13));
}

TEST_CASE("cost is invariant to joint translation") {
    Rng rng(6);
    Matrix x = rng.standard_normal(6, 2);
    Matrix y = rng.standard_normal(4, 2);
    auto spec = rbf(1.1);
    const double base = mmd_cost(spec, y, x);
    Matrix xs = x, ys = y;
    for (double& v : xs.data()) v += 3.25;
    for (double& v : ys.data()) v += 3.25;
    CHECK(mmd_cost(spec, ys, xs) == doctest::Approx(base).epsilon(1e-13));
}

TEST_CASE("cost gradient matches central finite differences") {
    Rng rng(8);
    const std::vector<KernelFamily> fams{KernelFamily::Rbf, KernelFamily::Laplacian,
                                         KernelFamily::RationalQuadratic};
    for (auto fam : fams) {
        KernelSpec spec;
        spec.family = fam;
        spec.bandwidth = 0.9;
        spec.rq_alpha = 1.6;
        Matrix x = rng.standard_normal(6, 2);
        Matrix y = rng.standard_normal(5, 2);
        Matrix grad = mmd_cost_grad(spec, y, x);
        for (std::size_t i = 0; i < y.rows(); ++i) {
            for (std::size_t d = 0; d < y.cols(); ++d) {
                auto f = [&](double v) {
                    Matrix yp = y;
                    yp(i, d) = v;
                    return mmd_cost(spec, yp, x);
                };
                const double fd = testutil::central_diff(f, y(i, d));
                CHECK(testutil::rel_err(grad(i, d), fd) < 1e-5);
            }
        }
    }
}

TEST_CASE("cost gradient decomposes over data points") {
    // averaging the per-data-point gradients reproduces the full gradient
    Rng rng(9);
    auto spec = rbf(1.0);
    Matrix x = rng.standard_normal(6, 2);
    Matrix y = rng.standard_normal(4, 2);
    Matrix full = mmd_cost_grad(spec, y, x);
    Matrix avg(y.rows(), y.cols());
    double avg_cost = 0.0;
    for (std::size_t n = 0; n < x.rows(); ++n) {
        Matrix xn(1, x.cols());
        std::copy(x.row(n).begin(), x.row(n).end(), xn.row(0).begin());
        Matrix g = mmd_cost_grad(spec, y, xn);
        for (std::size_t i = 0; i < g.size(); ++i) avg.data()[i] += g.data()[i];
        avg_cost += mmd_cost(spec, y, xn);
    }
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    for (std::size_t i = 0; i < avg.size(); ++i) {
        CHECK(avg.data()[i] * inv_n == doctest::Approx(full.data()[i]).epsilon(1e-12));
    }
    CHECK(avg_cost * inv_n == doctest::Approx(mmd_cost(spec, y, x)).epsilon(1e-12));
}

TEST_CASE("cost gradient in a symmetric configuration sums to zero") {
    // generated points placed symmetrically around symmetric data
    auto x = Matrix::from_rows({{-1.0}, {1.0}});
    auto y = Matrix::from_rows({{-0.5}, {0.5}});
    Matrix grad = mmd_cost_grad(rbf(), y, x);
    CHECK(grad(0, 0) == doctest::Approx(-grad(1, 0)).epsilon(1e-14));
}

TEST_CASE("far-separated samples leave only the within-Y gradient term") {
    Rng rng(10);
    auto spec = rbf(1.0);
    Matrix y = rng.standard_normal(4, 2);
    Matrix x = rng.standard_normal(5, 2);
    for (double& v : x.data()) v += 1e4;
    Matrix grad = mmd_cost_grad(spec, y, x);

    // compare against the within term computed with an empty-ish cross part:
    // use data so remote the cross kernels vanish
    Matrix within_only(y.rows(), y.cols());
    const double coef = 2.0 / (4.0 * 3.0);
    for (std::size_t i = 0; i < y.rows(); ++i) {
        for (std::size_t j = 0; j < y.rows(); ++j) {
            if (i == j) continue;
            auto g = mmdnet::kernel_grad_first(spec, y.row(i), y.row(j));
            for (std::size_t d = 0; d < 2; ++d) within_only(i, d) += coef * g[d];
        }
    }
    for (std::size_t i = 0; i < grad.size(); ++i) {
        CHECK(grad.data()[i] == doctest::Approx(within_only.data()[i]).epsilon(1e-12));
    }
}
