#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmdnet/bounds.hpp"
#include "test_util.hpp"

using mmdnet::BoundInputs;
using mmdnet::ConcentrationCheck;
using mmdnet::epsilon_bound;
using mmdnet::finite_theta_epsilon;
using mmdnet::finite_theta_failure_prob;
using mmdnet::GaussianPair;
using mmdnet::KernelSpec;
using mmdnet::rate;
using mmdnet::theorem3_tail;
using mmdnet::validate_theorem3;

TEST_CASE("rate hand-checked values per branch") {
    CHECK(rate(1, 1.0, 100) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rate(4, 4.0, 16) == doctest::Approx(1.0).epsilon(1e-12));
    const double p2_expected = std::pow(std::log(8.0), 1.5) / std::sqrt(8.0);
    CHECK(rate(2, 1.0, 8) == doctest::Approx(p2_expected).epsilon(1e-12));

    // each branch against an independent exp/log evaluation
    auto indep = [](double base, double expo) { return std::exp(expo * std::log(base)); };
    CHECK(rate(1, 3.0, 50) ==
          doctest::Approx(std::sqrt(3.0) * indep(50.0, -0.5)).epsilon(1e-12));
    CHECK(rate(2, 2.0, 50) ==
          doctest::Approx(std::sqrt(2.0) * indep(std::log(50.0), 1.5) *
                          indep(50.0, -0.5))
              .epsilon(1e-12));
    CHECK(rate(5, 2.0, 50) ==
          doctest::Approx(std::sqrt(2.0) * indep(50.0, -0.2)).epsilon(1e-12));

    // the user-supplied constant scales linearly
    CHECK(rate(3, 2.0, 30, 2.5) == doctest::Approx(2.5 * rate(3, 2.0, 30)).epsilon(1e-14));
}

TEST_CASE("rate input validation") {
    CHECK_THROWS(rate(0, 2.0, 10));
    CHECK_THROWS(rate(1, 0.5, 10));
    CHECK_THROWS(rate(2, 2.0, 1));
}

TEST_CASE("epsilon bound hand-checked value") {
    // delta = 2/e makes sqrt(log(2/delta)) = 1
    BoundInputs in;
    in.p1 = 1;
    in.p2 = 1;
    in.gamma1 = 1.0;
    in.gamma2 = 1.0;
    in.delta = 2.0 * std::exp(-1.0);
    in.m = 100;
    const double expected = 0.1 + 1.0 / std::sqrt(99.0) + 1.2;
    CHECK(epsilon_bound(in) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.4005037815259212).epsilon(1e-12));
}

TEST_CASE("epsilon bound monotonicity") {
    BoundInputs in;
    in.p1 = 2;
    in.p2 = 3;
    in.gamma1 = 2.0;
    in.gamma2 = 4.0;
    in.delta = 0.05;

    // strictly decreasing while M doubles
    double prev = 1e300;
    for (std::size_t m = 16; m <= 65536; m *= 2) {
        in.m = m;
        const double eps = epsilon_bound(in);
        CHECK(eps < prev);
        prev = eps;
    }

    // strictly increasing as delta shrinks, over a 20-point grid
    in.m = 200;
    double prev_eps = 0.0;
    double delta = 0.5;
    for (int i = 0; i < 20; ++i) {
        in.delta = delta;
        const double eps = epsilon_bound(in);
        CHECK(eps > prev_eps);
        prev_eps = eps;
        delta /= 2.0;
    }

    // increasing in both gammas
    in.delta = 0.05;
    in.gamma1 = 3.0;
    const double bumped1 = epsilon_bound(in);
    in.gamma1 = 2.0;
    const double base = epsilon_bound(in);
    in.gamma2 = 5.0;
    const double bumped2 = epsilon_bound(in);
    CHECK(bumped1 > base);
    CHECK(bumped2 > base);
}

TEST_CASE("epsilon bound input validation") {
    BoundInputs in;
    in.delta = 0.0;
    CHECK_THROWS(epsilon_bound(in));
    in.delta = 0.05;
    in.m = 2;
    CHECK_THROWS(epsilon_bound(in));
}

TEST_CASE("concentration tail hand-checked values") {
    CHECK(theorem3_tail(4.0, 16) == doctest::Approx(2.0 * std::exp(-16.0)).epsilon(1e-12));
    CHECK(theorem3_tail(1.0, 16) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
    // tiny eps: the raw formula exceeds 1 and must be capped
    CHECK(theorem3_tail(1e-6, 16) == 1.0);
    // kernel bound rescales eps
    CHECK(theorem3_tail(2.0, 16, 2.0) == doctest::Approx(theorem3_tail(1.0, 16, 1.0)));
    CHECK_THROWS(theorem3_tail(0.0, 16));
    CHECK_THROWS(theorem3_tail(1.0, 1));
    CHECK_THROWS(theorem3_tail(1.0, 16, 0.0));
}

TEST_CASE("finite parameter set bound") {
    // T = 1 doubles the single-estimate tail, capped at 1
    CHECK(finite_theta_failure_prob(1, 4.0, 16) ==
          doctest::Approx(2.0 * theorem3_tail(4.0, 16)).epsilon(1e-14));
    CHECK(finite_theta_failure_prob(1, 0.1, 16) == 1.0);
    CHECK_THROWS(finite_theta_failure_prob(0, 1.0, 16));
    CHECK_THROWS(finite_theta_epsilon(1, 1.5, 16));
}

TEST_CASE("finite parameter set inverse round-trips through the forward bound") {
    // eps_delta is a total-error radius: the per-estimate deviation fed to
    // the forward tail is half of it, and the round-trip then returns delta
    const std::size_t t = 25, m = 400;
    const double delta = 0.05;
    const double eps_delta = finite_theta_epsilon(t, delta, m);
    CHECK(finite_theta_failure_prob(t, eps_delta / 2.0, m) ==
          doctest::Approx(delta).epsilon(1e-12));
}

TEST_CASE("finite parameter set epsilon grows like sqrt(log T)") {
    const double delta = 0.05;
    const std::size_t m = 100;
    const double e10 = finite_theta_epsilon(10, delta, m);
    const double e1000 = finite_theta_epsilon(1000, delta, m);
    const double expected_ratio =
        std::sqrt(std::log(2.0 * 1001.0 / delta) / std::log(2.0 * 11.0 / delta));
    CHECK(e1000 / e10 == doctest::Approx(expected_ratio).epsilon(1e-12));
    // kernel bound scales linearly
    CHECK(finite_theta_epsilon(10, delta, m, 3.0) ==
          doctest::Approx(3.0 * e10).epsilon(1e-14));
}

TEST_CASE("concentration validator basic contract") {
    KernelSpec rbf;
    GaussianPair same;

    // eps at the estimator's range limit: no exceedances possible
    ConcentrationCheck huge = validate_theorem3(same, rbf, 50, 4.0, 100, 1);
    CHECK(huge.empirical_frequency == 0.0);
    CHECK(huge.trials == 100);

    ConcentrationCheck chk = validate_theorem3(same, rbf, 200, 0.2, 200, 2);
    const double se = std::sqrt(chk.analytic_bound * (1.0 - chk.analytic_bound) /
                                static_cast<double>(chk.trials));
    CHECK(chk.empirical_frequency <= chk.analytic_bound + 3.0 * se);
    CHECK(chk.analytic_bound == doctest::Approx(theorem3_tail(0.2, 200)).epsilon(1e-14));

    // deterministic per seed
    ConcentrationCheck again = validate_theorem3(same, rbf, 200, 0.2, 200, 2);
    CHECK(again.empirical_frequency == chk.empirical_frequency);
}

TEST_CASE("concentration validator frequency is nonincreasing in eps") {
    KernelSpec rbf;
    GaussianPair shifted;
    shifted.mean2 = 1.0;
    double prev = 1.0;
    // common seed reuses the same trial draws, so exceedance sets are nested
    for (double eps : {0.02, 0.05, 0.1, 0.2}) {
        ConcentrationCheck chk = validate_theorem3(shifted, rbf, 50, eps, 300, 5);
        CHECK(chk.empirical_frequency <= prev);
        prev = chk.empirical_frequency;
    }
}

TEST_CASE("concentration validator input validation") {
    GaussianPair same;
    KernelSpec lap;
    lap.family = mmdnet::KernelFamily::Laplacian;
    CHECK_THROWS(validate_theorem3(same, lap, 50, 0.1, 100, 1));
    KernelSpec rbf;
    CHECK_THROWS(validate_theorem3(same, rbf, 50, 0.1, 99, 1));
}
