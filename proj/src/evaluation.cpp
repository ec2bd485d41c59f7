#include "mmdnet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mmdnet/rng.hpp"

namespace mmdnet {

std::vector<double> kde_log_densities(const Matrix& generated, const Matrix& test,
                                      double bandwidth) {
    if (test.rows() == 0) {
        throw std::invalid_argument("kde: empty test set");
    }
    if (generated.rows() == 0) {
        throw std::invalid_argument("kde: no generated samples");
    }
    if (generated.cols() != test.cols()) {
        throw std::invalid_argument("kde: dimension mismatch");
    }
    if (bandwidth <= 0.0) {
        throw std::invalid_argument("kde: bandwidth must be > 0");
    }
    const auto dim = static_cast<double>(test.cols());
    const double var = bandwidth * bandwidth;
    const double log_norm = -0.5 * dim * std::log(2.0 * std::numbers::pi * var) -
                            std::log(static_cast<double>(generated.rows()));
    std::vector<double> out(test.rows());
    std::vector<double> exponents(generated.rows());
    for (std::size_t t = 0; t < test.rows(); ++t) {
        const auto tr = test.row(t);
        double max_e = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < generated.rows(); ++m) {
            const auto gr = generated.row(m);
            double sq = 0.0;
            for (std::size_t d = 0; d < tr.size(); ++d) {
                const double diff = tr[d] - gr[d];
                sq += diff * diff;
            }
            exponents[m] = -sq / (2.0 * var);
            max_e = std::max(max_e, exponents[m]);
        }
        double acc = 0.0;
        for (double e : exponents) acc += std::exp(e - max_e);
        out[t] = log_norm + max_e + std::log(acc);
    }
    return out;
}

double kde_mean_log_density(const Matrix& generated, const Matrix& test,
                            double bandwidth) {
    const auto vals = kde_log_densities(generated, test, bandwidth);
    double s = 0.0;
    for (double v : vals) s += v;
    return s / static_cast<double>(vals.size());
}

double kde_select_bandwidth(const Matrix& generated, const Matrix& validation,
                            const std::vector<double>& grid) {
    if (grid.empty()) {
        throw std::invalid_argument("kde_select_bandwidth: empty grid");
    }
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    double best_bw = 0.0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (double bw : sorted) {
        const double score = kde_mean_log_density(generated, validation, bw);
        if (score > best_score) {  // strict: ties keep the smaller bandwidth
            best_score = score;
            best_bw = bw;
        }
    }
    if (!std::isfinite(best_score)) {
        throw std::runtime_error(
            "kde_select_bandwidth: every candidate scored -inf");
    }
    return best_bw;
}

KdeScore kde_score(const Matrix& generated, const Matrix& test, double bandwidth,
                   std::size_t bootstrap_resamples, std::uint64_t seed) {
    const auto vals = kde_log_densities(generated, test, bandwidth);
    const auto n = vals.size();
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(n);

    double se = 0.0;
    if (bootstrap_resamples > 0 && n > 1) {
        Rng rng(seed);
        std::vector<double> means(bootstrap_resamples);
        for (auto& bm : means) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += vals[rng.next_below(n)];
            bm = s / static_cast<double>(n);
        }
        double bmean = 0.0;
        for (double v : means) bmean += v;
        bmean /= static_cast<double>(bootstrap_resamples);
        double var = 0.0;
        for (double v : means) var += (v - bmean) * (v - bmean);
        se = std::sqrt(var / static_cast<double>(bootstrap_resamples - 1));
    }
    return KdeScore{mean, se, bandwidth, generated.rows(), test.rows()};
}

std::vector<double> default_bandwidth_grid(std::size_t count, double lo, double hi) {
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
    }
    return grid;
}

std::vector<double> moving_average(const std::vector<double>& curve,
                                   std::size_t window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    if (curve.size() < window) return {};
    std::vector<double> out;
    out.reserve(curve.size() - window + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < window; ++i) acc += curve[i];
    out.push_back(acc / static_cast<double>(window));
    for (std::size_t i = window; i < curve.size(); ++i) {
        acc += curve[i] - curve[i - window];
        out.push_back(acc / static_cast<double>(window));
    }
    return out;
}

}  // namespace mmdnet
