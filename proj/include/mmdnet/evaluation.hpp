#pragma once

#include <cstdint>
#include <vector>

#include "mmdnet/matrix.hpp"

namespace mmdnet {

/// Log density of each test point under an isotropic Gaussian KDE centered
/// at the generated samples (bandwidth = per-coordinate standard
/// deviation). Uses a max-shifted log-sum-exp.
std::vector<double> kde_log_densities(const Matrix& generated, const Matrix& test,
                                      double bandwidth);

/// Mean over test points of kde_log_densities.
double kde_mean_log_density(const Matrix& generated, const Matrix& test,
                            double bandwidth);

/// Grid bandwidth maximizing the mean log density on the validation split;
/// ties resolve to the smallest bandwidth.
double kde_select_bandwidth(const Matrix& generated, const Matrix& validation,
                            const std::vector<double>& grid);

struct KdeScore {
    double mean_log_density = 0.0;
    double bootstrap_stderr = 0.0;
    double bandwidth = 0.0;
    std::size_t generated_count = 0;
    std::size_t test_count = 0;
};

/// Scores with a bootstrap standard error over resamples of the test points.
KdeScore kde_score(const Matrix& generated, const Matrix& test, double bandwidth,
                   std::size_t bootstrap_resamples, std::uint64_t seed);

/// Log-spaced default bandwidth grid for unit-scaled data.
std::vector<double> default_bandwidth_grid(std::size_t count = 10, double lo = 0.01,
                                           double hi = 1.0);

/// Moving average of a learning curve with the given window.
std::vector<double> moving_average(const std::vector<double>& curve, std::size_t window);

}  // namespace mmdnet
