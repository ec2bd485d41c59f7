#pragma once

// Shared test-only helpers: finite-difference oracles, a minimal PGM
// reader, and small statistics utilities. These stay independent of the
// implementation paths they check.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mmdnet/matrix.hpp"

namespace testutil {

// Central finite difference of a scalar function of one coordinate.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_err(double a, double b) {
    const double denom = std::max({std::abs(a), std::abs(b), 1e-10});
    return std::abs(a - b) / denom;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

struct Pgm {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<unsigned char> pixels;
};

// Minimal binary PGM (P5) reader, independent of the writer under test.
inline Pgm read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::runtime_error("read_pgm: not a P5 file");
    std::size_t width = 0, height = 0, maxval = 0;
    in >> width >> height >> maxval;
    if (maxval != 255) throw std::runtime_error("read_pgm: expected maxval 255");
    in.get();  // single whitespace after the header
    Pgm pgm{width, height, std::vector<unsigned char>(width * height)};
    in.read(reinterpret_cast<char*>(pgm.pixels.data()),
            static_cast<std::streamsize>(pgm.pixels.size()));
    if (!in) throw std::runtime_error("read_pgm: truncated pixel data");
    return pgm;
}

// Symmetric-matrix eigenvalues via cyclic Jacobi rotations (test oracle
// for positive semidefiniteness checks).
inline std::vector<double> symmetric_eigenvalues(mmdnet::Matrix a) {
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        }
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-18) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    return eig;
}

}  // namespace testutil
