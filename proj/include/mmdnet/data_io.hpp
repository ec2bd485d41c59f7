#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mmdnet/matrix.hpp"
#include "mmdnet/rng.hpp"

namespace mmdnet {

enum class Scale { Raw, UnitInterval };

struct Dataset {
    Matrix samples;  // rows = examples
    std::string source;
    Scale scale = Scale::Raw;
};

struct SplitSpec {
    double train_fraction = 0.8;
    double validation_fraction = 0.1;
    double test_fraction = 0.1;
    std::uint64_t seed = 0;
};

struct SplitResult {
    Dataset train;
    Dataset validation;
    Dataset test;
};

/// Parses a big-endian IDX file of u8 images (magic 0x00000803). Each
/// image is flattened to one row and divided by 255, so samples land in
/// [0, 1]. Parse errors name the byte offset.
Dataset load_idx_images(const std::filesystem::path& path);

/// Writes images (rows, values in [0,1]) as an IDX u8 tensor, quantizing
/// with round-half-to-even.
void save_idx_images(const Matrix& samples, std::size_t image_h, std::size_t image_w,
                     const std::filesystem::path& path);

/// Rectangular numeric CSV; parse errors name the line.
Dataset load_csv(const std::filesystem::path& path, bool has_header);

/// Decimal text with 17 significant digits, so reload is bit-exact.
void save_csv(const Matrix& samples, const std::filesystem::path& path);

/// n rows with independent coordinates N(mean_d, std_d^2).
Dataset synth_gaussian(Rng& rng, std::size_t n, const std::vector<double>& mean,
                       const std::vector<double>& stddev);

/// Disjoint shuffled partition, deterministic per seed; every split
/// nonempty.
SplitResult split(const Dataset& ds, const SplitSpec& spec);

/// Binary PGM (P5, maxval 255) tiling samples row-major with 1-pixel black
/// separators. Requires samples in [0, 1]; quantizes with
/// round-half-to-even.
void export_image_grid(const Matrix& samples, std::size_t grid_rows,
                       std::size_t grid_cols, std::size_t image_h, std::size_t image_w,
                       const std::filesystem::path& path);

}  // namespace mmdnet
