#include "mmdnet/data_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mmdnet {

namespace {

std::uint32_t read_be_u32(std::ifstream& in, std::size_t offset) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in) {
        throw std::runtime_error("idx: truncated header at byte offset " +
                                 std::to_string(offset));
    }
    return (std::uint32_t{buf[0]} << 24) | (std::uint32_t{buf[1]} << 16) |
           (std::uint32_t{buf[2]} << 8) | std::uint32_t{buf[3]};
}

unsigned char quantize_unit(double v) {
    // round-half-to-even via nearbyint (default rounding mode)
    const double scaled = std::nearbyint(v * 255.0);
    return static_cast<unsigned char>(scaled);
}

}  // namespace

Dataset load_idx_images(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("idx: cannot open " + path.string());
    const std::uint32_t magic = read_be_u32(in, 0);
    if (magic != 0x00000803u) {
        std::ostringstream msg;
        msg << "idx: unsupported magic 0x" << std::hex << magic << " at byte offset 0 in "
            << path.string();
        throw std::runtime_error(msg.str());
    }
    const std::uint64_t count = read_be_u32(in, 4);
    const std::uint64_t rows = read_be_u32(in, 8);
    const std::uint64_t cols = read_be_u32(in, 12);
    const std::uint64_t pixels = count * rows * cols;
    if (rows == 0 || cols == 0 || count == 0 || pixels / (rows * cols) != count ||
        pixels > (std::uint64_t{1} << 33)) {
        throw std::runtime_error("idx: dimension overflow in header of " + path.string());
    }
    std::vector<unsigned char> payload(pixels);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(pixels));
    if (static_cast<std::uint64_t>(in.gcount()) != pixels) {
        throw std::runtime_error(
            "idx: truncated payload at byte offset " +
            std::to_string(16 + static_cast<std::size_t>(std::max<std::streamsize>(
                                    in.gcount(), 0))) +
            " in " + path.string());
    }
    Matrix samples(count, rows * cols);
    for (std::size_t i = 0; i < pixels; ++i) {
        samples.data()[i] = static_cast<double>(payload[i]) / 255.0;
    }
    return Dataset{std::move(samples), path.string(), Scale::UnitInterval};
}

void save_idx_images(const Matrix& samples, std::size_t image_h, std::size_t image_w,
                     const std::filesystem::path& path) {
    if (image_h * image_w != samples.cols()) {
        throw std::invalid_argument("save_idx_images: image shape does not match columns");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("idx: cannot open " + path.string() + " for write");
    auto write_be = [&out](std::uint32_t v) {
        unsigned char buf[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
        out.write(reinterpret_cast<const char*>(buf), 4);
    };
    write_be(0x00000803u);
    write_be(static_cast<std::uint32_t>(samples.rows()));
    write_be(static_cast<std::uint32_t>(image_h));
    write_be(static_cast<std::uint32_t>(image_w));
    for (double v : samples.data()) {
        if (v < 0.0 || v > 1.0) {
            throw std::invalid_argument("save_idx_images: sample value outside [0,1]");
        }
        const unsigned char byte = quantize_unit(v);
        out.write(reinterpret_cast<const char*>(&byte), 1);
    }
    if (!out) throw std::runtime_error("idx: write failed for " + path.string());
}

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path.string());
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t row_cols = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) comma = line.size();
            const char* first = line.data() + start;
            const char* last = line.data() + comma;
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || ptr != last) {
                throw std::runtime_error("csv: non-numeric cell on line " +
                                         std::to_string(line_no) + " of " + path.string());
            }
            values.push_back(v);
            ++row_cols;
            start = comma + 1;
            if (comma == line.size()) break;
        }
        if (cols == 0) {
            cols = row_cols;
        } else if (row_cols != cols) {
            throw std::runtime_error("csv: ragged row on line " + std::to_string(line_no) +
                                     " of " + path.string());
        }
        ++rows;
    }
    if (rows == 0) throw std::runtime_error("csv: no data rows in " + path.string());
    return Dataset{Matrix(rows, cols, std::move(values)), path.string(), Scale::Raw};
}

void save_csv(const Matrix& samples, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open " + path.string() + " for write");
    char buf[40];
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        for (std::size_t j = 0; j < samples.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", samples(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("csv: write failed for " + path.string());
}

Dataset synth_gaussian(Rng& rng, std::size_t n, const std::vector<double>& mean,
                       const std::vector<double>& stddev) {
    if (mean.size() != stddev.size() || mean.empty()) {
        throw std::invalid_argument("synth_gaussian: mean/std dimension mismatch");
    }
    for (double s : stddev) {
        if (s <= 0.0) throw std::invalid_argument("synth_gaussian: std must be > 0");
    }
    Matrix samples(n, mean.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < mean.size(); ++d) {
            samples(i, d) = mean[d] + stddev[d] * rng.normal();
        }
    }
    return Dataset{std::move(samples), "synthetic-gaussian", Scale::Raw};
}

SplitResult split(const Dataset& ds, const SplitSpec& spec) {
    const double sum =
        spec.train_fraction + spec.validation_fraction + spec.test_fraction;
    if (spec.train_fraction <= 0.0 || spec.validation_fraction <= 0.0 ||
        spec.test_fraction <= 0.0 || std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("split: fractions must be positive and sum to 1");
    }
    const std::size_t n = ds.samples.rows();
    const auto n_train = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(n)));
    const auto n_val = static_cast<std::size_t>(
        std::llround(spec.validation_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_val == 0 || n_train + n_val >= n) {
        throw std::invalid_argument("split: a split would be empty");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(spec.seed);
    rng.shuffle(order);
    auto take = [&](std::size_t begin, std::size_t count, const char* tag) {
        return Dataset{ds.samples.take_rows({order.data() + begin, count}),
                       ds.source + "#" + tag, ds.scale};
    };
    return SplitResult{take(0, n_train, "train"), take(n_train, n_val, "validation"),
                       take(n_train + n_val, n - n_train - n_val, "test")};
}

void export_image_grid(const Matrix& samples, std::size_t grid_rows,
                       std::size_t grid_cols, std::size_t image_h, std::size_t image_w,
                       const std::filesystem::path& path) {
    if (grid_rows * grid_cols > samples.rows()) {
        throw std::invalid_argument("export_image_grid: grid larger than sample count");
    }
    if (image_h * image_w != samples.cols()) {
        throw std::invalid_argument("export_image_grid: image shape does not match columns");
    }
    for (double v : samples.data()) {
        if (v < 0.0 || v > 1.0) {
            throw std::invalid_argument("export_image_grid: sample value outside [0,1]");
        }
    }
    const std::size_t width = grid_cols * image_w + (grid_cols - 1);
    const std::size_t height = grid_rows * image_h + (grid_rows - 1);
    std::vector<unsigned char> canvas(width * height, 0);
    for (std::size_t gr = 0; gr < grid_rows; ++gr) {
        for (std::size_t gc = 0; gc < grid_cols; ++gc) {
            const auto img = samples.row(gr * grid_cols + gc);
            const std::size_t top = gr * (image_h + 1);
            const std::size_t left = gc * (image_w + 1);
            for (std::size_t r = 0; r < image_h; ++r) {
                for (std::size_t c = 0; c < image_w; ++c) {
                    canvas[(top + r) * width + left + c] =
                        quantize_unit(img[r * image_w + c]);
                }
            }
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("pgm: cannot open " + path.string() + " for write");
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(canvas.data()),
              static_cast<std::streamsize>(canvas.size()));
    if (!out) throw std::runtime_error("pgm: write failed for " + path.string());
}

}  // namespace mmdnet
