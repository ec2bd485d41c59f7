#include "mmdnet/generator.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace mmdnet {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + ": non-finite parameter");
        }
    }
}

// Forward pass storing post-activation outputs of every layer.
std::vector<Matrix> mlp_forward_all(const MlpParams& p, const Matrix& noise) {
    std::vector<Matrix> acts;
    acts.reserve(p.layers.size());
    const Matrix* input = &noise;
    for (const auto& layer : p.layers) {
        Matrix z = matmul(*input, layer.weight);
        for (std::size_t i = 0; i < z.rows(); ++i) {
            for (std::size_t j = 0; j < z.cols(); ++j) {
                z(i, j) = sigmoid(z(i, j) + layer.bias[j]);
            }
        }
        acts.push_back(std::move(z));
        input = &acts.back();
    }
    return acts;
}

template <typename Fn>
void for_each_param(GeneratorParams& params, Fn&& fn) {
    std::visit(
        [&](auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AffineParams>) {
                for (double& v : p.mu) fn(v);
                for (double& v : p.sigma) fn(v);
            } else {
                for (auto& layer : p.layers) {
                    for (double& v : layer.weight.data()) fn(v);
                    for (double& v : layer.bias) fn(v);
                }
            }
        },
        params);
}

}  // namespace

std::size_t input_dim(const GeneratorParams& params) {
    return std::visit(
        [](const auto& p) -> std::size_t {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AffineParams>) {
                return p.mu.size();
            } else {
                return p.layers.front().weight.rows();
            }
        },
        params);
}

std::size_t output_dim(const GeneratorParams& params) {
    return std::visit(
        [](const auto& p) -> std::size_t {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AffineParams>) {
                return p.mu.size();
            } else {
                return p.layers.back().weight.cols();
            }
        },
        params);
}

std::size_t param_count(const GeneratorParams& params) {
    std::size_t n = 0;
    for_each_param(const_cast<GeneratorParams&>(params), [&](double&) { ++n; });
    return n;
}

Matrix generator_forward(const GeneratorParams& params, const Matrix& noise) {
    if (noise.cols() != input_dim(params)) {
        throw std::invalid_argument("generator_forward: noise has dimension " +
                                    std::to_string(noise.cols()) + ", generator expects " +
                                    std::to_string(input_dim(params)));
    }
    return std::visit(
        [&](const auto& p) -> Matrix {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AffineParams>) {
                Matrix out(noise.rows(), noise.cols());
                for (std::size_t i = 0; i < noise.rows(); ++i) {
                    for (std::size_t d = 0; d < noise.cols(); ++d) {
                        out(i, d) = p.mu[d] + p.sigma[d] * noise(i, d);
                    }
                }
                return out;
            } else {
                auto acts = mlp_forward_all(p, noise);
                return std::move(acts.back());
            }
        },
        params);
}

GeneratorParams generator_vjp(const GeneratorParams& params, const Matrix& noise,
                              const Matrix& upstream) {
    if (upstream.rows() != noise.rows() || upstream.cols() != output_dim(params)) {
        throw std::invalid_argument("generator_vjp: upstream shape mismatch");
    }
    return std::visit(
        [&](const auto& p) -> GeneratorParams {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AffineParams>) {
                AffineParams grad{std::vector<double>(p.mu.size(), 0.0),
                                  std::vector<double>(p.sigma.size(), 0.0)};
                for (std::size_t i = 0; i < noise.rows(); ++i) {
                    for (std::size_t d = 0; d < noise.cols(); ++d) {
                        grad.mu[d] += upstream(i, d);
                        grad.sigma[d] += upstream(i, d) * noise(i, d);
                    }
                }
                return grad;
            } else {
                const auto acts = mlp_forward_all(p, noise);
                MlpParams grad;
                grad.layers.resize(p.layers.size());
                // delta = dL/dz for the current layer (z = pre-activation).
                Matrix delta = upstream;
                for (std::size_t l = p.layers.size(); l-- > 0;) {
                    const Matrix& out = acts[l];
                    for (std::size_t i = 0; i < delta.rows(); ++i) {
                        for (std::size_t j = 0; j < delta.cols(); ++j) {
                            delta(i, j) *= out(i, j) * (1.0 - out(i, j));
                        }
                    }
                    const Matrix& in = l == 0 ? noise : acts[l - 1];
                    auto& glayer = grad.layers[l];
                    glayer.weight = Matrix(in.cols(), delta.cols());
                    glayer.bias.assign(delta.cols(), 0.0);
                    for (std::size_t i = 0; i < in.rows(); ++i) {
                        for (std::size_t a = 0; a < in.cols(); ++a) {
                            const double ina = in(i, a);
                            for (std::size_t b = 0; b < delta.cols(); ++b) {
                                glayer.weight(a, b) += ina * delta(i, b);
                            }
                        }
                        for (std::size_t b = 0; b < delta.cols(); ++b) {
                            glayer.bias[b] += delta(i, b);
                        }
                    }
                    if (l > 0) {
                        // dL/d(input of layer l) = delta * W^T
                        Matrix next(delta.rows(), p.layers[l].weight.rows());
                        for (std::size_t i = 0; i < delta.rows(); ++i) {
                            for (std::size_t a = 0; a < next.cols(); ++a) {
                                double s = 0.0;
                                for (std::size_t b = 0; b < delta.cols(); ++b) {
                                    s += delta(i, b) * p.layers[l].weight(a, b);
                                }
                                next(i, a) = s;
                            }
                        }
                        delta = std::move(next);
                    }
                }
                return grad;
            }
        },
        params);
}

MlpParams mlp_init(Rng& rng, const std::vector<std::size_t>& layer_sizes) {
    if (layer_sizes.size() < 2) {
        throw std::invalid_argument("mlp_init: need at least input and output sizes");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw std::invalid_argument("mlp_init: nonpositive layer size");
    }
    MlpParams p;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const std::size_t fan_in = layer_sizes[l];
        const std::size_t fan_out = layer_sizes[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        MlpLayer layer{Matrix(fan_in, fan_out), std::vector<double>(fan_out, 0.0)};
        for (double& w : layer.weight.data()) {
            w = (2.0 * rng.uniform() - 1.0) * bound;
        }
        p.layers.push_back(std::move(layer));
    }
    return p;
}

std::vector<double> flatten(const GeneratorParams& params) {
    std::vector<double> flat;
    flat.reserve(param_count(params));
    for_each_param(const_cast<GeneratorParams&>(params),
                   [&](double& v) { flat.push_back(v); });
    return flat;
}

void unflatten(GeneratorParams& params, std::span<const double> flat) {
    if (flat.size() != param_count(params)) {
        throw std::invalid_argument("unflatten: flat vector has wrong length");
    }
    std::size_t i = 0;
    for_each_param(params, [&](double& v) { v = flat[i++]; });
}

namespace {

constexpr std::uint32_t kCheckpointVersion = 1;
constexpr std::uint32_t kTagAffine = 0;
constexpr std::uint32_t kTagMlp = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::ifstream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in) throw std::runtime_error("checkpoint: truncated header");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
    for (double x : v) {
        const auto bits = std::bit_cast<std::uint64_t>(x);
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
        out.write(reinterpret_cast<const char*>(buf), 8);
    }
}

void read_doubles(std::ifstream& in, std::vector<double>& v) {
    for (double& x : v) {
        unsigned char buf[8];
        in.read(reinterpret_cast<char*>(buf), 8);
        if (!in) throw std::runtime_error("checkpoint: truncated payload");
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        x = std::bit_cast<double>(bits);
    }
}

}  // namespace

void save_checkpoint(const GeneratorParams& params, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string());
    out.write("MMDN", 4);
    write_u32(out, kCheckpointVersion);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AffineParams>) {
                write_u32(out, kTagAffine);
                write_u32(out, static_cast<std::uint32_t>(p.mu.size()));
                write_doubles(out, p.mu);
                write_doubles(out, p.sigma);
            } else {
                write_u32(out, kTagMlp);
                write_u32(out, static_cast<std::uint32_t>(p.layers.size()));
                for (const auto& layer : p.layers) {
                    write_u32(out, static_cast<std::uint32_t>(layer.weight.rows()));
                    write_u32(out, static_cast<std::uint32_t>(layer.weight.cols()));
                    write_doubles(out, layer.weight.data());
                    write_doubles(out, layer.bias);
                }
            }
        },
        params);
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path.string());
}

GeneratorParams load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MMDN", 4) != 0) {
        throw std::runtime_error("checkpoint: bad magic in " + path.string());
    }
    const std::uint32_t version = read_u32(in);
    if (version != kCheckpointVersion) {
        throw std::runtime_error("checkpoint: unsupported version " +
                                 std::to_string(version));
    }
    const std::uint32_t tag = read_u32(in);
    if (tag == kTagAffine) {
        const std::uint32_t dim = read_u32(in);
        AffineParams p{std::vector<double>(dim), std::vector<double>(dim)};
        read_doubles(in, p.mu);
        read_doubles(in, p.sigma);
        check_finite(p.mu, "checkpoint mu");
        check_finite(p.sigma, "checkpoint sigma");
        return p;
    }
    if (tag == kTagMlp) {
        const std::uint32_t n_layers = read_u32(in);
        MlpParams p;
        for (std::uint32_t l = 0; l < n_layers; ++l) {
            const std::uint32_t rows = read_u32(in);
            const std::uint32_t cols = read_u32(in);
            MlpLayer layer{Matrix(rows, cols), std::vector<double>(cols)};
            read_doubles(in, layer.weight.data());
            read_doubles(in, layer.bias);
            p.layers.push_back(std::move(layer));
        }
        return p;
    }
    throw std::runtime_error("checkpoint: unknown variant tag " + std::to_string(tag));
}

}  // namespace mmdnet
