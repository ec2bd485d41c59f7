#pragma once

#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "mmdnet/matrix.hpp"
#include "mmdnet/rng.hpp"

namespace mmdnet {

/// Per-coordinate affine generator y = mu + sigma * w.
struct AffineParams {
    std::vector<double> mu;
    std::vector<double> sigma;
};

struct MlpLayer {
    Matrix weight;             // in x out
    std::vector<double> bias;  // out
};

/// Fully connected net with sigmoid activation on every layer, output
/// layer included, so outputs lie in (0, 1).
struct MlpParams {
    std::vector<MlpLayer> layers;
};

using GeneratorParams = std::variant<AffineParams, MlpParams>;

std::size_t input_dim(const GeneratorParams& params);
std::size_t output_dim(const GeneratorParams& params);
std::size_t param_count(const GeneratorParams& params);

/// Row m of the result is G_theta(w_m).
Matrix generator_forward(const GeneratorParams& params, const Matrix& noise);

/// Vector-Jacobian product against the parameters: the gradient of
/// sum_m <upstream_m, G_theta(w_m)> with respect to every parameter,
/// returned in a parameter-shaped structure.
GeneratorParams generator_vjp(const GeneratorParams& params, const Matrix& noise,
                              const Matrix& upstream);

/// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
/// layer_sizes includes the input and output dimensions.
MlpParams mlp_init(Rng& rng, const std::vector<std::size_t>& layer_sizes);

std::vector<double> flatten(const GeneratorParams& params);
void unflatten(GeneratorParams& params, std::span<const double> flat);

/// Versioned little-endian binary checkpoint ("MMDN" magic); round-trips
/// bit-exactly.
void save_checkpoint(const GeneratorParams& params, const std::filesystem::path& path);
GeneratorParams load_checkpoint(const std::filesystem::path& path);

}  // namespace mmdnet
