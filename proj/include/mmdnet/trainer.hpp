#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mmdnet/generator.hpp"
#include "mmdnet/kernels.hpp"
#include "mmdnet/matrix.hpp"

namespace mmdnet {

enum class Optimizer { PlainSgd, Rmsprop };

/// Knobs of the minibatch training loop. One "iteration" is one minibatch
/// gradient step.
struct TrainConfig {
    std::size_t m_generated = 100;       // M, rows of the noise matrix
    std::size_t minibatch_size = 0;      // 0 = full batch
    std::size_t resample_interval = 0;   // r; 0 = noise fixed after the initial draw
    std::size_t iterations = 1000;
    std::size_t tail_iterations = 0;     // extra frozen-noise iterations after the main run
    double base_lr = 0.02;
    Optimizer optimizer = Optimizer::Rmsprop;
    double rmsprop_decay = 0.9;
    double rmsprop_eps = 1e-8;
    std::uint64_t seed = 0;
    std::size_t snapshot_every = 100;    // probe-MMD recording cadence
    double probe_fraction = 0.1;         // held-out split for probe MMD; 0 disables
};

struct TrainRecord {
    std::size_t iteration = 0;
    double minibatch_cost = 0.0;
    std::optional<double> probe_mmd;  // recorded every snapshot_every iterations
    double elapsed_ms = 0.0;
};

struct TrainReport {
    std::vector<TrainRecord> records;
    GeneratorParams final_params;
};

/// Test hooks; on_noise_regen fires whenever the noise matrix is
/// (re)generated, with the iteration index it takes effect at.
struct TrainHooks {
    std::function<void(std::size_t iteration, const Matrix& noise)> on_noise_regen;
};

/// v <- decay*v + (1-decay)*g^2; p <- p - lr * g / (sqrt(v) + eps).
void rmsprop_step(std::vector<double>& params, const std::vector<double>& grads,
                  std::vector<double>& state, double lr, double decay, double eps);

/// One epoch's partition: a fresh uniform shuffle split into
/// ceil(n / batch) blocks; the last block may be short.
std::vector<std::vector<std::size_t>> minibatch_schedule(std::size_t n_data,
                                                         std::size_t batch, Rng& rng);

/// Minibatch stochastic gradient descent on the MMD cost, with the noise
/// inputs regenerated every resample_interval iterations and held fixed
/// otherwise. Throws on NaN cost or gradient, naming the iteration.
TrainReport train(const Matrix& data, GeneratorParams init, const KernelSpec& kspec,
                  const TrainConfig& cfg, const TrainHooks& hooks = {});

}  // namespace mmdnet
