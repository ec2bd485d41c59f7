#include "mmdnet/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mmdnet/mmd.hpp"

namespace mmdnet {

void rmsprop_step(std::vector<double>& params, const std::vector<double>& grads,
                  std::vector<double>& state, double lr, double decay, double eps) {
    if (params.size() != grads.size() || params.size() != state.size()) {
        throw std::invalid_argument("rmsprop_step: shape mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        state[i] = decay * state[i] + (1.0 - decay) * grads[i] * grads[i];
        params[i] -= lr * grads[i] / (std::sqrt(state[i]) + eps);
    }
}

std::vector<std::vector<std::size_t>> minibatch_schedule(std::size_t n_data,
                                                         std::size_t batch, Rng& rng) {
    if (batch < 1 || batch > n_data) {
        throw std::invalid_argument("minibatch_schedule: batch size " +
                                    std::to_string(batch) + " out of range for " +
                                    std::to_string(n_data) + " samples");
    }
    std::vector<std::size_t> order(n_data);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t start = 0; start < n_data; start += batch) {
        const std::size_t end = std::min(start + batch, n_data);
        blocks.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                            order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return blocks;
}

namespace {

void check_no_nan(double cost, const std::vector<double>& grad, std::size_t iteration) {
    bool bad = !std::isfinite(cost);
    for (double g : grad) bad = bad || !std::isfinite(g);
    if (bad) {
        throw std::runtime_error("train: NaN/Inf in cost or gradient at iteration " +
                                 std::to_string(iteration));
    }
}

}  // namespace

TrainReport train(const Matrix& data, GeneratorParams init, const KernelSpec& kspec,
                  const TrainConfig& cfg, const TrainHooks& hooks) {
    if (cfg.m_generated < 2) {
        throw std::invalid_argument("train: m_generated must be >= 2");
    }
    if (output_dim(init) != data.cols()) {
        throw std::invalid_argument("train: generator output dimension " +
                                    std::to_string(output_dim(init)) +
                                    " does not match data dimension " +
                                    std::to_string(data.cols()));
    }

    Rng master(cfg.seed);
    Rng split_rng(master.derive_seed());
    Rng noise_rng(master.derive_seed());
    Rng shuffle_rng(master.derive_seed());

    // Probe split is carved off before training; probe MMD needs >= 2 rows.
    std::vector<std::size_t> order(data.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    split_rng.shuffle(order);
    std::size_t n_probe = cfg.probe_fraction > 0.0
        ? static_cast<std::size_t>(std::llround(cfg.probe_fraction *
                                                static_cast<double>(data.rows())))
        : 0;
    if (n_probe == 1) n_probe = 2;
    if (n_probe + 2 > data.rows()) {
        throw std::invalid_argument("train: probe_fraction leaves too little data");
    }
    const Matrix probe =
        data.take_rows({order.data(), n_probe});
    const Matrix train_data =
        data.take_rows({order.data() + n_probe, data.rows() - n_probe});

    const std::size_t batch =
        cfg.minibatch_size == 0 ? train_data.rows() : cfg.minibatch_size;
    if (batch > train_data.rows()) {
        throw std::invalid_argument("train: minibatch size exceeds training set size");
    }

    GeneratorParams params = std::move(init);
    std::vector<double> flat = flatten(params);
    std::vector<double> opt_state(flat.size(), 0.0);

    const std::size_t total_iters = cfg.iterations + cfg.tail_iterations;
    const std::size_t noise_dim = input_dim(params);

    TrainReport report{{}, params};
    report.records.reserve(total_iters + 1);

    Matrix noise;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    std::vector<std::vector<std::size_t>> schedule;
    std::size_t block_idx = 0;
    Matrix minibatch;

    for (std::size_t it = 0; it < total_iters; ++it) {
        const bool in_tail = it >= cfg.iterations;
        if (it == 0 ||
            (!in_tail && cfg.resample_interval > 0 && it % cfg.resample_interval == 0)) {
            noise = noise_rng.standard_normal(cfg.m_generated, noise_dim);
            if (hooks.on_noise_regen) hooks.on_noise_regen(it, noise);
        }
        if (block_idx >= schedule.size()) {
            schedule = minibatch_schedule(train_data.rows(), batch, shuffle_rng);
            block_idx = 0;
        }
        minibatch = train_data.take_rows(schedule[block_idx]);
        ++block_idx;

        const Matrix generated = generator_forward(params, noise);
        const double cost = mmd_cost(kspec, generated, minibatch);
        const Matrix grad_y = mmd_cost_grad(kspec, generated, minibatch);
        const std::vector<double> grad = flatten(generator_vjp(params, noise, grad_y));
        check_no_nan(cost, grad, it);

        TrainRecord rec{it, cost, std::nullopt, 0.0};
        if (n_probe >= 2 && cfg.snapshot_every > 0 && it % cfg.snapshot_every == 0) {
            rec.probe_mmd = mmd_u_squared(kspec, probe, generated).value;
        }
        rec.elapsed_ms = elapsed_ms();
        report.records.push_back(rec);

        if (cfg.optimizer == Optimizer::Rmsprop) {
            rmsprop_step(flat, grad, opt_state, cfg.base_lr, cfg.rmsprop_decay,
                         cfg.rmsprop_eps);
        } else {
            for (std::size_t i = 0; i < flat.size(); ++i) {
                flat[i] -= cfg.base_lr * grad[i];
            }
        }
        unflatten(params, flat);
    }

    // Final record under the last parameters, on the last minibatch seen.
    if (total_iters > 0) {
        const Matrix generated = generator_forward(params, noise);
        TrainRecord rec{total_iters, mmd_cost(kspec, generated, minibatch), std::nullopt,
                        0.0};
        if (n_probe >= 2) {
            rec.probe_mmd = mmd_u_squared(kspec, probe, generated).value;
        }
        rec.elapsed_ms = elapsed_ms();
        report.records.push_back(rec);
    }

    report.final_params = std::move(params);
    return report;
}

}  // namespace mmdnet
