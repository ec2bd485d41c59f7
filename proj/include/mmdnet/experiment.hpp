#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmdnet/data_io.hpp"
#include "mmdnet/generator.hpp"
#include "mmdnet/kernels.hpp"
#include "mmdnet/trainer.hpp"

namespace mmdnet {

/// Declarative description of one training run. Parsed from a key = value
/// config file (see README for the schema) or produced by a preset. The
/// seed is mandatory; there is no wall-clock default.
struct ExperimentConfig {
    // dataset: "gaussian", "idx:<path>", or "csv:<path>"
    std::string dataset = "gaussian";
    std::size_t data_n = 200;
    std::vector<double> data_mean{0.0};
    std::vector<double> data_std{1.0};
    bool csv_has_header = false;
    std::size_t subsample = 0;  // 0 = use everything

    // generator: "affine" or "mlp"
    std::string generator = "affine";
    std::vector<double> affine_init_mu{2.5};
    std::vector<double> affine_init_sigma{0.1};
    std::vector<std::size_t> mlp_hidden{64, 32, 64};
    std::size_t noise_dim = 10;  // mlp only; affine uses the data dimension

    KernelSpec kernel;
    bool bandwidth_median = true;  // median heuristic on training data

    TrainConfig train;

    // outputs
    std::string output_dir = "out";
    std::size_t grid_rows = 0;  // nonzero => export a PGM sample grid
    std::size_t grid_cols = 0;
    std::size_t image_h = 0;
    std::size_t image_w = 0;
};

/// Parses and schema-validates a config file. Unknown keys and missing
/// mandatory keys (seed) are errors.
ExperimentConfig parse_experiment_config(const std::filesystem::path& path);

/// Built-in presets: gaussian1d, gaussian2d, mnist-desk.
ExperimentConfig experiment_preset(const std::string& name);
std::vector<std::string> experiment_preset_names();

struct ExperimentResult {
    TrainReport report;
    KernelSpec kernel;  // with the bandwidth actually used
    Dataset data;
    double final_cost = 0.0;
};

/// Runs the configured experiment and writes curve.csv, timings.csv, the
/// final checkpoint, and generated samples (PGM grid for image data,
/// samples.csv otherwise) into the output directory.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& output_dir);

/// Loads (and optionally subsamples) the dataset named by the config.
Dataset load_experiment_data(const ExperimentConfig& cfg);

/// curve.csv writer: iteration,minibatch_cost,probe_mmd_u2 rows. Wall-clock
/// goes to timings.csv instead so reruns with one seed are byte-identical.
void write_curve_csv(const TrainReport& report, const std::filesystem::path& path);
void write_timings_csv(const TrainReport& report, const std::filesystem::path& path);

}  // namespace mmdnet
