// mmdnet command-line front end.
//
// Exit codes: 0 success, 2 config/usage error, 3 numerical failure,
// 4 data mismatch.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmdnet/bounds.hpp"
#include "mmdnet/data_io.hpp"
#include "mmdnet/evaluation.hpp"
#include "mmdnet/experiment.hpp"
#include "mmdnet/generator.hpp"
#include "mmdnet/kernels.hpp"
#include "mmdnet/mmd.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitDataMismatch = 4;

mmdnet::Dataset load_any(const std::string& path, bool csv_header) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".idx") {
        return mmdnet::load_idx_images(path);
    }
    return mmdnet::load_csv(path, csv_header);
}

mmdnet::KernelFamily parse_family(const std::string& name) {
    if (name == "rbf") return mmdnet::KernelFamily::Rbf;
    if (name == "laplace" || name == "laplacian") return mmdnet::KernelFamily::Laplacian;
    if (name == "rq") return mmdnet::KernelFamily::RationalQuadratic;
    throw CLI::ValidationError("--kernel", "must be rbf, laplace, or rq");
}

int cmd_train(const std::string& config_path, const std::string& preset,
              const std::string& out_override) {
    mmdnet::ExperimentConfig cfg;
    try {
        cfg = preset.empty() ? mmdnet::parse_experiment_config(config_path)
                             : mmdnet::experiment_preset(preset);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const std::filesystem::path out_dir =
        out_override.empty() ? cfg.output_dir : out_override;
    try {
        const auto result = mmdnet::run_experiment(cfg, out_dir);
        std::cout << "trained " << cfg.train.iterations + cfg.train.tail_iterations
                  << " iterations, bandwidth " << result.kernel.bandwidth
                  << ", final minibatch cost " << result.final_cost << "\n"
                  << "outputs in " << out_dir.string() << "\n";
        return 0;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_eval(const std::string& checkpoint, const std::string& data_path,
             bool csv_header, std::size_t n_samples, std::uint64_t seed,
             const std::vector<double>& kde_grid, double val_fraction) {
    if (n_samples == 0) {
        std::cerr << "error: --samples must be >= 1\n";
        return kExitUsage;
    }
    try {
        const auto params = mmdnet::load_checkpoint(checkpoint);
        const auto ds = load_any(data_path, csv_header);
        if (mmdnet::output_dim(params) != ds.samples.cols()) {
            std::cerr << "error: generator outputs dimension "
                      << mmdnet::output_dim(params) << " but data has dimension "
                      << ds.samples.cols() << "\n";
            return kExitDataMismatch;
        }

        mmdnet::Rng rng(seed);
        const auto noise = rng.standard_normal(n_samples, mmdnet::input_dim(params));
        const auto generated = mmdnet::generator_forward(params, noise);

        // Bandwidth is selected on a validation slice, scored on the rest.
        std::vector<std::size_t> order(ds.samples.rows());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        auto n_val = static_cast<std::size_t>(
            val_fraction * static_cast<double>(order.size()));
        if (n_val == 0) n_val = 1;
        if (n_val >= order.size()) n_val = order.size() - 1;
        const auto validation = ds.samples.take_rows({order.data(), n_val});
        const auto test =
            ds.samples.take_rows({order.data() + n_val, order.size() - n_val});

        const auto grid =
            kde_grid.empty() ? mmdnet::default_bandwidth_grid() : kde_grid;
        const double bw = mmdnet::kde_select_bandwidth(generated, validation, grid);
        const auto score = mmdnet::kde_score(generated, test, bw, 1000, seed ^ 1);
        std::printf("mean_log_density %.6f +- %.6f (bandwidth %.6g, M=%zu, test=%zu)\n",
                    score.mean_log_density, score.bootstrap_stderr, score.bandwidth,
                    score.generated_count, score.test_count);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_mmd(const std::string& path_a, const std::string& path_b, bool csv_header,
            const std::string& family, const std::string& bandwidth, double rq_alpha,
            std::uint64_t seed) {
    try {
        const auto a = load_any(path_a, csv_header);
        const auto b = load_any(path_b, csv_header);
        if (a.samples.cols() != b.samples.cols()) {
            std::cerr << "error: datasets have dimensions " << a.samples.cols()
                      << " and " << b.samples.cols() << "\n";
            return kExitDataMismatch;
        }
        mmdnet::KernelSpec spec;
        spec.family = parse_family(family);
        spec.rq_alpha = rq_alpha;
        std::string bw_source;
        if (bandwidth == "median") {
            mmdnet::Rng rng(seed);
            spec.bandwidth = mmdnet::median_heuristic(a.samples, rng);
            bw_source = "median heuristic";
        } else {
            spec.bandwidth = std::stod(bandwidth);
            bw_source = "explicit";
        }
        const auto est = mmdnet::mmd_u_squared(spec, a.samples, b.samples);
        std::printf("mmd_u2 %.10g (N=%zu, M=%zu, bandwidth %.6g [%s])\n", est.value,
                    est.n, est.m, spec.bandwidth, bw_source.c_str());
        return 0;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_bounds(int p1, double gamma1, int p2, double gamma2, double delta,
               const std::vector<std::size_t>& m_grid, bool validate, double eps,
               std::size_t trials, std::uint64_t seed) {
    try {
        std::printf("m,epsilon%s\n",
                    validate ? ",tail_eps,analytic_tail,empirical_frequency" : "");
        for (std::size_t m : m_grid) {
            mmdnet::BoundInputs in;
            in.p1 = p1;
            in.gamma1 = gamma1;
            in.p2 = p2;
            in.gamma2 = gamma2;
            in.delta = delta;
            in.m = m;
            const double e = mmdnet::epsilon_bound(in);
            if (validate) {
                mmdnet::KernelSpec spec;  // RBF, bandwidth 1
                const auto check = mmdnet::validate_theorem3(
                    mmdnet::GaussianPair{}, spec, m, eps, trials, seed);
                std::printf("%zu,%.10g,%.10g,%.10g,%.10g\n", m, e, eps,
                            check.analytic_bound, check.empirical_frequency);
            } else {
                std::printf("%zu,%.10g\n", m, e);
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MMD generative network trainer and two-sample toolbox"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Train a generator from a config or preset");
    std::string config_path, preset, out_override;
    train->add_option("config", config_path, "Path to a key = value config file");
    train->add_option("--preset", preset,
                      "Built-in preset: gaussian1d, gaussian2d, mnist-desk");
    train->add_option("--out", out_override, "Override the output directory");

    // eval
    auto* eval = app.add_subcommand("eval", "KDE-score a checkpointed generator");
    std::string checkpoint, eval_data;
    bool eval_csv_header = false;
    std::size_t n_samples = 500;
    std::uint64_t eval_seed = 0;
    std::vector<double> kde_grid;
    double val_fraction = 0.2;
    eval->add_option("--checkpoint", checkpoint, "Generator checkpoint")->required();
    eval->add_option("--data", eval_data, "Held-out dataset (.idx or CSV)")->required();
    eval->add_flag("--csv-header", eval_csv_header, "CSV input has a header row");
    eval->add_option("--samples", n_samples, "Number of generated samples");
    eval->add_option("--seed", eval_seed, "RNG seed")->required();
    eval->add_option("--kde-grid", kde_grid, "Candidate KDE bandwidths");
    eval->add_option("--val-fraction", val_fraction,
                     "Fraction of data used for bandwidth selection");

    // mmd
    auto* mmd = app.add_subcommand("mmd", "Unbiased MMD^2 between two datasets");
    std::string path_a, path_b, family = "rbf", bandwidth = "median";
    bool mmd_csv_header = false;
    double rq_alpha = 1.0;
    std::uint64_t mmd_seed = 0;
    mmd->add_option("a", path_a, "First dataset")->required();
    mmd->add_option("b", path_b, "Second dataset")->required();
    mmd->add_flag("--csv-header", mmd_csv_header, "CSV inputs have a header row");
    mmd->add_option("--kernel", family, "rbf|laplace|rq");
    mmd->add_option("--bandwidth", bandwidth, "Length-scale, or \"median\"");
    mmd->add_option("--rq-alpha", rq_alpha, "Rational-quadratic shape");
    mmd->add_option("--seed", mmd_seed, "Seed for median-heuristic pair sampling");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Estimation-error bound table");
    int p1 = 1, p2 = 1;
    double gamma1 = 2.0, gamma2 = 2.0, delta = 0.05, eps = 0.2;
    std::vector<std::size_t> m_grid{100};
    bool validate = false;
    std::size_t trials = 1000;
    std::uint64_t bounds_seed = 0;
    bounds->add_option("--p1", p1, "Fat-shattering exponent p1");
    bounds->add_option("--gamma1", gamma1, "Fat-shattering scale gamma1 (> 1)");
    bounds->add_option("--p2", p2, "Fat-shattering exponent p2");
    bounds->add_option("--gamma2", gamma2, "Fat-shattering scale gamma2 (> 1)");
    bounds->add_option("--delta", delta, "Confidence parameter in (0,1)");
    bounds->add_option("--m-grid", m_grid, "Sample counts to tabulate");
    bounds->add_flag("--validate", validate,
                     "Also run the Monte Carlo concentration check");
    bounds->add_option("--eps", eps, "Deviation threshold for --validate");
    bounds->add_option("--trials", trials, "Monte Carlo trials for --validate");
    bounds->add_option("--seed", bounds_seed, "Seed for --validate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (train->parsed()) {
        if (config_path.empty() == preset.empty()) {
            std::cerr << "error: give exactly one of <config> or --preset\n";
            return kExitUsage;
        }
        return cmd_train(config_path, preset, out_override);
    }
    if (eval->parsed()) {
        return cmd_eval(checkpoint, eval_data, eval_csv_header, n_samples, eval_seed,
                        kde_grid, val_fraction);
    }
    if (mmd->parsed()) {
        return cmd_mmd(path_a, path_b, mmd_csv_header, family, bandwidth, rq_alpha,
                       mmd_seed);
    }
    if (bounds->parsed()) {
        return cmd_bounds(p1, gamma1, p2, gamma2, delta, m_grid, validate, eps, trials,
                          bounds_seed);
    }
    return kExitUsage;
}
