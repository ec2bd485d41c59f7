// Python bindings for the core operations: kernels, MMD estimators, the
// training loop, KDE scoring, and the bound calculators.

#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "mmdnet/bounds.hpp"
#include "mmdnet/evaluation.hpp"
#include "mmdnet/generator.hpp"
#include "mmdnet/kernels.hpp"
#include "mmdnet/mmd.hpp"
#include "mmdnet/trainer.hpp"

namespace py = pybind11;
using namespace mmdnet;

namespace {

Matrix to_matrix(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() == 1) {
        std::vector<double> data(a.data(), a.data() + a.shape(0));
        return Matrix(static_cast<std::size_t>(a.shape(0)), 1, std::move(data));
    }
    if (a.ndim() != 2) throw std::invalid_argument("expected a 1-D or 2-D array");
    std::vector<double> data(a.data(), a.data() + a.size());
    return Matrix(static_cast<std::size_t>(a.shape(0)),
                  static_cast<std::size_t>(a.shape(1)), std::move(data));
}

py::array_t<double> to_numpy(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

KernelSpec make_spec(const std::string& family, double bandwidth, double rq_alpha) {
    KernelSpec spec;
    if (family == "rbf") {
        spec.family = KernelFamily::Rbf;
    } else if (family == "laplacian" || family == "laplace") {
        spec.family = KernelFamily::Laplacian;
    } else if (family == "rq") {
        spec.family = KernelFamily::RationalQuadratic;
    } else {
        throw std::invalid_argument("kernel must be rbf, laplacian, or rq");
    }
    spec.bandwidth = bandwidth;
    spec.rq_alpha = rq_alpha;
    return spec;
}

struct PyGenerator {
    GeneratorParams params;
};

}  // namespace

PYBIND11_MODULE(_mmdnet, m) {
    m.doc() = "Generative networks trained by minimizing the unbiased MMD statistic";

    py::class_<PyGenerator>(m, "Generator")
        .def("forward",
             [](const PyGenerator& g, py::array_t<double> noise) {
                 return to_numpy(generator_forward(g.params, to_matrix(noise)));
             },
             py::arg("noise"))
        .def("sample",
             [](const PyGenerator& g, std::size_t n, std::uint64_t seed) {
                 Rng rng(seed);
                 return to_numpy(generator_forward(
                     g.params, rng.standard_normal(n, input_dim(g.params))));
             },
             py::arg("n"), py::arg("seed"))
        .def("save", [](const PyGenerator& g,
                        const std::string& path) { save_checkpoint(g.params, path); })
        .def_property_readonly("input_dim",
                               [](const PyGenerator& g) { return input_dim(g.params); })
        .def_property_readonly("output_dim",
                               [](const PyGenerator& g) { return output_dim(g.params); });

    m.def("make_affine",
          [](std::vector<double> mu, std::vector<double> sigma) {
              return PyGenerator{AffineParams{std::move(mu), std::move(sigma)}};
          },
          py::arg("mu"), py::arg("sigma"));
    m.def("make_mlp",
          [](const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
              Rng rng(seed);
              return PyGenerator{mlp_init(rng, layer_sizes)};
          },
          py::arg("layer_sizes"), py::arg("seed"));
    m.def("load_checkpoint",
          [](const std::string& path) { return PyGenerator{load_checkpoint(path)}; },
          py::arg("path"));

    m.def("kernel",
          [](py::array_t<double> x, py::array_t<double> y, const std::string& family,
             double bandwidth, double rq_alpha) {
              const Matrix mx = to_matrix(x);
              const Matrix my = to_matrix(y);
              return kernel_eval(make_spec(family, bandwidth, rq_alpha),
                                 {mx.data().data(), mx.data().size()},
                                 {my.data().data(), my.data().size()});
          },
          py::arg("x"), py::arg("y"), py::arg("family") = "rbf",
          py::arg("bandwidth") = 1.0, py::arg("rq_alpha") = 1.0);

    m.def("gram",
          [](py::array_t<double> a, py::array_t<double> b, const std::string& family,
             double bandwidth, double rq_alpha) {
              return to_numpy(
                  gram(make_spec(family, bandwidth, rq_alpha), to_matrix(a), to_matrix(b)));
          },
          py::arg("a"), py::arg("b"), py::arg("family") = "rbf",
          py::arg("bandwidth") = 1.0, py::arg("rq_alpha") = 1.0);

    m.def("median_heuristic",
          [](py::array_t<double> data, std::uint64_t seed, std::size_t max_pairs) {
              Rng rng(seed);
              return median_heuristic(to_matrix(data), rng, max_pairs);
          },
          py::arg("data"), py::arg("seed") = 0, py::arg("max_pairs") = 100000);

    m.def("mmd_u2",
          [](py::array_t<double> x, py::array_t<double> y, const std::string& family,
             double bandwidth, double rq_alpha) {
              return mmd_u_squared(make_spec(family, bandwidth, rq_alpha), to_matrix(x),
                                   to_matrix(y))
                  .value;
          },
          py::arg("x"), py::arg("y"), py::arg("family") = "rbf",
          py::arg("bandwidth") = 1.0, py::arg("rq_alpha") = 1.0);

    m.def("mmd_cost",
          [](py::array_t<double> y, py::array_t<double> x, const std::string& family,
             double bandwidth, double rq_alpha) {
              return mmd_cost(make_spec(family, bandwidth, rq_alpha), to_matrix(y),
                              to_matrix(x));
          },
          py::arg("y"), py::arg("x"), py::arg("family") = "rbf",
          py::arg("bandwidth") = 1.0, py::arg("rq_alpha") = 1.0);

    m.def("mmd_cost_grad",
          [](py::array_t<double> y, py::array_t<double> x, const std::string& family,
             double bandwidth, double rq_alpha) {
              return to_numpy(mmd_cost_grad(make_spec(family, bandwidth, rq_alpha),
                                            to_matrix(y), to_matrix(x)));
          },
          py::arg("y"), py::arg("x"), py::arg("family") = "rbf",
          py::arg("bandwidth") = 1.0, py::arg("rq_alpha") = 1.0);

    m.def("population_mmd_gaussian",
          [](double mean1, double var1, double mean2, double var2, std::size_t dim,
             double bandwidth) {
              KernelSpec spec;
              spec.bandwidth = bandwidth;
              return population_mmd_gaussian(spec, mean1, var1, mean2, var2, dim);
          },
          py::arg("mean1"), py::arg("var1"), py::arg("mean2"), py::arg("var2"),
          py::arg("dim") = 1, py::arg("bandwidth") = 1.0);

    m.def("train",
          [](py::array_t<double> data, const PyGenerator& init, const std::string& family,
             double bandwidth, double rq_alpha, std::size_t m_generated,
             std::size_t minibatch_size, std::size_t resample_interval,
             std::size_t iterations, double learning_rate, const std::string& optimizer,
             std::uint64_t seed, std::size_t snapshot_every, double probe_fraction) {
              TrainConfig cfg;
              cfg.m_generated = m_generated;
              cfg.minibatch_size = minibatch_size;
              cfg.resample_interval = resample_interval;
              cfg.iterations = iterations;
              cfg.base_lr = learning_rate;
              if (optimizer == "sgd") {
                  cfg.optimizer = Optimizer::PlainSgd;
              } else if (optimizer == "rmsprop") {
                  cfg.optimizer = Optimizer::Rmsprop;
              } else {
                  throw std::invalid_argument("optimizer must be sgd or rmsprop");
              }
              cfg.seed = seed;
              cfg.snapshot_every = snapshot_every;
              cfg.probe_fraction = probe_fraction;
              const auto report = train(to_matrix(data), init.params,
                                        make_spec(family, bandwidth, rq_alpha), cfg);
              py::list iters, costs, probes;
              for (const auto& rec : report.records) {
                  iters.append(rec.iteration);
                  costs.append(rec.minibatch_cost);
                  probes.append(rec.probe_mmd ? py::object(py::float_(*rec.probe_mmd))
                                              : py::object(py::none()));
              }
              py::dict curve;
              curve["iteration"] = iters;
              curve["minibatch_cost"] = costs;
              curve["probe_mmd_u2"] = probes;
              return py::make_tuple(PyGenerator{report.final_params}, curve);
          },
          py::arg("data"), py::arg("init"), py::arg("family") = "rbf",
          py::arg("bandwidth") = 1.0, py::arg("rq_alpha") = 1.0,
          py::arg("m_generated") = 100, py::arg("minibatch_size") = 0,
          py::arg("resample_interval") = 0, py::arg("iterations") = 1000,
          py::arg("learning_rate") = 0.02, py::arg("optimizer") = "rmsprop",
          py::arg("seed") = 0, py::arg("snapshot_every") = 100,
          py::arg("probe_fraction") = 0.1);

    m.def("kde_mean_log_density",
          [](py::array_t<double> generated, py::array_t<double> test, double bandwidth) {
              return kde_mean_log_density(to_matrix(generated), to_matrix(test),
                                          bandwidth);
          },
          py::arg("generated"), py::arg("test"), py::arg("bandwidth"));

    m.def("kde_select_bandwidth",
          [](py::array_t<double> generated, py::array_t<double> validation,
             const std::vector<double>& grid) {
              return kde_select_bandwidth(to_matrix(generated), to_matrix(validation),
                                          grid);
          },
          py::arg("generated"), py::arg("validation"), py::arg("grid"));

    m.def("rate", &rate, py::arg("p"), py::arg("gamma"), py::arg("m"),
          py::arg("c_p") = 1.0);
    m.def("epsilon_bound",
          [](int p1, double gamma1, int p2, double gamma2, double delta, std::size_t m,
             double c_p1, double c_p2) {
              BoundInputs in;
              in.p1 = p1;
              in.gamma1 = gamma1;
              in.p2 = p2;
              in.gamma2 = gamma2;
              in.delta = delta;
              in.m = m;
              in.c_p1 = c_p1;
              in.c_p2 = c_p2;
              return epsilon_bound(in);
          },
          py::arg("p1"), py::arg("gamma1"), py::arg("p2"), py::arg("gamma2"),
          py::arg("delta"), py::arg("m"), py::arg("c_p1") = 1.0, py::arg("c_p2") = 1.0);
    m.def("theorem3_tail", &theorem3_tail, py::arg("eps"), py::arg("m"),
          py::arg("kernel_bound") = 1.0);
    m.def("finite_theta_failure_prob", &finite_theta_failure_prob, py::arg("t"),
          py::arg("eps"), py::arg("m"), py::arg("kernel_bound") = 1.0);
    m.def("finite_theta_epsilon", &finite_theta_epsilon, py::arg("t"), py::arg("delta"),
          py::arg("m"), py::arg("kernel_bound") = 1.0);
}
