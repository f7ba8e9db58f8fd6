#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ddesindy/collocation.hpp"
#include "ddesindy/experiment.hpp"
#include "ddesindy/models.hpp"
#include "ddesindy/optimize.hpp"
#include "ddesindy/pipelines.hpp"

namespace py = pybind11;
using namespace ddesindy;

namespace {

struct Dataset {
    ModelSpec model;
    GeneratedData data;
};

Dataset generate(const std::string& model_name, int m, double noise, std::uint64_t seed,
                 const std::string& distribution, const std::string& derivative_mode,
                 double rel_tol, double abs_tol, double horizon) {
    const ModelSpec& model = find_model(model_name);
    SamplingConfig config;
    config.m = m;
    config.noise_sigma = noise;
    config.seed = seed;
    config.distribution = distribution == "random" ? SampleDistribution::random_uniform
                                                   : SampleDistribution::uniform;
    config.derivative_mode = derivative_mode == "finite_difference"
                                 ? DerivativeMode::finite_difference
                                 : DerivativeMode::exact_from_model;
    config.rel_tol = rel_tol;
    config.abs_tol = abs_tol;
    return {model, generate_samples(model, config, horizon)};
}

LibrarySpec make_library(int degree, bool include_constant, const std::string& policy,
                         double rational_alpha, const std::string& rational_selector) {
    LibrarySpec spec;
    spec.degree = degree;
    spec.include_constant = include_constant;
    spec.policy = policy == "restricted" ? CrossBlockPolicy::restricted : CrossBlockPolicy::full;
    if (rational_alpha > 0) {
        RationalTerm r;
        r.alpha = rational_alpha;
        r.selector = rational_selector == "all_delayed" ? RationalSelector::all_delayed
                                                        : RationalSelector::last_block;
        spec.rational = r;
    }
    return spec;
}

StlsqConfig make_stlsq(double threshold, double ridge, const std::string& solver) {
    StlsqConfig config;
    config.threshold = threshold;
    config.ridge = ridge;
    config.solver = solver == "basic" ? SolverMode::basic : SolverMode::minnorm;
    return config;
}

py::dict fit_to_dict(const FitResult& fit) {
    py::dict d;
    d["objective"] = fit.objective;
    d["residual"] = fit.residual_term;
    d["simulation"] = fit.sim_term;
    d["blowup"] = fit.blowup;
    py::list terms;
    for (std::size_t j = 0; j < fit.coefficients.active.size(); ++j)
        for (Index k : fit.coefficients.active[j])
            terms.append(py::make_tuple(j, fit.coefficients.descriptors[static_cast<std::size_t>(k)],
                                        fit.coefficients.xi(k, static_cast<Index>(j))));
    d["terms"] = terms;
    return d;
}

py::dict esindy_obj(const Dataset& ds, const std::vector<double>& taus, int degree,
                    double threshold, double ridge, const std::string& solver,
                    const std::string& policy, double rational_alpha,
                    const std::string& rational_selector, double w1, double w2,
                    const std::string& block_source) {
    LibrarySpec spec = make_library(degree, true, policy, rational_alpha, rational_selector);
    BlockProvider provider;
    if (block_source == "dense") {
        provider.mode = BlockSource::dense;
        provider.dense = &ds.data.dense;
        provider.phi = ds.model.phi;
    }
    FitResult fit = esindy_objective(ds.data.samples, taus, spec,
                                     make_stlsq(threshold, ridge, solver), {w1, w2},
                                     HistoryProvider::from_function(ds.model.phi), provider);
    return fit_to_dict(fit);
}

py::dict psindy_obj(const Dataset& ds, double taubar, int M, int degree, double threshold,
                    double ridge, const std::string& solver, const std::string& policy,
                    double rational_alpha, const std::string& rational_selector, double w1,
                    double w2, const std::string& block_source) {
    LibrarySpec spec = make_library(degree, true, policy, rational_alpha, rational_selector);
    BlockProvider provider;
    if (block_source == "dense") {
        provider.mode = BlockSource::dense;
        provider.dense = &ds.data.dense;
        provider.phi = ds.model.phi;
    }
    FitResult fit = psindy_objective(ds.data.samples, taubar, M, spec,
                                     make_stlsq(threshold, ridge, solver), {w1, w2},
                                     HistoryProvider::from_function(ds.model.phi), provider);
    return fit_to_dict(fit);
}

SearchSpace make_space(const std::vector<double>& lower, const std::vector<double>& upper) {
    if (lower.size() != upper.size())
        throw ConfigError("lower and upper bounds must have equal length");
    SearchSpace space;
    for (std::size_t i = 0; i < lower.size(); ++i) space.bounds.emplace_back(lower[i], upper[i]);
    return space;
}

py::dict result_to_dict(const OptimizationResult& r) {
    py::dict d;
    d["best"] = std::vector<double>(r.best.data(), r.best.data() + r.best.size());
    d["value"] = r.best_objective;
    d["evaluations"] = r.evaluations;
    d["reason"] = r.reason;
    d["iterations"] = r.iterations;
    py::list trace;
    for (const auto& tp : r.trace) trace.append(py::make_tuple(tp.evaluations, tp.best_objective));
    d["trace"] = trace;
    return d;
}

py::dict report_to_dict(const ExperimentReport& report) {
    py::dict d;
    py::dict rec;
    for (const auto& [label, value] : report.recovered) rec[py::str(label)] = value;
    d["recovered"] = rec;
    d["objective"] = report.fit.objective;
    d["residual"] = report.fit.residual_term;
    d["simulation"] = report.fit.sim_term;
    d["blowup"] = report.fit.blowup;
    d["terms"] = fit_to_dict(report.fit)["terms"];
    d["calls"] = report.calls;
    d["wall_seconds"] = report.wall_seconds;
    py::dict val;
    val["train_sup"] = report.validation.train_sup;
    val["train_frobenius"] = report.validation.train_frobenius;
    val["validation_sup"] = report.validation.validation_sup;
    val["validation_frobenius"] = report.validation.validation_frobenius;
    val["blowup"] = report.validation.blowup;
    d["validation"] = val;
    d["output_dir"] = report.config.output_dir;
    d["output_files"] = report.output_files;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Identification of delay differential equations from trajectory samples";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError");

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("times", [](const Dataset& d) { return d.data.samples.times; })
        .def_property_readonly("X", [](const Dataset& d) { return d.data.samples.X; })
        .def_property_readonly("dX", [](const Dataset& d) { return d.data.samples.dX; })
        .def_property_readonly("boundary", [](const Dataset& d) { return d.data.samples.boundary; })
        .def_property_readonly("model", [](const Dataset& d) { return d.model.name; })
        .def("dense_eval", [](const Dataset& d, double t) {
            const double t0 = d.data.samples.times(0);
            return t < t0 ? d.model.phi(t - t0) : d.data.dense(t);
        });

    m.def("list_models", [] {
        std::vector<std::string> names;
        for (const auto& model : builtin_models()) names.push_back(model.name);
        return names;
    });
    m.def("benchmark_keys", &benchmark_keys);
    m.def("benchmark_config", [](const std::string& key) { return echo_config(benchmark_config(key)); });

    m.def("generate", &generate, py::arg("model"), py::arg("m") = 100, py::arg("noise") = 0.0,
          py::arg("seed") = 0, py::arg("distribution") = "uniform",
          py::arg("derivative_mode") = "exact", py::arg("rel_tol") = 1e-6,
          py::arg("abs_tol") = 1e-8, py::arg("horizon") = 30.0);

    m.def("esindy_objective", &esindy_obj, py::arg("dataset"), py::arg("taus"),
          py::arg("degree") = 2, py::arg("threshold") = 0.05, py::arg("ridge") = 0.0,
          py::arg("solver") = "minnorm", py::arg("policy") = "full",
          py::arg("rational_alpha") = 0.0, py::arg("rational_selector") = "all_delayed",
          py::arg("w1") = 1.0, py::arg("w2") = 1.0, py::arg("block_source") = "dense");
    m.def("psindy_objective", &psindy_obj, py::arg("dataset"), py::arg("taubar"), py::arg("M"),
          py::arg("degree") = 2, py::arg("threshold") = 0.05, py::arg("ridge") = 0.0,
          py::arg("solver") = "minnorm", py::arg("policy") = "full",
          py::arg("rational_alpha") = 0.0, py::arg("rational_selector") = "last_block",
          py::arg("w1") = 1.0, py::arg("w2") = 1.0, py::arg("block_source") = "dense");

    m.def("cheb_nodes", [](int M, double taubar) { return make_scheme(M, taubar, 1).nodes; },
          py::arg("M"), py::arg("taubar"));
    m.def("diff_matrix", [](int M, double taubar) { return make_scheme(M, taubar, 1).d_sub; },
          py::arg("M"), py::arg("taubar"));

    m.def("stlsq",
          [](const Mat& theta, const Mat& dX, double threshold, double ridge,
             const std::string& solver) {
              return stlsq(theta, dX, make_stlsq(threshold, ridge, solver)).xi;
          },
          py::arg("theta"), py::arg("dX"), py::arg("threshold") = 0.05, py::arg("ridge") = 0.0,
          py::arg("solver") = "minnorm");

    m.def("brute_force",
          [](const std::function<double(const Vec&)>& objective, const std::vector<double>& lower,
             const std::vector<double>& upper, const std::vector<int>& counts) {
              OptimizationResult r = brute_force(objective, make_space(lower, upper), counts);
              py::dict d = result_to_dict(r);
              d["grid_points"] = r.grid_points;
              d["grid_values"] = r.grid_values;
              return d;
          },
          py::arg("objective"), py::arg("lower"), py::arg("upper"), py::arg("counts"));

    m.def("particle_swarm",
          [](const std::function<double(const Vec&)>& objective, const std::vector<double>& lower,
             const std::vector<double>& upper, std::uint64_t seed, int swarm_size,
             double stall_tol, int stall_window, int max_iterations) {
              PsoConfig config;
              config.seed = seed;
              config.swarm_size = swarm_size;
              config.stall_tol = stall_tol;
              config.stall_window = stall_window;
              config.max_iterations = max_iterations;
              return result_to_dict(particle_swarm(objective, make_space(lower, upper), config));
          },
          py::arg("objective"), py::arg("lower"), py::arg("upper"), py::arg("seed") = 0,
          py::arg("swarm_size") = 0, py::arg("stall_tol") = 1e-3, py::arg("stall_window") = 20,
          py::arg("max_iterations") = 100);

    m.def("run_experiment_json",
          [](const std::string& json_text) { return report_to_dict(run_experiment(parse_config(json_text))); },
          py::arg("config_json"));
    m.def("run_experiment_file",
          [](const std::string& path) { return report_to_dict(run_experiment(load_config(path))); },
          py::arg("path"));

    m.def("sindy_calls", &sindy_calls);
    m.def("reset_sindy_calls", &reset_sindy_calls);
}
