#include "pmme/conditions.hpp"
#include "pmme/config.hpp"
#include "pmme/estimator.hpp"
#include "pmme/expansion.hpp"
#include "pmme/montecarlo.hpp"
#include "pmme/report_io.hpp"
#include "pmme/simulate.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace pmme;

namespace {

InverseMap inverse_for(const std::string& model, const BuiltinParams& params) {
    const auto mw = builtin_model(model, params);
    return InverseMap(moment_map(mw.model, mw.weight));
}

ExpansionCoefficients coefficients_for(const std::string& model, double theta0, const BuiltinParams& params, int k) {
    return expansion_coefficients(inverse_for(model, params), theta0, k);
}

} // namespace

PYBIND11_MODULE(_pmme, m) {
    m.doc() = "Method-of-moments estimation for inhomogeneous Poisson processes";

    py::register_exception<Error>(m, "PmmeError", PyExc_RuntimeError);

    m.def("builtins", [] {
        return std::vector<std::string>{"amplitude", "exp_decay", "gaussian", "periodic_sine"};
    });
    m.def("builtin_defaults", [](const std::string& model) { return builtin_defaults(parse_builtin(model)); },
          py::arg("model"));

    m.def(
        "coefficients_json",
        [](const std::string& model, double theta0, const BuiltinParams& params, int k) {
            return coefficients_json(coefficients_for(model, theta0, params, k));
        },
        py::arg("model"), py::arg("theta0"), py::arg("params") = BuiltinParams{}, py::arg("k") = 3);

    m.def(
        "estimate_json",
        [](const std::string& model, double mbar, const BuiltinParams& params) {
            const auto inv = inverse_for(model, params);
            const int sign = inv.map().orientation();
            auto r = mme_estimate(inv, sign * mbar);
            r.mbar = mbar;
            return estimate_json(r);
        },
        py::arg("model"), py::arg("mbar"), py::arg("params") = BuiltinParams{});

    m.def(
        "moment",
        [](const std::string& model, double theta, const BuiltinParams& params) {
            return inverse_for(model, params).map().raw_m(theta);
        },
        py::arg("model"), py::arg("theta"), py::arg("params") = BuiltinParams{});

    m.def(
        "edgeworth_cdf",
        [](const std::string& model, double theta0, double x, int n, int order, const BuiltinParams& params) {
            return edgeworth_cdf(coefficients_for(model, theta0, params, 3), x, n, order);
        },
        py::arg("model"), py::arg("theta0"), py::arg("x"), py::arg("n"), py::arg("order") = 1,
        py::arg("params") = BuiltinParams{});

    m.def("hermite", &hermite, py::arg("m"), py::arg("x"));
    m.def("normal_cdf", &normal_cdf, py::arg("x"));

    m.def(
        "sample_path",
        [](const std::string& model, double theta, std::uint64_t seed, std::uint32_t replication, std::uint32_t path,
           const std::string& method, const BuiltinParams& params) {
            const auto mw = builtin_model(model, params);
            return sample_path(mw.model, theta, {seed, replication, path}, parse_sampling_method(method)).times;
        },
        py::arg("model"), py::arg("theta"), py::arg("seed") = 1, py::arg("replication") = 0, py::arg("path") = 0,
        py::arg("method") = "thinning", py::arg("params") = BuiltinParams{});

    m.def(
        "check_conditions_json",
        [](const std::string& model, const BuiltinParams& params, int max_m) {
            const auto mw = builtin_model(model, params);
            return conditions_json(check_conditions(*mw.model, mw.weight, max_m));
        },
        py::arg("model"), py::arg("params") = BuiltinParams{}, py::arg("max_m") = 8);

    m.def("example4_config_json", [] { return dump_config(example4_config()); });
    m.def("normalize_config_json", [](const std::string& text) { return dump_config(parse_config(text)); },
          py::arg("config_json"));

    m.def(
        "run_experiment_json",
        [](const std::string& config_json, int workers) {
            const auto config = parse_config(config_json);
            MonteCarloReport report;
            {
                py::gil_scoped_release release;
                report = run_experiment(config, workers);
            }
            return report_json(report);
        },
        py::arg("config_json"), py::arg("workers") = -1);
}
