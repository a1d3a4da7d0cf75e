#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aoi/avg_aoi.hpp"
#include "aoi/error.hpp"
#include "aoi/experiments.hpp"
#include "aoi/peak_aoi.hpp"
#include "aoi/simulator.hpp"

namespace py = pybind11;
using namespace aoi;

namespace {

py::dict interval(const Interval& i) {
    py::dict d;
    d["mean"] = i.mean;
    d["halfwidth"] = i.halfwidth;
    return d;
}

std::string run_command(const std::string& command, const std::string& config_text,
                        std::optional<std::uint64_t> seed, std::optional<std::uint64_t> departures,
                        unsigned threads) {
    const ExperimentConfig cfg = parse_config(config_text);
    const RunOptions opts{seed, departures, threads};
    if (command == "solve-peak") return cmd_solve_peak(cfg, opts).to_csv();
    if (command == "variance-sweep") return cmd_variance_sweep(cfg, opts).to_csv();
    if (command == "avg-sweep") return cmd_avg_sweep(cfg, opts).to_csv();
    if (command == "eval") return cmd_eval(cfg, opts).to_csv();
    if (command == "simulate") return cmd_simulate(cfg, opts).to_csv();
    if (command == "validate") return cmd_validate(cfg, opts).table.to_csv();
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace

PYBIND11_MODULE(_aoi_core, m) {
    m.doc() = "Age of information for an intermittently powered sensor";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<DiscreteDist>(m, "DiscreteDist")
        .def(py::init([](const std::vector<std::pair<double, double>>& atoms) {
                 std::vector<Atom> a;
                 for (const auto& [v, p] : atoms) a.push_back({v, p});
                 return DiscreteDist(std::move(a));
             }),
             py::arg("atoms"))
        .def_static("point", &DiscreteDist::point)
        .def_static("theta_family", &DiscreteDist::theta_family)
        .def_property_readonly("atoms", [](const DiscreteDist& d) {
            std::vector<std::pair<double, double>> out;
            for (const Atom& a : d.atoms()) out.emplace_back(a.value, a.prob);
            return out;
        });

    py::class_<TransmissionModel>(m, "TransmissionModel")
        .def(py::init<double, double>(), py::arg("mean"), py::arg("variance"))
        .def_property_readonly("mean", &TransmissionModel::mean)
        .def_property_readonly("variance", &TransmissionModel::variance);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<double, DiscreteDist, TransmissionModel>(), py::arg("lam"),
             py::arg("sensing"), py::arg("transmission"))
        .def_property_readonly("lam", &SystemParams::lambda)
        .def_property_readonly("sensing", &SystemParams::sensing)
        .def_property_readonly("transmission", &SystemParams::transmission)
        .def_property_readonly("mean_age", &SystemParams::mean_age)
        .def("with_lambda", &SystemParams::with_lambda)
        .def("with_sensing", &SystemParams::with_sensing)
        .def("with_transmission", &SystemParams::with_transmission);

    py::class_<NoThresholdZeroWait>(m, "NoThresholdZeroWait").def(py::init<>());
    py::class_<AgeThreshold>(m, "AgeThreshold")
        .def(py::init<double>(), py::arg("w_th"))
        .def_readwrite("w_th", &AgeThreshold::w_th);
    py::class_<Hybrid>(m, "Hybrid")
        .def(py::init<double, double>(), py::arg("n_w"), py::arg("w_th"))
        .def_readwrite("n_w", &Hybrid::n_w)
        .def_readwrite("w_th", &Hybrid::w_th);
    py::class_<Pod>(m, "Pod")
        .def(py::init<double, double>(), py::arg("n_w"), py::arg("w_pod"))
        .def_readwrite("n_w", &Pod::n_w)
        .def_readwrite("w_pod", &Pod::w_pod);

    m.def("describe", &describe, py::arg("policy"));

    py::class_<PeakSolution>(m, "PeakSolution")
        .def_readonly("w_th", &PeakSolution::w_th)
        .def_readonly("peak_aoi", &PeakSolution::peak_aoi)
        .def_readonly("expected_attempts", &PeakSolution::expected_attempts)
        .def_readonly("accepted_age_mean", &PeakSolution::accepted_age_mean);

    m.def("solve_threshold", &solve_threshold, py::arg("params"), py::arg("tol") = py::none());
    m.def("peak_aoi_threshold_policy", &peak_aoi_threshold_policy, py::arg("params"),
          py::arg("w_th"));
    m.def("threshold_cost",
          [](const SystemParams& p, double x) { return threshold_cost(build_age_density(p), x); },
          py::arg("params"), py::arg("x"));
    m.def("g_root_function",
          [](const SystemParams& p, double x) { return g_root_function(build_age_density(p), x); },
          py::arg("params"), py::arg("x"));

    m.def("peak_aoi",
          [](const SystemParams& p, const StoppingPolicy& pol) {
              return peak_aoi(p, policy_moments(p, pol));
          },
          py::arg("params"), py::arg("policy"));
    m.def("average_aoi",
          [](const SystemParams& p, const StoppingPolicy& pol) {
              return average_aoi(p, policy_moments(p, pol));
          },
          py::arg("params"), py::arg("policy"));
    m.def("k_criterion", &k_criterion, py::arg("params"));
    m.def("x_star", &x_star, py::arg("params"));
    m.def("h_minimizer", &h_minimizer, py::arg("params"));

    m.def("optimize_policy",
          [](const SystemParams& p, const std::string& family,
             std::optional<std::vector<double>> waits) {
              PolicyFamily f;
              if (family == "hybrid") f = PolicyFamily::Hybrid;
              else if (family == "pod") f = PolicyFamily::Pod;
              else throw DomainError("family must be 'hybrid' or 'pod'");
              SearchSpec spec;
              if (waits) spec.waits = *waits;
              const OptimizedPolicy r = optimize_policy(p, f, spec);
              return py::make_tuple(r.policy, r.value);
          },
          py::arg("params"), py::arg("family"), py::arg("waits") = py::none());

    m.def("simulate",
          [](const SystemParams& p, const StoppingPolicy& pol, std::uint64_t departures,
             std::uint64_t seed, std::uint32_t batches, unsigned threads) {
              SimConfig c{p, pol};
              c.num_departures = departures;
              c.seed = seed;
              c.num_batches = batches;
              c.threads = threads;
              SimEstimate e;
              {
                  py::gil_scoped_release release;
                  e = simulate(c);
              }
              py::dict d;
              d["avg_aoi"] = interval(e.avg_aoi);
              d["peak_aoi"] = interval(e.peak_aoi);
              d["mean_attempts"] = interval(e.mean_attempts);
              d["mean_y"] = interval(e.mean_y);
              d["mean_s"] = interval(e.mean_s);
              d["cycles"] = e.cycles;
              return d;
          },
          py::arg("params"), py::arg("policy"), py::arg("departures") = 100'000,
          py::arg("seed") = 1, py::arg("batches") = 32, py::arg("threads") = 1);

    m.def("run_command", &run_command, py::arg("command"), py::arg("config_text") = "{}",
          py::arg("seed") = py::none(), py::arg("departures") = py::none(),
          py::arg("threads") = 1,
          "Run a CLI subcommand on a JSON config string and return its CSV output.");
}
