#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "petcor/config.hpp"
#include "petcor/diagnostics.hpp"
#include "petcor/engine.hpp"
#include "petcor/errors.hpp"
#include "petcor/exosystem.hpp"
#include "petcor/predictor.hpp"
#include "petcor/topology.hpp"
#include "petcor/trace_io.hpp"

namespace py = pybind11;
using namespace petcor;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array_2d(const std::vector<double>& v, py::ssize_t rows,
                                py::ssize_t cols) {
    py::array_t<double> out({rows, cols});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Event-triggered cooperative output regulation simulator";

    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
    py::register_exception<SimulationFault>(m, "SimulationFault", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("expm", &expm, py::arg("a"), py::arg("t") = 1.0,
          "Matrix exponential e^{A t} (scaling and squaring).");
    m.def("spectral_norm", &spectral_norm, py::arg("a"));
    m.def(
        "leader_state",
        [](const Matrix& s, const Vector& v0, double t) {
            const Exosystem exo = Exosystem::make(s, v0);
            return leader_state(exo, t);
        },
        py::arg("s"), py::arg("v0"), py::arg("t"),
        "Leader state and output (v(t), y0(t)) of v' = S v.");
    m.def("lyapunov_q", &lyapunov_q, py::arg("h"), py::arg("exo_dim") = 1,
          "Solve Q A1 + A1' Q = 2 I with A1 = H kron I.");
    m.def(
        "decay_fit",
        [](const std::vector<double>& t, const std::vector<double>& series) {
            const DecayFit fit = decay_fit(t, series);
            return py::make_tuple(fit.rate, fit.offset);
        },
        py::arg("t"), py::arg("series"),
        "Least-squares (rate, offset) of log(series + 1e-12).");

    py::class_<SamplingBound>(m, "SamplingBound")
        .def_readonly("m", &SamplingBound::m)
        .def_readonly("m1", &SamplingBound::m1)
        .def_readonly("m2", &SamplingBound::m2)
        .def_readonly("m3", &SamplingBound::m3)
        .def("__repr__", [](const SamplingBound& b) {
            return "SamplingBound(m=" + std::to_string(b.m) + ")";
        });

    py::class_<LoadedConfig>(m, "Config")
        .def_property_readonly("name", [](const LoadedConfig& c) { return c.name; })
        .def_property_readonly("description",
                               [](const LoadedConfig& c) { return c.description; })
        .def_property_readonly("followers",
                               [](const LoadedConfig& c) { return c.scenario.followers(); })
        .def_property_readonly("t_end", [](const LoadedConfig& c) { return c.scenario.t_end; })
        .def_property_readonly("h", [](const LoadedConfig& c) { return c.scenario.h; })
        .def_property_readonly("warnings",
                               [](const LoadedConfig& c) { return c.scenario.warnings; })
        .def_property_readonly("has_sensor_petm", [](const LoadedConfig& c) {
            return c.scenario.filters.has_value();
        });

    m.def("load_config", &load_config, py::arg("path"),
          "Load a scenario file (or preset name) and validate it.");
    m.def("parse_config", &parse_config, py::arg("json_text"),
          py::arg("origin") = std::string("<memory>"));
    m.def("load_preset", &load_preset, py::arg("name"));
    m.def("preset_names", &preset_names);
    m.def("preset_text", &preset_text, py::arg("name"));

    m.def(
        "sampling_bound",
        [](const LoadedConfig& cfg) {
            const SamplingBound b =
                max_sampling_bound(cfg.scenario.graph, cfg.scenario.exo.dim());
            py::dict out;
            out["m"] = b.m;
            out["m1"] = b.m1;
            out["m2"] = b.m2;
            out["m3"] = b.m3;
            out["kappa"] = cfg.scenario.observer.kappa();
            out["max_period"] = cfg.scenario.graph.max_period();
            out["kappa_t"] = cfg.scenario.observer.kappa() * cfg.scenario.graph.max_period();
            return out;
        },
        py::arg("config"), "Sampling bound M = min(M1, M2, M3) and the kappa*T product.");

    py::class_<SimTrace>(m, "Trace")
        .def_property_readonly("n_agents", [](const SimTrace& tr) { return tr.n_agents; })
        .def_property_readonly("exo_dim", [](const SimTrace& tr) { return tr.exo_dim; })
        .def_property_readonly("t", [](const SimTrace& tr) { return to_array(tr.t); })
        .def_property_readonly("y0", [](const SimTrace& tr) { return to_array(tr.y0); })
        .def_property_readonly("v_leader",
                               [](const SimTrace& tr) {
                                   return to_array_2d(tr.v_leader,
                                                      static_cast<py::ssize_t>(tr.rows()),
                                                      tr.exo_dim);
                               })
        .def("x",
             [](const SimTrace& tr, int agent) {
                 return to_array_2d(tr.x.at(agent), static_cast<py::ssize_t>(tr.rows()),
                                    tr.orders.at(agent));
             },
             py::arg("agent"))
        .def("x_hat",
             [](const SimTrace& tr, int agent) {
                 return to_array_2d(tr.x_hat.at(agent), static_cast<py::ssize_t>(tr.rows()),
                                    tr.orders.at(agent));
             },
             py::arg("agent"))
        .def("u", [](const SimTrace& tr, int agent) { return to_array(tr.u.at(agent)); },
             py::arg("agent"))
        .def("e", [](const SimTrace& tr, int agent) { return to_array(tr.e.at(agent)); },
             py::arg("agent"))
        .def("phi", [](const SimTrace& tr, int agent) { return to_array(tr.phi.at(agent)); },
             py::arg("agent"))
        .def("v_hat",
             [](const SimTrace& tr, int agent) {
                 return to_array_2d(tr.v_hat.at(agent), static_cast<py::ssize_t>(tr.rows()),
                                    tr.exo_dim);
             },
             py::arg("agent"))
        .def_property_readonly("net_events",
                               [](const SimTrace& tr) {
                                   py::list out;
                                   for (const NetEvent& ev : tr.net_events) {
                                       out.append(py::make_tuple(ev.t, ev.sender, ev.receiver,
                                                                 std::string(1, ev.kind),
                                                                 ev.deviation, ev.threshold));
                                   }
                                   return out;
                               })
        .def_property_readonly("sensor_events",
                               [](const SimTrace& tr) {
                                   py::list out;
                                   for (const SensorEvent& ev : tr.sensor_events) {
                                       out.append(py::make_tuple(ev.t, ev.agent, ev.phi,
                                                                 ev.deviation, ev.threshold));
                                   }
                                   return out;
                               })
        .def_property_readonly("network_ratio",
                               [](const SimTrace& tr) {
                                   return trigger_stats(tr).network_ratio();
                               })
        .def_property_readonly("sensor_ratio",
                               [](const SimTrace& tr) {
                                   return trigger_stats(tr).sensor_ratio();
                               })
        .def("__len__", [](const SimTrace& tr) { return tr.rows(); });

    m.def(
        "run",
        [](const LoadedConfig& cfg, std::optional<double> t_end, bool diagnostics) {
            Scenario sc = cfg.scenario;
            if (t_end) sc.t_end = *t_end;
            if (diagnostics) sc.diagnostics.enabled = true;
            sc.validate();
            return run(std::move(sc));
        },
        py::arg("config"), py::arg("t_end") = py::none(), py::arg("diagnostics") = false,
        "Simulate a validated scenario; returns the trace.");

    m.def(
        "emit_outputs",
        [](const SimTrace& trace, const std::string& dir, bool plots) {
            OutputOptions opts;
            opts.plots = plots;
            return emit_outputs(trace, dir, opts);
        },
        py::arg("trace"), py::arg("dir"), py::arg("plots") = false,
        "Write trace.csv / events_net.csv / events_sensor.csv (and SVG plots).");

#ifdef PETCOR_VERSION
    m.attr("__version__") = PETCOR_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
