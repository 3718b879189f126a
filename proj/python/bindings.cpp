#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "neuropend/calibrate.hpp"
#include "neuropend/prc.hpp"
#include "neuropend/run.hpp"

namespace py = pybind11;
using namespace neuropend;

namespace {

ConfigMap with_overrides(const std::string& scenario, const std::map<std::string, std::string>& overrides) {
    ConfigMap c = resolve_scenario_config(scenario);
    for (const auto& [k, v] : overrides) c.set(k, v);
    return c;
}

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict summary_dict(const Summary& s) {
    py::dict d;
    for (const auto& [k, v] : summary_rows(s)) {
        if (v == "NA") {
            d[py::str(k)] = py::none();
            continue;
        }
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end != v.c_str() && *end == '\0') {
            d[py::str(k)] = x;
        } else {
            d[py::str(k)] = v;
        }
    }
    return d;
}

py::dict trace_dict(const TraceSamples& tr) {
    py::dict d;
    d["t"] = as_array(tr.t);
    d["q"] = as_array(tr.q);
    d["q_dot"] = as_array(tr.q_dot);
    d["I"] = as_array(tr.torque);
    for (std::size_t i = 0; i < kNeuronCount; ++i) {
        const std::string n(neuron_name(static_cast<NeuronId>(i)));
        d[py::str("v_" + n)] = as_array(tr.v[i]);
        d[py::str("vs_" + n)] = as_array(tr.v_s[i]);
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_neuropend, m) {
    m.doc() = "Neuromorphic half-centre oscillator pendulum controller";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SimulationFault>(m, "SimulationFault", PyExc_ArithmeticError);
    py::register_exception<OutputError>(m, "OutputError", PyExc_OSError);

    m.def("synapse_current", &synapse_current, py::arg("g_syn"), py::arg("v_s_pre"));
    m.def(
        "neuron_rhs",
        [](double v, double v_s, double v_us, double i_syn, double i_app, const std::map<std::string, double>& params) {
            NeuronParams p;
            for (const auto& [k, x] : params) {
                if (k == "tau_f") p.tau_f = x;
                else if (k == "tau_s") p.tau_s = x;
                else if (k == "tau_us") p.tau_us = x;
                else if (k == "g_f_minus") p.g_f_minus = x;
                else if (k == "g_s_plus") p.g_s_plus = x;
                else if (k == "g_s_minus") p.g_s_minus = x;
                else if (k == "g_us_plus") p.g_us_plus = x;
                else throw ConfigError(k, "unknown neuron parameter");
            }
            const auto d = neuron_rhs({v, v_s, v_us}, p, i_syn, i_app);
            return py::make_tuple(d.dv, d.dv_s, d.dv_us);
        },
        py::arg("v"), py::arg("v_s"), py::arg("v_us"), py::arg("i_syn") = 0.0, py::arg("i_app") = 0.0,
        py::arg("params") = std::map<std::string, double>{},
        "Derivatives (dv, dv_s, dv_us) of one neuron.");
    m.def(
        "pendulum_rhs",
        [](double q, double q_dot, double alpha, double torque) {
            const auto d = pendulum_rhs({q, q_dot}, alpha, torque);
            return py::make_tuple(d.dq, d.dq_dot);
        },
        py::arg("q"), py::arg("q_dot"), py::arg("alpha"), py::arg("torque"));
    m.def(
        "motor_torque",
        [](double v_a1, double v_a2, double i_mag, double v_th, const std::string& configuration) {
            PlantParams p;
            p.i_mag = i_mag;
            p.v_th = v_th;
            p.motor_signs = motor_signs_for(parse_configuration(configuration));
            return motor_torque(v_a1, v_a2, p);
        },
        py::arg("v_a1"), py::arg("v_a2"), py::arg("i_mag"), py::arg("v_th") = 0.0,
        py::arg("configuration") = "anti_phase");
    m.def("mechanical_energy", [](double q, double q_dot) { return mechanical_energy({q, q_dot}); });
    m.def("wrap_angle", &wrap_angle);

    m.def("builtin_scenarios", &builtin_scenario_names);
    m.def(
        "scenario_config",
        [](const std::string& scenario, const std::map<std::string, std::string>& overrides) {
            const auto c = with_overrides(scenario, overrides);
            (void)scenario_from_config(c);
            ConfigMap full = default_config();
            full.merge(c);
            return full.values();
        },
        py::arg("scenario"), py::arg("overrides") = std::map<std::string, std::string>{},
        "Fully resolved key/value configuration of a scenario.");
    m.def(
        "simulate",
        [](const std::string& scenario, const std::map<std::string, std::string>& overrides,
           std::optional<std::filesystem::path> out) {
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run_scenario(scenario_from_config(with_overrides(scenario, overrides)));
                if (out) write_outputs(r, *out);
            }
            py::list events;
            for (const auto& e : r.events.events()) {
                events.append(py::make_tuple(e.time, std::string(event_kind_name(e.kind)), e.payload));
            }
            py::dict d;
            d["summary"] = summary_dict(r.summary);
            d["trace"] = trace_dict(r.trace);
            d["events"] = events;
            return d;
        },
        py::arg("scenario"), py::arg("overrides") = std::map<std::string, std::string>{},
        py::arg("out") = std::nullopt,
        "Runs a built-in scenario or config file; optionally writes the CSV outputs.");
    m.def(
        "sweep",
        [](const std::string& scenario, const std::map<std::string, std::string>& grid, int jobs) {
            ConfigMap g;
            for (const auto& [k, v] : grid) g.set(k, v);
            std::vector<SweepPoint> points;
            {
                py::gil_scoped_release release;
                points = run_sweep(resolve_scenario_config(scenario), parse_grid(g), jobs);
            }
            py::list out;
            for (const auto& p : points) {
                py::dict d;
                d["overrides"] = p.overrides.values();
                d["summary"] = p.summary ? py::object(summary_dict(*p.summary)) : py::object(py::none());
                d["error"] = p.error;
                out.append(d);
            }
            return out;
        },
        py::arg("scenario"), py::arg("grid"), py::arg("jobs") = 1);
    m.def(
        "compute_prc",
        [](double P, double w, int phases, int recovery, const std::string& scenario) {
            PrcOptions o;
            o.P = P;
            o.w = w;
            o.n_phases = phases;
            o.recovery_periods = recovery;
            const auto s = scenario_from_config(resolve_scenario_config(scenario));
            std::vector<PrcSample> samples;
            {
                py::gil_scoped_release release;
                samples = compute_prc(isolated_hco_setup(s.setup.network.params, s.setup.network.g_hco), o);
            }
            py::list out;
            for (const auto& x : samples) out.append(py::make_tuple(x.phase, x.shift, x.valid));
            return out;
        },
        py::arg("P") = 0.3, py::arg("w") = 0.05, py::arg("phases") = 16, py::arg("recovery") = 5,
        py::arg("scenario") = "prc", "(phase, shift, valid) samples of the isolated HCO phase response.");
    m.def(
        "free_hco_period",
        [](const std::string& scenario) {
            const auto s = scenario_from_config(resolve_scenario_config(scenario));
            return free_hco_period(s.setup.network.params, s.setup.network.g_hco);
        },
        py::arg("scenario") = "hco-free");
    m.def("read_summary", [](const std::filesystem::path& p) { return summary_dict(read_summary_csv(p)); });
}
