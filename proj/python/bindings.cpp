#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tritherm/config.hpp"
#include "tritherm/functions.hpp"
#include "tritherm/oracles.hpp"
#include "tritherm/sweep.hpp"
#include "tritherm/validation.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace tritherm;

namespace {

py::dict currents_dict(const HeatCurrents& q) { return py::dict("Q_L"_a = q.Q_L, "Q_M"_a = q.Q_M, "Q_R"_a = q.Q_R); }

Configuration make_config(double omega_L, double g, double T_L, double T_M, double T_R, double gamma,
                          const std::string& spectrum, std::optional<double> omega_M, double omega_R,
                          std::optional<std::array<double, 3>> gammas) {
    Baths baths = make_baths(T_L, T_M, T_R, gamma, parse_spectrum(spectrum));
    if (gammas)
        for (Terminal t : kTerminals) baths[index(t)].gamma = (*gammas)[index(t)];
    DeviceParams d = omega_M ? DeviceParams{omega_L, *omega_M, omega_R, g} : resonant_device(omega_L, g, omega_R);
    return validate_params(d, baths);
}

}  // namespace

PYBIND11_MODULE(_tritherm, m) {
    m.doc() = "Steady-state heat currents of a three-qubit quantum thermal device";
    m.attr("__version__") = version();

    py::register_exception<Error>(m, "TrithermError", PyExc_RuntimeError);

    py::enum_<Terminal>(m, "Terminal").value("L", Terminal::L).value("M", Terminal::M).value("R", Terminal::R);

    py::class_<Configuration>(m, "Configuration")
        .def_property_readonly("omega_L", [](const Configuration& c) { return c.device.omega_L; })
        .def_property_readonly("omega_M", [](const Configuration& c) { return c.device.omega_M; })
        .def_property_readonly("omega_R", [](const Configuration& c) { return c.device.omega_R; })
        .def_property_readonly("g", [](const Configuration& c) { return c.device.g; })
        .def_property_readonly("temperatures",
                               [](const Configuration& c) {
                                   return std::array<double, 3>{c.baths[0].temperature, c.baths[1].temperature,
                                                                c.baths[2].temperature};
                               })
        .def("with_temperature", &with_temperature, "terminal"_a, "T"_a);

    m.def("configuration", &make_config, "omega_L"_a, "g"_a, "T_L"_a, "T_M"_a, "T_R"_a, "gamma"_a = 1e-4,
          "spectrum"_a = "flat", "omega_M"_a = py::none(), "omega_R"_a = 1.0, "gammas"_a = py::none(),
          "Validated device + baths. omega_M defaults to omega_R - omega_L.");

    m.def("load_config", [](const std::string& path, const std::vector<std::string>& overrides) {
        RunConfig rc = read_config(path);
        for (const auto& o : overrides) apply_override(rc, o);
        return validated(rc);
    }, "path"_a, "overrides"_a = std::vector<std::string>{});

    m.def("steady", [](const Configuration& c) {
        const OperatingPoint op = evaluate(c);
        py::dict d = currents_dict(op.currents);
        d["populations"] = op.state.populations;
        d["secular_ratio"] = op.secular.ratio;
        d["secular_valid"] = op.secular.valid;
        return d;
    }, "config"_a);

    m.def("eigensystem", [](const Configuration& c) {
        const EigenSystem e = analytic_eigensystem(c.device);
        return py::dict("lambda"_a = e.lambda, "theta"_a = e.theta, "U"_a = Eigen::MatrixXd(e.U));
    }, "config"_a);

    m.def("liouvillian_oracle", [](const Configuration& c) {
        const OracleResult r = liouvillian_oracle(c);
        py::dict d = currents_dict(r.currents);
        d["populations"] = r.populations;
        d["max_coherence"] = r.max_coherence;
        return d;
    }, "config"_a);

    m.def("amplification", [](const Configuration& c, double step) {
        const AmplificationResult a = amplification(c, step);
        return py::dict("alpha_L"_a = a.alpha_L, "alpha_R"_a = a.alpha_R, "dQ_M_dT"_a = a.dQ_M_dT,
                        "richardson"_a = a.richardson, "flagged"_a = a.flagged);
    }, "config"_a, "step"_a = kDefaultAmplifierStep);

    m.def("valve_crossings", [](const Configuration& c, double lo, double hi, std::size_t n) {
        py::list out;
        for (const ValveCrossing& x : valve_crossings(c, lo, hi, n).crossings)
            out.append(py::make_tuple(std::string(1, to_char(x.terminal)), x.T_M));
        return out;
    }, "config"_a, "lo"_a, "hi"_a, "n"_a = kDefaultValveGrid, "List of (terminal, T_M) zero crossings.");

    m.def("rectification", [](const Configuration& c, double delta_T, double T_A, bool two_terminal) {
        const auto r = rectification(c, delta_T, T_A,
                                     two_terminal ? RectifierMode::TwoTerminal : RectifierMode::ThreeTerminal);
        return py::dict("R"_a = r.R, "Q_fore"_a = r.Q_fore, "Q_back"_a = r.Q_back);
    }, "config"_a, "delta_T"_a, "T_A"_a, "two_terminal"_a = false);

    m.def("stabilizer", [](const Configuration& c, Terminal t, double lo, double hi, std::size_t n) {
        const StabilizerReport r = stabilizer_sensitivity(c, t, lo, hi, n);
        py::dict d;
        for (Terminal k : kTerminals) d[py::str(std::string("Q_") + to_char(k))] = r.currents[index(k)].ratio;
        return d;
    }, "config"_a, "terminal"_a, "lo"_a, "hi"_a, "n"_a = kDefaultStabilizerGrid, "Flatness ratio per current.");

    m.def("switch_threshold", [](const Configuration& c, double eps, double lo, double hi, std::size_t n) {
        const SwitchResult r = switch_threshold(c, eps, lo, hi, n);
        return r.found ? py::object(py::float_(r.threshold)) : py::object(py::none());
    }, "config"_a, "epsilon"_a, "lo"_a, "hi"_a, "n"_a, "Threshold T_M, or None when no grid point qualifies.");

    m.def("sweep", [](const std::string& path, const std::string& out, const std::vector<std::string>& overrides,
                      unsigned threads) {
        RunConfig rc = read_config(path);
        for (const auto& o : overrides) apply_override(rc, o);
        const SweepResult r = run_sweep(rc, threads);
        write_csv(to_table(r), out);
        return r.rows.size();
    }, "config_path"_a, "out"_a, "overrides"_a = std::vector<std::string>{}, "threads"_a = 1,
       "Runs the sweep in a run file and writes the CSV; returns the row count.");

    m.def("validate", [](const Configuration& c, std::uint64_t seed, std::size_t draws) {
        py::list out;
        for (const CheckResult& r : run_validation(c, seed, draws).checks)
            out.append(py::make_tuple(r.name, r.passed || r.advisory, r.value, r.tolerance));
        return out;
    }, "config"_a, "seed"_a = 0, "draws"_a = 10);
}
