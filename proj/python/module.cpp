#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tritrack/analysis.hpp"
#include "tritrack/flux_model.hpp"
#include "tritrack/riemann.hpp"
#include "tritrack/step_function.hpp"
#include "tritrack/wft.hpp"

namespace py = pybind11;
using namespace tritrack;

PYBIND11_MODULE(_core, m) {
    m.doc() = "wave-front tracking for triangular hyperbolic systems";

    py::class_<TvResult>(m, "TvResult")
        .def_readonly("tv", &TvResult::tv)
        .def_readonly("seminorm", &TvResult::seminorm)
        .def("__repr__", [](const TvResult& r) {
            return "TvResult(tv=" + std::to_string(r.tv) +
                   ", seminorm=" + std::to_string(r.seminorm) + ")";
        });

    py::class_<StepFunction>(m, "StepFunction")
        .def(py::init<double>(), py::arg("constant_value"))
        .def(py::init<std::vector<double>, std::vector<double>>(),
             py::arg("breakpoints"), py::arg("values"))
        .def("__call__", &StepFunction::operator(), py::arg("x"))
        .def_property_readonly("breakpoints", &StepFunction::breakpoints)
        .def_property_readonly("values", &StepFunction::values)
        .def("inf_norm", &StepFunction::inf_norm)
        .def("mass_relative", &StepFunction::mass_relative, py::arg("ref"))
        .def("__eq__", [](const StepFunction& a, const StepFunction& b) {
            return a == b;
        });

    m.def("tvs", &tvs, py::arg("f"), py::arg("s"),
          "Fractional total variation sup sum |du|^(1/s) and its s-th power");
    m.def("tvs_bruteforce", &tvs_bruteforce, py::arg("f"), py::arg("s"));
    m.def("sample_to_grid", &sample_to_grid, py::arg("f"), py::arg("nu"));
    m.def("sample_to_grid_tvd", &sample_to_grid_tvd, py::arg("f"),
          py::arg("nu"));

    py::class_<FluxModel>(m, "FluxModel")
        .def_readonly("name", &FluxModel::name)
        .def_readonly("bound", &FluxModel::bound)
        .def("f", [](const FluxModel& mdl, double u) { return mdl.f(u); })
        .def("a", [](const FluxModel& mdl, double u) { return mdl.a(u); })
        .def("potential_A", &FluxModel::potential_A, py::arg("u"))
        .def("to_Z", &FluxModel::to_Z, py::arg("u"), py::arg("v"))
        .def("from_Z", &FluxModel::from_Z, py::arg("u"), py::arg("Z"))
        .def_static("burgers_linear", &FluxModel::burgers_linear,
                    py::arg("M") = 1.0 / 3.0)
        .def_static("cubic_shifted", &FluxModel::cubic_shifted,
                    py::arg("M") = 1.0);

    m.def("check_ush", &check_ush, py::arg("model"));
    m.def("shock_speed",
          py::overload_cast<const FluxModel&, double, double>(&shock_speed),
          py::arg("model"), py::arg("um"), py::arg("up"));
    m.def("rh_factor", &rh_factor, py::arg("model"), py::arg("um"),
          py::arg("up"),
          "Amplification of Z across the 1-shock (um, up)");

    py::enum_<WaveKind>(m, "WaveKind")
        .value("Shock1", WaveKind::Shock1)
        .value("Contact1", WaveKind::Contact1)
        .value("Contact2", WaveKind::Contact2);

    py::class_<ElementaryWave>(m, "ElementaryWave")
        .def_readonly("kind", &ElementaryWave::kind)
        .def_readonly("speed", &ElementaryWave::speed)
        .def_readonly("u_l", &ElementaryWave::u_l)
        .def_readonly("u_r", &ElementaryWave::u_r)
        .def_readonly("Z_l", &ElementaryWave::Z_l)
        .def_readonly("Z_r", &ElementaryWave::Z_r);

    m.def(
        "system_riemann",
        [](const FluxModel& mdl, int nu, double uL, double vL, double uR,
           double vR) {
            const GridFlux g = build_grid_flux(mdl, nu);
            return system_riemann(mdl, g, uL, mdl.to_Z(uL, vL), uR,
                                  mdl.to_Z(uR, vR))
                .waves;
        },
        py::arg("model"), py::arg("nu"), py::arg("ul"), py::arg("vl"),
        py::arg("ur"), py::arg("vr"),
        "Solve one Riemann problem on the nu-grid; v states are converted "
        "to Z internally");

    py::class_<TraceCrossing>(m, "TraceCrossing")
        .def_readonly("kind", &TraceCrossing::kind)
        .def_readonly("t", &TraceCrossing::t)
        .def_readonly("x", &TraceCrossing::x)
        .def_readonly("ratio", &TraceCrossing::ratio)
        .def_readonly("Z_after", &TraceCrossing::Z_after);

    py::class_<CharTrace>(m, "CharTrace")
        .def_readonly("t0", &CharTrace::t0)
        .def_readonly("x0", &CharTrace::x0)
        .def_readonly("crossings", &CharTrace::crossings)
        .def_readonly("terminal_t", &CharTrace::terminal_t)
        .def_readonly("terminal_x", &CharTrace::terminal_x)
        .def_readonly("terminal_Z", &CharTrace::terminal_Z)
        .def("shock_crossings", &CharTrace::shock_crossings)
        .def("contact_crossings", &CharTrace::contact_crossings)
        .def("polyline", &CharTrace::polyline);

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("t", &Snapshot::t)
        .def_readonly("u", &Snapshot::u)
        .def_readonly("v", &Snapshot::v)
        .def_readonly("Z", &Snapshot::Z);

    py::class_<SimStats>(m, "SimStats")
        .def_readonly("interactions", &SimStats::interactions)
        .def_readonly("fronts_created", &SimStats::fronts_created)
        .def_readonly("alive", &SimStats::alive)
        .def_readonly("clock", &SimStats::clock)
        .def_readonly("max_abs_Z", &SimStats::max_abs_Z);

    py::class_<Simulation>(m, "Simulation")
        .def(py::init([](const FluxModel& mdl, int nu, const StepFunction& u0,
                         const StepFunction& v0, bool retain_log,
                         std::uint64_t max_interactions) {
                 SimOptions o;
                 o.retain_log = retain_log;
                 o.max_interactions = max_interactions;
                 return new Simulation(mdl, nu, u0, v0, o);
             }),
             py::arg("model"), py::arg("nu"), py::arg("u0"), py::arg("v0"),
             py::arg("retain_log") = true,
             py::arg("max_interactions") = 10'000'000ULL)
        .def("run_until", &Simulation::run_until, py::arg("t"))
        .def("step", &Simulation::step,
             py::arg("t_limit") = std::numeric_limits<double>::infinity())
        .def("clock", &Simulation::clock)
        .def("snapshot", &Simulation::snapshot, py::arg("t"))
        .def("stats", &Simulation::stats)
        .def("start_trace", &Simulation::start_trace, py::arg("x0"),
             py::arg("Z0") = 1.0)
        .def("trace_result", &Simulation::trace_result)
        .def("replay_trace", &Simulation::replay_trace, py::arg("x0"),
             py::arg("t1"), py::arg("Z0") = 1.0);

    py::class_<BlowupData>(m, "BlowupData")
        .def_readonly("N", &BlowupData::N)
        .def_readonly("x", &BlowupData::x)
        .def_readonly("B", &BlowupData::B)
        .def_readonly("b", &BlowupData::b)
        .def_readonly("T", &BlowupData::T)
        .def_readonly("u0", &BlowupData::u0)
        .def_readonly("v0", &BlowupData::v0)
        .def_readonly("min_gap", &BlowupData::min_gap);

    m.def("build_blowup_data", &build_blowup_data, py::arg("N"));
    m.def(
        "blowup_ratio_product",
        [](int N) {
            const RatioProduct p = blowup_ratio_product(N);
            return py::make_tuple(p.Z_left, p.log_Z);
        },
        py::arg("N"), "Returns (Z_left, log_Z)");
    m.def("bvs_partial_sums", &bvs_partial_sums, py::arg("N"), py::arg("p"));

    py::class_<CrosscheckReport>(m, "CrosscheckReport")
        .def_readonly("N", &CrosscheckReport::N)
        .def_readonly("nu", &CrosscheckReport::nu)
        .def_readonly("x0", &CrosscheckReport::x0)
        .def_readonly("crossings", &CrosscheckReport::crossings)
        .def_readonly("shock_crossings", &CrosscheckReport::shock_crossings)
        .def_readonly("expected_fronts", &CrosscheckReport::expected_fronts)
        .def_readonly("trace_Z", &CrosscheckReport::trace_Z)
        .def_readonly("oracle_Z", &CrosscheckReport::oracle_Z)
        .def_readonly("analytic_Z", &CrosscheckReport::analytic_Z)
        .def_readonly("rel_trace_oracle", &CrosscheckReport::rel_trace_oracle)
        .def_readonly("rel_oracle_analytic",
                      &CrosscheckReport::rel_oracle_analytic);

    m.def("blowup_wft_crosscheck", &blowup_wft_crosscheck, py::arg("N"),
          py::arg("nu"), py::arg("max_interactions") = 200'000'000ULL,
          py::arg("trace_from") = 1.0);
}
