#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lvharvest/classify.hpp"
#include "lvharvest/config.hpp"
#include "lvharvest/errors.hpp"
#include "lvharvest/harvest.hpp"
#include "lvharvest/mc.hpp"
#include "lvharvest/model.hpp"
#include "lvharvest/periodic_fn.hpp"
#include "lvharvest/sde.hpp"
#include "lvharvest/serialize.hpp"

namespace py = pybind11;
using namespace lvharvest;

namespace {

py::array_t<double> as_array(const std::vector<Vec2>& v) {
    py::array_t<double> a({static_cast<py::ssize_t>(v.size()), py::ssize_t{2}});
    auto m = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i) {
        m(i, 0) = v[i][0];
        m(i, 1) = v[i][1];
    }
    return a;
}

}  // namespace

PYBIND11_MODULE(_lvharvest, m) {
    m.doc() = "Stochastic seasonal Lotka-Volterra competition with optimal harvesting";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<AssumptionViolation>(m, "AssumptionViolation", base.ptr());
    py::register_exception<RegimeError>(m, "RegimeError", base.ptr());
    py::register_exception<InvalidConfig>(m, "InvalidConfig", base.ptr());
    py::register_exception<EmptyWindow>(m, "EmptyWindow", base.ptr());
    py::register_exception<DegenerateInput>(m, "DegenerateInput", base.ptr());
    py::register_exception<EmptyFeasible>(m, "EmptyFeasible", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<NonFinite>(m, "NonFinite", base.ptr());

    py::enum_<HarmonicKind>(m, "HarmonicKind")
        .value("Sine", HarmonicKind::Sine)
        .value("Cosine", HarmonicKind::Cosine);

    py::class_<Harmonic>(m, "Harmonic")
        .def(py::init([](double amp, int k, double phase, HarmonicKind kind) {
                 return Harmonic{amp, k, phase, kind};
             }),
             py::arg("amplitude"), py::arg("k") = 1, py::arg("phase") = 0.0,
             py::arg("kind") = HarmonicKind::Sine)
        .def_readwrite("amplitude", &Harmonic::amplitude)
        .def_readwrite("k", &Harmonic::k)
        .def_readwrite("phase", &Harmonic::phase)
        .def_readwrite("kind", &Harmonic::kind);

    py::class_<PeriodicFn>(m, "PeriodicFn")
        .def_static("constant", &PeriodicFn::constant, py::arg("c"))
        .def_static("harmonic", &PeriodicFn::harmonic, py::arg("c"), py::arg("terms"))
        .def_static(
            "tabulated",
            [](const std::vector<std::pair<double, double>>& pts) {
                std::vector<Sample> s;
                for (const auto& [t, v] : pts) s.push_back({t, v});
                return PeriodicFn::tabulated(std::move(s));
            },
            py::arg("samples"))
        .def("__call__", &PeriodicFn::operator(), py::arg("t"))
        .def("scaled", &PeriodicFn::scaled, py::arg("s"))
        .def("mean", [](const PeriodicFn& f) { return mean_over_period(f); })
        .def("sup", [](const PeriodicFn& f) { return sup_over_period(f); })
        .def("square", [](const PeriodicFn& f) { return pointwise_square(f); });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](std::array<PeriodicFn, 2> r, std::array<PeriodicFn, 2> alpha, Matrix2 c) {
                 ModelParams p{std::move(r), std::move(alpha), c};
                 validate(p);
                 return p;
             }),
             py::arg("r"), py::arg("alpha"), py::arg("c"))
        .def_readwrite("r", &ModelParams::r)
        .def_readwrite("alpha", &ModelParams::alpha)
        .def_readwrite("c", &ModelParams::c);

    py::class_<HarvestEffort>(m, "HarvestEffort")
        .def(py::init<double, double>(), py::arg("h1") = 0.0, py::arg("h2") = 0.0)
        .def_property_readonly("values", &HarvestEffort::values);

    py::class_<DerivedQuantities>(m, "DerivedQuantities")
        .def_readonly("b_int", &DerivedQuantities::b_int)
        .def_readonly("delta", &DerivedQuantities::delta)
        .def_readonly("delta1", &DerivedQuantities::delta1)
        .def_readonly("delta2", &DerivedQuantities::delta2)
        .def_readonly("phi", &DerivedQuantities::phi)
        .def_readonly("L", &DerivedQuantities::L);

    m.def("derive", py::overload_cast<const ModelParams&, const HarvestEffort&>(&derive),
          py::arg("params"), py::arg("H"));
    m.def("L_vector", py::overload_cast<const ModelParams&>(&L_vector), py::arg("params"));

    py::enum_<Regime>(m, "Regime")
        .value("BothExtinct", Regime::BothExtinct)
        .value("X1PersistsX2Extinct", Regime::X1PersistsX2Extinct)
        .value("X2PersistsX1Extinct", Regime::X2PersistsX1Extinct)
        .value("BothPersist", Regime::BothPersist)
        .value("Indeterminate", Regime::Indeterminate);

    py::class_<RegimeReport>(m, "RegimeReport")
        .def_readonly("regime", &RegimeReport::regime)
        .def_readonly("predicted_averages", &RegimeReport::predicted_averages)
        .def_readonly("delta", &RegimeReport::delta)
        .def("to_json", [](const RegimeReport& r, const HarvestEffort& H) { return to_json(r, H); },
             py::arg("H"));

    m.def("classify", py::overload_cast<const ModelParams&, const HarvestEffort&, double>(&classify),
          py::arg("params"), py::arg("H"), py::arg("tol") = kDefaultClassifyTol);

    py::class_<OptimalPolicy>(m, "OptimalPolicy")
        .def_readonly("H_star", &OptimalPolicy::H_star)
        .def_readonly("Y_star", &OptimalPolicy::Y_star)
        .def_readonly("valid", &OptimalPolicy::valid)
        .def_readonly("at_optimum", &OptimalPolicy::at_optimum)
        .def("to_json", [](const OptimalPolicy& p) { return to_json(p); });

    m.def("optimal_policy", &optimal_policy, py::arg("params"));
    m.def("yield_theoretical", &yield_theoretical, py::arg("params"), py::arg("H"));
    m.def(
        "grid_search_oracle",
        [](const ModelParams& p, double h_max, double step) {
            const GridOptimum g = grid_search_oracle(p, h_max, step);
            return py::make_tuple(g.H_best, g.Y_best);
        },
        py::arg("params"), py::arg("h_max"), py::arg("step"));
    m.def(
        "noise_sensitivity",
        [](const ModelParams& p, std::size_t j, const std::vector<double>& scales) {
            py::list rows;
            for (const auto& r : noise_sensitivity(p, j, scales))
                rows.append(py::dict(py::arg("scale") = r.scale, py::arg("H_star") = r.H_star,
                                     py::arg("Y_star") = r.Y_star, py::arg("valid") = r.valid));
            return rows;
        },
        py::arg("params"), py::arg("species"), py::arg("scales"));

    py::enum_<Scheme>(m, "Scheme").value("DirectEM", Scheme::DirectEM).value("LogEM", Scheme::LogEM);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("t_end", &SimConfig::t_end)
        .def_readwrite("x0", &SimConfig::x0)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("scheme", &SimConfig::scheme)
        .def_readwrite("record_stride", &SimConfig::record_stride)
        .def_readwrite("floor", &SimConfig::floor);

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("times", [](const Trajectory& t) { return py::array_t<double>(
                                                                    t.times.size(), t.times.data()); })
        .def_property_readonly("states", [](const Trajectory& t) { return as_array(t.states); })
        .def("time_average", &time_average, py::arg("burn_in_fraction") = 0.5)
        .def("log_growth_rate", &log_growth_rate);

    m.def("simulate", &simulate, py::arg("params"), py::arg("H"), py::arg("cfg"));

    py::class_<EnsembleConfig>(m, "EnsembleConfig")
        .def(py::init<>())
        .def_readwrite("n_paths", &EnsembleConfig::n_paths)
        .def_readwrite("sim", &EnsembleConfig::sim)
        .def_readwrite("master_seed", &EnsembleConfig::master_seed)
        .def_readwrite("burn_in", &EnsembleConfig::burn_in)
        .def_readwrite("threads", &EnsembleConfig::threads);

    py::class_<Estimate>(m, "Estimate").def_readonly("est", &Estimate::est).def_readonly("se", &Estimate::se);

    py::class_<EnsembleStats>(m, "EnsembleStats")
        .def_property_readonly("time_avg_mean",
                               [](const EnsembleStats& s) {
                                   return Vec2{s.time_avg[0].mean, s.time_avg[1].mean};
                               })
        .def_readonly("empirical_yield", &EnsembleStats::empirical_yield)
        .def_readonly("n_paths_ok", &EnsembleStats::n_paths_ok)
        .def("to_json", [](const EnsembleStats& s) { return to_json(s); });

    m.def("run_ensemble", &run_ensemble, py::arg("params"), py::arg("H"), py::arg("cfg"),
          py::call_guard<py::gil_scoped_release>());
    m.def("empirical_yield", &empirical_yield, py::arg("params"), py::arg("H"), py::arg("cfg"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("model", &RunConfig::model)
        .def_readonly("harvest", &RunConfig::harvest)
        .def_readonly("sim", &RunConfig::sim)
        .def_readonly("ensemble", &RunConfig::ensemble)
        .def("to_json", [](const RunConfig& c) { return to_json(c); });

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
}
