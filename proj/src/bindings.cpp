#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpckit/cli.hpp"

namespace py = pybind11;
using namespace gpckit;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Predictive-control workbench core: shift-operator polynomial algebra, "
              "CARIMA prediction and control laws, closed-loop analysis, simulation";

    py::class_<LaurentPoly>(m, "LaurentPoly")
        .def(py::init<>())
        .def(py::init<int, std::vector<double>>(), py::arg("lo_exp"), py::arg("coeffs"))
        .def_static("constant", &LaurentPoly::constant)
        .def_static("delta", &LaurentPoly::delta)
        .def_static("shift", &LaurentPoly::shift)
        .def_property_readonly("lo_exp", &LaurentPoly::lo_exp)
        .def_property_readonly("hi_exp", &LaurentPoly::hi_exp)
        .def_property_readonly("coeffs", &LaurentPoly::coeffs)
        .def("is_zero", &LaurentPoly::is_zero)
        .def("coeff", &LaurentPoly::coeff, py::arg("exp"))
        .def("eval", &LaurentPoly::eval, py::arg("z_inv"))
        .def("roots_in_z", &LaurentPoly::roots_in_z)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self * double())
        .def(double() * py::self)
        .def("__neg__", [](const LaurentPoly& p) { return -p; })
        .def("__repr__", [](const LaurentPoly& p) { return "LaurentPoly(" + p.str() + ")"; })
        .def("__str__", &LaurentPoly::str);

    py::class_<WSeries>(m, "WSeries")
        .def_readonly("order", &WSeries::order)
        .def_readonly("coeffs", &WSeries::coeffs);
    m.def("wseries_of", &wseries_of, py::arg("poly"), py::arg("order"));

    py::class_<RationalTF>(m, "RationalTF")
        .def(py::init<LaurentPoly, LaurentPoly>(), py::arg("num"), py::arg("den"))
        .def_readonly("num", &RationalTF::num)
        .def_readonly("den", &RationalTF::den)
        .def("normalized", &RationalTF::normalized)
        .def("lookahead", &RationalTF::lookahead);

    py::class_<FinalValue>(m, "FinalValue")
        .def_readonly("value", &FinalValue::value)
        .def_readonly("unbounded", &FinalValue::unbounded)
        .def("__repr__", [](const FinalValue& v) {
            return v.unbounded ? std::string("FinalValue(unbounded)")
                               : "FinalValue(" + std::to_string(v.value) + ")";
        });

    m.def("tf_filter", [](const RationalTF& g, const std::vector<double>& x) {
        return tf_filter(g, x);
    }, py::arg("tf"), py::arg("x"));
    m.def("tf_filter_fn", &tf_filter_fn, py::arg("tf"), py::arg("x"), py::arg("len"));
    m.def("final_value_limit", &final_value_limit, py::arg("tf"), py::arg("input_power"));

    py::class_<CarimaModel>(m, "CarimaModel")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("a"), py::arg("b"))
        .def_readonly("a", &CarimaModel::a)
        .def_readonly("b", &CarimaModel::b)
        .def_property_readonly("na", &CarimaModel::na)
        .def_property_readonly("nb", &CarimaModel::nb)
        .def_property_readonly("delay", &CarimaModel::delay)
        .def("a_poly", &CarimaModel::a_poly)
        .def("b_poly", &CarimaModel::b_poly);

    py::class_<StateSpace>(m, "StateSpace")
        .def_readonly("A", &StateSpace::A)
        .def_readonly("B", &StateSpace::B)
        .def_readonly("C", &StateSpace::C)
        .def_readonly("T", &StateSpace::T)
        .def_readonly("delay", &StateSpace::delay)
        .def_property_readonly("dim", &StateSpace::dim);
    m.def("realize", &realize, py::arg("model"));
    m.def("markov", &markov, py::arg("model"), py::arg("count"));
    m.def("plant_step", [](const CarimaModel& model, const std::vector<double>& y_hist,
                           const std::vector<double>& u_hist, double chi) {
        return plant_step(model, y_hist, u_hist, chi);
    }, py::arg("model"), py::arg("y_hist"), py::arg("u_hist"), py::arg("chi"));

    py::class_<PredictionSet>(m, "PredictionSet")
        .def_readonly("horizon", &PredictionSet::horizon)
        .def_readonly("delay", &PredictionSet::delay)
        .def_readonly("state_inc", &PredictionSet::state_inc)
        .def_readonly("input_inc", &PredictionSet::input_inc)
        .def_readonly("dist_inc", &PredictionSet::dist_inc)
        .def_readonly("state_cum", &PredictionSet::state_cum)
        .def_readonly("input_cum", &PredictionSet::input_cum)
        .def_readonly("dist_cum", &PredictionSet::dist_cum)
        .def_readonly("ones", &PredictionSet::ones);
    m.def("build_prediction", &build_prediction, py::arg("state_space"), py::arg("horizon"));
    m.def("predict", &predict, py::arg("prediction"), py::arg("y_now"), py::arg("dx"),
          py::arg("du_seq"), py::arg("dchi_seq"));

    py::enum_<Variant>(m, "Variant")
        .value("full", Variant::full)
        .value("reduced", Variant::reduced)
        .value("igmvc", Variant::igmvc)
        .value("compensated_full", Variant::compensated_full)
        .value("compensated_reduced", Variant::compensated_reduced);
    py::enum_<ForecastKind>(m, "ForecastKind")
        .value("none", ForecastKind::none)
        .value("exact", ForecastKind::exact)
        .value("hold", ForecastKind::hold);
    py::enum_<NoiseDist>(m, "NoiseDist")
        .value("normal", NoiseDist::normal)
        .value("uniform", NoiseDist::uniform);

    py::class_<ControllerSpec>(m, "ControllerSpec")
        .def_static("uniform", &ControllerSpec::uniform, py::arg("N"), py::arg("q"),
                    py::arg("lam"), py::arg("variant") = Variant::full,
                    py::arg("forecast") = ForecastKind::none)
        .def_readwrite("horizon", &ControllerSpec::horizon)
        .def_readwrite("q", &ControllerSpec::q)
        .def_readwrite("lam", &ControllerSpec::lambda)
        .def_readwrite("variant", &ControllerSpec::variant)
        .def_readwrite("forecast", &ControllerSpec::forecast);

    py::class_<GainSet>(m, "GainSet")
        .def_readonly("gain", &GainSet::gain)
        .def_readonly("k_ref", &GainSet::k_ref)
        .def_readonly("k_y", &GainSet::k_y)
        .def_readonly("k_u", &GainSet::k_u)
        .def_readonly("k_dist", &GainSet::k_dist)
        .def_readonly("k_level", &GainSet::k_level)
        .def_readonly("kept", &GainSet::kept)
        .def_readonly("ref_offset", &GainSet::ref_offset);
    m.def("build_gains", &build_gains, py::arg("prediction"), py::arg("spec"));

    py::class_<LoopState>(m, "LoopState")
        .def(py::init<int, int>(), py::arg("na"), py::arg("nb"))
        .def_property_readonly("u_prev", &LoopState::u_prev)
        .def_property_readonly("dx", &LoopState::dx);
    py::class_<ControlStep>(m, "ControlStep")
        .def_readonly("u", &ControlStep::u)
        .def_readonly("du", &ControlStep::du);
    m.def("gpc_step", &gpc_step, py::arg("gains"), py::arg("state"), py::arg("y_now"),
          py::arg("ref_window"), py::arg("dchi_forecast") = std::nullopt);
    m.def("igmvc_step", &igmvc_step, py::arg("gains"), py::arg("state"), py::arg("y_now"),
          py::arg("ref_at_kplusd"));
    m.def("objective_value", &objective_value, py::arg("prediction"), py::arg("spec"),
          py::arg("ref_window"), py::arg("y_now"), py::arg("dx"), py::arg("du_seq"));

    py::class_<SignalGen>(m, "SignalGen")
        .def_static("zero", &SignalGen::zero)
        .def_static("step", &SignalGen::step, py::arg("scale") = 1.0)
        .def_static("ramp", &SignalGen::ramp, py::arg("scale") = 1.0)
        .def_static("power_of", &SignalGen::power_of, py::arg("n"), py::arg("scale") = 1.0)
        .def_static("square", &SignalGen::square, py::arg("period"), py::arg("scale") = 1.0)
        .def_static("noise", &SignalGen::noise_src, py::arg("seed"),
                    py::arg("dist") = NoiseDist::normal, py::arg("scale") = 1.0)
        .def_static("custom", &SignalGen::custom, py::arg("samples"), py::arg("scale") = 1.0)
        .def("at", &SignalGen::at, py::arg("k"))
        .def("power_class", &SignalGen::power_class);
    m.def("noise", &noise, py::arg("seed"), py::arg("k"), py::arg("dist") = NoiseDist::normal);

    py::class_<SimRecord>(m, "SimRecord")
        .def_readonly("horizon", &SimRecord::horizon)
        .def_readonly("y_ref", &SimRecord::y_ref)
        .def_readonly("y", &SimRecord::y)
        .def_readonly("u", &SimRecord::u)
        .def_readonly("du", &SimRecord::du)
        .def_readonly("chi", &SimRecord::chi)
        .def_readonly("e", &SimRecord::e)
        .def_readonly("diverged", &SimRecord::diverged)
        .def_readonly("diverged_at", &SimRecord::diverged_at);
    m.def("run", &run, py::arg("model"), py::arg("spec"), py::arg("ref"), py::arg("dist"),
          py::arg("steps"));

    py::enum_<StabilityVerdict>(m, "StabilityVerdict")
        .value("stable", StabilityVerdict::stable)
        .value("marginal", StabilityVerdict::marginal)
        .value("unstable", StabilityVerdict::unstable);
    py::enum_<CharPoly>(m, "CharPoly")
        .value("applied", CharPoly::applied)
        .value("minimum_variance", CharPoly::minimum_variance);

    py::class_<LoopOperators>(m, "LoopOperators")
        .def_readonly("ctrl_den", &LoopOperators::ctrl_den)
        .def_readonly("fb_num", &LoopOperators::fb_num)
        .def_readonly("fb_level", &LoopOperators::fb_level)
        .def_readonly("ff_num", &LoopOperators::ff_num)
        .def_readonly("comp_num", &LoopOperators::comp_num)
        .def_readonly("charpoly", &LoopOperators::charpoly)
        .def_readonly("charpoly_mv", &LoopOperators::charpoly_mv)
        .def_readonly("has_mv_form", &LoopOperators::has_mv_form);
    m.def("loop_operators", &loop_operators, py::arg("model"), py::arg("prediction"),
          py::arg("gains"), py::arg("spec"));

    py::class_<StabilityReport>(m, "StabilityReport")
        .def_readonly("verdict", &StabilityReport::verdict)
        .def_readonly("roots", &StabilityReport::roots)
        .def_readonly("max_modulus", &StabilityReport::max_modulus);
    m.def("stability", &stability, py::arg("ops"), py::arg("which") = CharPoly::applied);
    m.def("reference_error_ss", &reference_error_ss, py::arg("ops"), py::arg("input_power"));
    m.def("disturbance_error_ss", &disturbance_error_ss, py::arg("ops"), py::arg("input_power"));
    m.def("disturbance_tf", &disturbance_tf, py::arg("ops"));
    m.def("error_signal", &error_signal, py::arg("ops"), py::arg("ref"), py::arg("chi"),
          py::arg("len"));

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("model", &Scenario::model)
        .def_readonly("controller", &Scenario::controller)
        .def_readonly("reference", &Scenario::reference)
        .def_readonly("disturbance", &Scenario::disturbance)
        .def_readonly("steps", &Scenario::steps);
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("name") = "<inline>");
    m.def("run_scenario", &cli::run_scenario, py::arg("scenario"));
    m.def("analyze_scenario", &cli::analyze_scenario, py::arg("scenario"));
}
