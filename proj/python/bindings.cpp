#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sarjam/config.hpp"
#include "sarjam/errors.hpp"

namespace py = pybind11;
using namespace sarjam;

namespace {

py::dict report_dict(const MetricReport& r) {
    py::dict d;
    d["method"] = r.method;
    d["ssim"] = r.ssim;
    d["mi"] = r.mi;
    d["jsr_db"] = r.jsr;
    d["islr_db"] = r.islr;
    d["lpg_db"] = r.lpg;
    return d;
}

py::dict result_dict(const WmAmmfaResult& r) {
    std::vector<double> f;
    std::vector<std::array<double, 4>> terms;
    for (const auto& row : r.trace) {
        f.push_back(row.cost.total);
        terms.push_back(row.cost.terms);
    }
    py::dict d;
    d["s"] = r.s;
    d["h"] = r.h;
    d["code"] = r.code;
    d["cost"] = f;
    d["terms"] = terms;
    d["converged"] = r.converged;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "SAR waveform and azimuth filter co-design against repeater jamming";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<MissingArtifactError>(m, "MissingArtifactError", PyExc_FileNotFoundError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<RadarParams>(m, "RadarParams")
        .def(py::init<>())
        .def_readwrite("carrier_freq", &RadarParams::carrier_freq)
        .def_readwrite("bandwidth", &RadarParams::bandwidth)
        .def_readwrite("pulse_width", &RadarParams::pulse_width)
        .def_readwrite("prt", &RadarParams::prt)
        .def_readwrite("sample_rate", &RadarParams::sample_rate)
        .def_readwrite("speed", &RadarParams::speed)
        .def_readwrite("center_range", &RadarParams::center_range)
        .def_readwrite("altitude", &RadarParams::altitude)
        .def_readwrite("n_pulses", &RadarParams::n_pulses)
        .def_property_readonly("chirp_rate", &RadarParams::chirp_rate)
        .def_property_readonly("wavelength", &RadarParams::wavelength)
        .def_property_readonly("range_bin", &RadarParams::range_bin)
        .def("validate", &RadarParams::validate);

    py::class_<JammerModel>(m, "JammerModel")
        .def_static("uniform", &JammerModel::uniform, py::arg("n_pulses"), py::arg("power_db") = 0.04,
                    py::arg("range_offset") = 0.0, py::arg("delay_fraction") = 2.0 / 3.0)
        .def_readwrite("amplitudes", &JammerModel::amplitudes)
        .def_readwrite("range_offsets", &JammerModel::range_offsets)
        .def_readwrite("code_lag", &JammerModel::code_lag);

    m.def("generate_lfm_pc_pulse", &generate_lfm_pc_pulse, py::arg("params"), py::arg("phase") = 0.0);
    m.def("hyperbolic_trajectory",
          py::overload_cast<const RadarParams&, double>(&hyperbolic_trajectory), py::arg("params"),
          py::arg("azimuth") = 0.0);
    m.def("build_target_sequence", &build_target_sequence);
    m.def("random_phases", &random_phases);
    m.def("build_extension_matrix", &build_extension_matrix);
    m.def("code_differential", &code_differential);
    m.def("phases_from_differential", &phases_from_differential);

    m.def(
        "cost",
        [](const VectorXcd& s, const VectorXcd& h, const VectorXcd& jammed,
           const std::array<double, 4>& alpha, double r_isl_db, int mainlobe_halfwidth) {
            const CostWeights w =
                CostWeights::make(static_cast<int>(s.size()), alpha, r_isl_db, mainlobe_halfwidth);
            const CostTerms c = cost(s, h, w, build_extension_matrix(jammed), build_extension_matrix(s));
            return py::make_tuple(c.total, c.terms);
        },
        py::arg("s"), py::arg("h"), py::arg("jammed"),
        py::arg("alpha") = std::array<double, 4>{0.2, 0.4, 0.3, 0.1}, py::arg("r_isl_db") = -60.0,
        py::arg("mainlobe_halfwidth") = 0);

    m.def(
        "optimize",
        [](const std::string& config_text, bool json, std::optional<std::uint64_t> seed) {
            ExperimentConfig cfg = parse_config_text(config_text, json);
            if (seed) cfg.seed = *seed;
            const WmAmmfaProblem p =
                cfg.mode == OptimizerMode::kCode ? make_code_problem(cfg) : make_sequence_problem(cfg);
            return result_dict(run_wm_ammfa(p, make_optimizer_options(cfg)));
        },
        py::arg("config_text") = "", py::arg("json") = false, py::arg("seed") = py::none(),
        "Run the alternating optimizer on an INI/JSON config given as text.");

    m.def(
        "config_hash",
        [](const std::string& text, bool json) { return config_hash_hex(parse_config_text(text, json)); },
        py::arg("config_text") = "", py::arg("json") = false);

    m.def("islr", &islr);
    m.def("lpg", &lpg);
    m.def("ssim", &ssim);
    m.def("mutual_information", &mutual_information);

    m.def(
        "desk_experiment",
        [](const std::string& scenario, const std::string& method, std::uint64_t seed) {
            const ExperimentSetup s =
                scenario == "distributed" ? desk_distributed_setup(seed) : desk_point_setup(seed);
            const SarImage ref = reference_image(s);
            const MethodResult r = run_method(s, parse_method(method), ref);
            py::dict d = report_dict(r.report);
            d["image"] = r.image.pixels;
            d["reference"] = ref.pixels;
            d["profile_db"] = r.profile_db;
            return d;
        },
        py::arg("scenario") = "point", py::arg("method") = "proposed", py::arg("seed") = 1,
        "Image a desk-scale scenario with one method and return its metrics.");
}
