#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "metacovert/advertising.hpp"
#include "metacovert/app.hpp"
#include "metacovert/config.hpp"
#include "metacovert/covert_downlink.hpp"
#include "metacovert/errors.hpp"
#include "metacovert/fading.hpp"
#include "metacovert/immersion.hpp"
#include "metacovert/oracle.hpp"
#include "metacovert/uplink.hpp"

namespace py = pybind11;
using namespace metacovert;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Covert edge access and budget-constrained advertising models";
    m.attr("__version__") = METACOVERT_VERSION;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<NoSignChangeError>(m, "NoSignChangeError", PyExc_RuntimeError);

    py::class_<fading::AlphaMuParams>(m, "AlphaMu")
        .def(py::init([](double alpha, double mu, double mean) { return fading::AlphaMuParams{alpha, mu, mean}; }),
             py::arg("alpha") = 2.0, py::arg("mu") = 1.0, py::arg("mean") = 1.0)
        .def_readwrite("alpha", &fading::AlphaMuParams::alpha)
        .def_readwrite("mu", &fading::AlphaMuParams::mu)
        .def_readwrite("mean", &fading::AlphaMuParams::mean)
        .def("pdf", [](const fading::AlphaMuParams& p, double x) { return fading::alpha_mu_pdf(p, x); })
        .def("cdf", [](const fading::AlphaMuParams& p, double x) { return fading::alpha_mu_cdf(p, x); });

    py::class_<fading::FisherFParams>(m, "FisherF")
        .def(py::init([](double mm, double ms, double mean) { return fading::FisherFParams{mm, ms, mean}; }),
             py::arg("m") = 1.0, py::arg("m_s") = 2.0, py::arg("mean") = 1.0)
        .def_readwrite("m", &fading::FisherFParams::m)
        .def_readwrite("m_s", &fading::FisherFParams::m_s)
        .def_readwrite("mean", &fading::FisherFParams::mean)
        .def("pdf", [](const fading::FisherFParams& p, double x) { return fading::fisher_f_pdf(p, x); })
        .def("cdf", [](const fading::FisherFParams& p, double x) { return fading::fisher_f_cdf(p, x); });

    py::class_<downlink::CovertLinkParams>(m, "CovertLink")
        .def(py::init<>())
        .def_readwrite("p_a", &downlink::CovertLinkParams::p_a)
        .def_readwrite("p_j", &downlink::CovertLinkParams::p_j)
        .def_readwrite("sigma2_aw", &downlink::CovertLinkParams::sigma2_aw)
        .def_readwrite("sigma2_ak_per_hz", &downlink::CovertLinkParams::sigma2_ak_per_hz)
        .def_readwrite("h_jw", &downlink::CovertLinkParams::h_jw)
        .def_readwrite("h_aw", &downlink::CovertLinkParams::h_aw)
        .def_readwrite("h_jk", &downlink::CovertLinkParams::h_jk)
        .def_readwrite("h_ak", &downlink::CovertLinkParams::h_ak)
        .def_readwrite("delta", &downlink::CovertLinkParams::delta);

    py::class_<downlink::DetectionOutcome>(m, "DetectionOutcome")
        .def_readonly("false_alarm", &downlink::DetectionOutcome::false_alarm)
        .def_readonly("miss_detection", &downlink::DetectionOutcome::miss_detection)
        .def_readonly("dep", &downlink::DetectionOutcome::dep)
        .def_readonly("epsilon", &downlink::DetectionOutcome::epsilon);

    m.def("dep", [](const downlink::CovertLinkParams& p, double eps) { return downlink::dep(p, eps); },
          py::arg("link"), py::arg("epsilon"));
    m.def("optimal_threshold", py::overload_cast<const downlink::CovertLinkParams&>(&downlink::optimal_threshold));
    m.def(
        "min_jamming_power",
        [](const downlink::CovertLinkParams& p, double lo, double hi) { return downlink::min_jamming_power(p, {lo, hi}); },
        py::arg("link"), py::arg("lo") = 1e-6, py::arg("hi") = 1e6);
    m.def("ergodic_covert_rate", &downlink::ergodic_covert_rate, py::arg("link"), py::arg("bandwidth_hz"));
    m.def("noise_power_dbm", &downlink::noise_power_dbm);

    py::class_<uplink::UplinkParams>(m, "Uplink")
        .def(py::init([](double p_k, double sigma2_ka, const fading::FisherFParams& h) {
                 return uplink::UplinkParams{p_k, sigma2_ka, h};
             }),
             py::arg("p_k") = 1.0, py::arg("sigma2_ka") = 1.0, py::arg("h_ka") = fading::FisherFParams{})
        .def_readwrite("p_k", &uplink::UplinkParams::p_k)
        .def_readwrite("sigma2_ka", &uplink::UplinkParams::sigma2_ka)
        .def_readwrite("h_ka", &uplink::UplinkParams::h_ka);
    m.def("avg_ber", [](const uplink::UplinkParams& p, const std::string& mod) {
        return uplink::avg_ber(p, uplink::parse_modulation(mod));
    });
    m.def(
        "required_power",
        [](const uplink::UplinkParams& p, const std::string& mod, double target) {
            return uplink::required_power(p, uplink::parse_modulation(mod), target);
        },
        py::arg("uplink"), py::arg("modulation"), py::arg("target_ber"));
    m.def("meta_immersion", [](double rate, double ber, double s) { return immersion::meta_immersion({rate, ber, s}); });

    py::class_<advertising::AdvertParams>(m, "AdvertParams")
        .def(py::init<>())
        .def_readwrite("pi", &advertising::AdvertParams::pi)
        .def_readwrite("h_a", &advertising::AdvertParams::h_a)
        .def_readwrite("eta1", &advertising::AdvertParams::eta1)
        .def_readwrite("eta2", &advertising::AdvertParams::eta2)
        .def_readwrite("x0", &advertising::AdvertParams::x0)
        .def_readwrite("t1", &advertising::AdvertParams::t1)
        .def_readwrite("n_budget", &advertising::AdvertParams::n_budget)
        .def_readwrite("p_l", &advertising::AdvertParams::p_l)
        .def_readwrite("b_total", &advertising::AdvertParams::b_total)
        .def_readwrite("m_saturation", &advertising::AdvertParams::m_saturation);
    py::class_<advertising::Equilibrium>(m, "Equilibrium")
        .def_readonly("lambda1_bar", &advertising::Equilibrium::lambda1_bar)
        .def_readonly("x_bar", &advertising::Equilibrium::x_bar)
        .def_readonly("c2", &advertising::Equilibrium::c2);
    m.def("equilibrium", &advertising::equilibrium, py::arg("params"), py::arg("c2") = 0.0);
    m.def("find_c2", &advertising::find_c2);
    m.def("state_at", &advertising::state_at);
    m.def("ad_spend", &advertising::ad_spend);
    m.def("j_star", [](const advertising::Equilibrium& eq, const advertising::AdvertParams& p, double t) {
        return advertising::optimal_profit(eq, p, t).j_star;
    });

    m.def(
        "mc_dep",
        [](const downlink::CovertLinkParams& p, double eps, std::int64_t samples, std::uint64_t seed) {
            const auto e = oracle::mc_dep(p, eps, {samples, seed, 1});
            return py::make_tuple(e.mean, e.std_error);
        },
        py::arg("link"), py::arg("epsilon"), py::arg("samples") = 100000, py::arg("seed") = 1);

    m.def(
        "run",
        [](const std::string& command, const std::filesystem::path& config, const std::filesystem::path& out_dir) {
            app::CommandOptions opts;
            opts.out_dir = out_dir;
            std::string out, err;
            const int code = app::run_command(command, config, opts, out, err);
            return py::make_tuple(code, out, err);
        },
        py::arg("command"), py::arg("config"), py::arg("out_dir"),
        "Runs a CLI command; returns (exit_code, stdout_text, stderr_text).");
}
