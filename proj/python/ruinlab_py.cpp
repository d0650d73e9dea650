#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/gaussian.hpp"
#include "ruinlab/mc.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/piterbarg.hpp"

namespace py = pybind11;
using namespace ruinlab;

namespace {

py::dict estimate_dict(const Estimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["std_error"] = e.std_error;
    d["ci95"] = py::make_tuple(e.ci_lo, e.ci_hi);
    d["n"] = e.n;
    d["meta"] = e.meta;
    return d;
}

McConfig mc_config(const ModelParams& p, std::size_t paths, std::uint64_t seed, double base_step, double fine_step,
                   std::optional<double> fine_window, std::size_t variance_steps, unsigned threads) {
    McConfig cfg;
    cfg.params = p;
    cfg.grid = GridSpec{base_step, fine_step, fine_window, variance_steps};
    cfg.paths = paths;
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_ruinlab, m) {
    m.doc() = "Ruin probabilities of the Brownian risk model with constant force of interest";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("normal_cdf", &normal_cdf, py::arg("x"));
    m.def("normal_tail", &normal_tail, py::arg("x"));

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double u, double c, double sigma, double delta, double S, double T_scaled) {
                 ModelParams p{u, c, sigma, delta, S, T_scaled};
                 p.validate();
                 return p;
             }),
             py::arg("u"), py::arg("c") = 1.0, py::arg("sigma") = 1.0, py::arg("delta") = 0.0, py::arg("S") = 1.0,
             py::arg("T_scaled") = 0.0)
        .def_readwrite("u", &ModelParams::u)
        .def_readwrite("c", &ModelParams::c)
        .def_readwrite("sigma", &ModelParams::sigma)
        .def_readwrite("delta", &ModelParams::delta)
        .def_readwrite("S", &ModelParams::S)
        .def_readwrite("T_scaled", &ModelParams::T_scaled)
        .def("T_u", &ModelParams::T_u)
        .def("__repr__", [](const ModelParams& p) {
            std::ostringstream os;
            os << "ModelParams(u=" << p.u << ", c=" << p.c << ", sigma=" << p.sigma << ", delta=" << p.delta
               << ", S=" << p.S << ", T_scaled=" << p.T_scaled << ")";
            return os.str();
        });

    m.def("psi_inf", &psi_inf, py::arg("params"));
    m.def("psi_S_zero_exact", &psi_S_zero_exact, py::arg("params"));
    m.def("asymptotic_params", [](const ModelParams& p) {
        const auto ab = asymptotic_params(p);
        return py::make_tuple(ab.a, ab.b);
    }, py::arg("params"), "returns (a, b)");
    m.def("parisian_asymptotic", &parisian_asymptotic, py::arg("params"), py::arg("piterbarg_value") = 2.0);
    m.def("ruin_time_tail_asymptotic", &ruin_time_tail_asymptotic, py::arg("params"), py::arg("x"));

    m.def(
        "estimate_ruin_prob",
        [](const ModelParams& p, const std::string& mode, std::size_t paths, std::uint64_t seed, double base_step,
           double fine_step, std::optional<double> fine_window, std::size_t variance_steps, unsigned threads) {
            if (mode != "classical" && mode != "parisian") throw ConfigError("mode must be classical or parisian");
            const auto cfg = mc_config(p, paths, seed, base_step, fine_step, fine_window, variance_steps, threads);
            Estimate e;
            {
                py::gil_scoped_release release;
                e = estimate_ruin_prob(cfg, mode == "classical" ? RuinMode::classical : RuinMode::parisian);
            }
            return estimate_dict(e);
        },
        py::arg("params"), py::arg("mode") = "parisian", py::arg("paths") = 10000, py::arg("seed") = 1,
        py::arg("base_step") = 1e-3, py::arg("fine_step") = 1e-3, py::arg("fine_window") = py::none(),
        py::arg("variance_steps") = 0, py::arg("threads") = 1);

    m.def(
        "estimate_piterbarg",
        [](double lambda, double T, double step, std::size_t paths, std::uint64_t seed, unsigned threads) {
            PiterbargConfig cfg;
            cfg.lambda = lambda;
            cfg.T = T;
            cfg.step = step;
            cfg.paths = paths;
            cfg.seed = seed;
            cfg.threads = threads;
            Estimate e;
            {
                py::gil_scoped_release release;
                e = estimate_piterbarg(cfg);
            }
            return estimate_dict(e);
        },
        py::arg("lam"), py::arg("T") = 0.0, py::arg("step") = 5e-3, py::arg("paths") = 10000, py::arg("seed") = 1,
        py::arg("threads") = 1);

    m.def(
        "ruin_time_tail",
        [](const ModelParams& p, std::vector<double> xs, std::size_t paths, std::uint64_t seed, double base_step,
           double fine_step, unsigned threads) {
            const auto cfg = mc_config(p, paths, seed, base_step, fine_step, std::nullopt, 0, threads);
            RuinTimeTail t;
            {
                py::gil_scoped_release release;
                t = estimate_ruin_time_tail(cfg, xs);
            }
            py::list rows;
            for (const auto& r : t.rows) {
                py::dict d;
                d["x"] = r.x;
                d["empirical_tail"] = r.empirical_tail;
                d["theory_tail"] = r.theory_tail;
                rows.append(d);
            }
            py::dict d;
            d["paths"] = t.paths;
            d["ruined"] = t.ruined;
            d["rows"] = rows;
            d["sup_distance"] = t.sup_distance;
            d["diagnostic"] = t.diagnostic;
            return d;
        },
        py::arg("params"), py::arg("xs") = std::vector<double>{0.0, 0.5, 1.0, 2.0, 4.0}, py::arg("paths") = 10000,
        py::arg("seed") = 1, py::arg("base_step") = 1e-3, py::arg("fine_step") = 1e-3, py::arg("threads") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "run the command-line tool in-process; returns (exit_code, stdout, stderr)");

    m.attr("__version__") = cli::kToolVersion;
}
