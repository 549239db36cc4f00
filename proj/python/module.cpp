// Python bindings for the key-rate pipelines: channel model, security
// functions, decoy estimates, finite-key analysis and the optimizer.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mdiqkd/bessel.hpp"
#include "mdiqkd/optimizer.hpp"
#include "mdiqkd/pipeline.hpp"
#include "mdiqkd/scan.hpp"

namespace py = pybind11;
using namespace mdiqkd;

namespace {

py::dict pair_estimate_dict(const PairEstimate& e) {
    py::dict d;
    d["s11_lower"] = e.s11_lower;
    d["s11_upper"] = e.s11_upper;
    d["es11_lower"] = e.es11_lower;
    d["es11_upper"] = e.es11_upper;
    d["e11_lower"] = e.e11_lower;
    d["e11_upper"] = e.e11_upper;
    d["flipped"] = e.flipped;
    return d;
}

py::dict report_dict(const KeyRateReport& r) {
    py::dict d;
    d["rate"] = r.rate;
    d["rate_raw"] = r.rate_raw;
    d["variant"] = r.variant;
    d["mode"] = r.mode;
    d["mu_z"] = r.mu_z;
    d["s_zz_11_lower"] = r.s_zz_11_lower;
    d["i_e"] = r.i_e;
    d["q_zz_mumu"] = r.q_zz_mumu;
    d["e_zz_mumu"] = r.e_zz_mumu;
    d["p_zz"] = r.p_zz;
    d["p_zz_mumu"] = r.p_zz_mumu;
    d["f_ec"] = r.f_ec;
    if (r.security.has_value()) {
        d["c_value"] = r.security->c_value;
        d["u"] = r.security->u;
        d["v"] = r.security->v;
    }
    if (r.i_e_alternate.has_value()) d["i_e_alternate"] = *r.i_e_alternate;
    if (r.n_pairs.has_value()) d["n_pairs"] = *r.n_pairs;
    if (r.epsilon.has_value()) d["epsilon"] = *r.epsilon;
    if (r.bound_count.has_value()) d["bound_count"] = *r.bound_count;
    if (r.failure_probability_total.has_value()) {
        d["failure_probability_total"] = *r.failure_probability_total;
    }
    if (r.estimates.has_value()) {
        py::dict est;
        for (BasisPair basis : kAllBasisPairs) {
            est[to_string(basis).c_str()] = pair_estimate_dict(r.estimates->of(basis));
        }
        d["estimates"] = est;
    }
    d["notes"] = r.notes;
    return d;
}

RunConfig config_from_kwargs(const py::dict& kwargs) {
    RunConfig config;
    for (auto item : kwargs) {
        apply_config_override(config, py::cast<std::string>(item.first),
                              py::cast<std::string>(py::str(item.second)));
    }
    config.validate();
    return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Secret key rates for original and reference-frame-independent MDI-QKD";

    m.def("bessel_i0", &bessel_i0, py::arg("z"));
    m.def("binary_entropy", &binary_entropy, py::arg("x"));
    m.def(
        "c_quantity",
        [](double xx, double yy, double xy, double yx) {
            return c_quantity({xx, yy, xy, yx});
        },
        py::arg("e_xx"), py::arg("e_yy"), py::arg("e_xy"), py::arg("e_yx"));
    m.def(
        "eve_information_rfi",
        [](double e, double c, const std::string& form) {
            return eve_information_rfi(e, c,
                                       form == "linear" ? RfiUForm::Linear : RfiUForm::Sqrt);
        },
        py::arg("e_zz_11_upper"), py::arg("c_value"), py::arg("u_form") = "sqrt");
    m.def("eve_information_mdi", &eve_information_mdi, py::arg("e_xx_11_upper"));
    m.def(
        "chernoff_interval",
        [](double k, double n, double eps) {
            const auto iv = chernoff_interval(k, n, eps);
            return py::make_tuple(iv.lower, iv.upper);
        },
        py::arg("k"), py::arg("n"), py::arg("epsilon"));
    m.def(
        "link_efficiency",
        [](const py::dict& kwargs, const std::string& side) {
            return link_efficiency(config_from_kwargs(kwargs).channel,
                                   side == "b" ? Side::B : Side::A);
        },
        py::arg("config"), py::arg("side") = "a");
    m.def(
        "pair_observables",
        [](const py::dict& kwargs, double lambda_a, double lambda_b,
           const std::string& basis) {
            const RunConfig config = config_from_kwargs(kwargs);
            const auto rec =
                pair_observables(config.channel, config.protocol.beta,
                                 IntensityPair{lambda_a, lambda_b},
                                 basis_pair_from_string(basis));
            py::dict d;
            d["q"] = rec.q;
            d["eq"] = rec.eq;
            if (rec.e.has_value()) d["e"] = *rec.e;
            return d;
        },
        py::arg("config"), py::arg("lambda_a"), py::arg("lambda_b"), py::arg("basis"));
    m.def(
        "key_rate",
        [](const py::dict& kwargs) {
            const RunConfig config = config_from_kwargs(kwargs);
            return report_dict(evaluate_key_rate(config.mode, config.protocol,
                                                 config.channel, config.finite,
                                                 config.form));
        },
        py::arg("config"),
        "Evaluate the configured pipeline (mode = asymptotic | finite).");
    m.def(
        "key_rate_from_counts",
        [](const std::string& counts_path, const py::dict& kwargs) {
            return report_dict(compute_from_counts(counts_path, config_from_kwargs(kwargs)));
        },
        py::arg("counts_path"), py::arg("config"));
    m.def(
        "optimize",
        [](const py::dict& kwargs) {
            const RunConfig config = config_from_kwargs(kwargs);
            ObjectiveConfig oc{config.protocol, config.channel, config.finite, config.mode,
                               config.form};
            const auto bounds =
                ParameterBounds::defaults(config.protocol.variant, config.mode);
            const auto res = optimize_parameters(oc, bounds, config.seed);
            py::dict d;
            d["best_rate"] = res.best_rate;
            d["evaluations"] = res.evaluations;
            d["converged"] = res.converged;
            d["zero_rate"] = res.zero_rate;
            py::dict best;
            best["mu_z"] = res.best.mu_z;
            best["mu_x"] = res.best.mu_x;
            best["nu_x"] = res.best.nu_x;
            best["p_z"] = res.best.p_z;
            best["p_x"] = res.best.p_x;
            best["p_x_signal"] = res.best.p_x_signal;
            d["best"] = best;
            return d;
        },
        py::arg("config"));
    m.def(
        "synthesize_counts",
        [](const py::dict& kwargs) {
            const RunConfig config = config_from_kwargs(kwargs);
            return serialize_counts(
                expected_counts(config.protocol, config.channel, config.finite.n_pairs,
                                true));
        },
        py::arg("config"),
        "Counts-file text with model-expectation tallies for the configured protocol.");
    m.def(
        "run_scan",
        [](const std::string& axis, double start, double stop, double step,
           const std::vector<std::string>& variants, bool optimize, const py::dict& kwargs) {
            const RunConfig config = config_from_kwargs(kwargs);
            ScanSpec spec;
            spec.axis = scan_axis_from_string(axis);
            spec.start = start;
            spec.stop = stop;
            spec.step = step;
            spec.mode = config.mode;
            spec.optimize = optimize;
            for (const std::string& v : variants) {
                spec.variants.push_back(variant_from_string(v));
            }
            return run_scan(spec, config);
        },
        py::arg("axis"), py::arg("start"), py::arg("stop"), py::arg("step"),
        py::arg("variants"), py::arg("optimize") = false, py::arg("config") = py::dict());

    m.attr("__version__") = "0.1.0";
}
