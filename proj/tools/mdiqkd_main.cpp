// Command-line driver: single-point simulation, parameter sweeps, full
// parameter optimization, and key rates from measured counts files.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/optimizer.hpp"
#include "mdiqkd/pipeline.hpp"
#include "mdiqkd/scan.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    double dist_per_arm = -1.0;
    double total_dist = -1.0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Config file (key=value lines)");
    cmd->add_option("--set", opts.overrides, "Override a config key, e.g. --set mu=0.5")
        ->take_all();
    cmd->add_option("--distance-per-arm", opts.dist_per_arm,
                    "Fiber length per arm in km (sets both arms)");
    cmd->add_option("--total-distance", opts.total_dist,
                    "Total fiber length between the parties in km");
}

mdiqkd::RunConfig resolve_config(const CommonOpts& opts) {
    mdiqkd::RunConfig config;
    if (!opts.config_path.empty()) {
        config = mdiqkd::load_run_config(opts.config_path);
    }
    for (const std::string& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw mdiqkd::ConfigError(fmt::format("--set expects key=value, got '{}'", kv));
        }
        mdiqkd::apply_config_override(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opts.dist_per_arm >= 0.0) {
        config.channel.dist_a_km = opts.dist_per_arm;
        config.channel.dist_b_km = opts.dist_per_arm;
    }
    if (opts.total_dist >= 0.0) {
        config.channel.dist_a_km = opts.total_dist / 2.0;
        config.channel.dist_b_km = opts.total_dist / 2.0;
    }
    config.validate();
    return config;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open output file '{}'", out_path));
    }
    out << text;
}

std::string config_echo(const mdiqkd::RunConfig& config) {
    std::string out;
    std::istringstream lines(mdiqkd::serialize_run_config(config));
    std::string line;
    while (std::getline(lines, line)) {
        out += "# " + line + "\n";
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secret key rates for original and reference-frame-independent MDI-QKD"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    auto* sim = app.add_subcommand("simulate", "Evaluate the key rate at a single point");
    add_common(sim, sim_opts);
    std::string sim_out;
    sim->add_option("--out", sim_out, "Write the report to a file");

    CommonOpts scan_opts;
    auto* scan = app.add_subcommand("scan", "Sweep an axis and emit a CSV dataset");
    add_common(scan, scan_opts);
    std::string axis_str = "distance-per-arm";
    double start = 0.0, stop = 0.0, step = 1.0;
    std::vector<std::string> variant_names = {"rfi_symmetric"};
    bool optimize_points = false;
    std::string scan_out;
    scan->add_option("--axis", axis_str, "distance-per-arm | total-distance | beta");
    scan->add_option("--start", start, "Axis start")->required();
    scan->add_option("--stop", stop, "Axis stop")->required();
    scan->add_option("--step", step, "Axis step")->required();
    scan->add_option("--variants", variant_names,
                     "Protocol variants to compare (rfi_symmetric, original_symmetric, "
                     "rfi_biased)")
        ->take_all();
    scan->add_flag("--optimize", optimize_points, "Optimize parameters at every grid point");
    scan->add_option("--out", scan_out, "Write the CSV to a file");

    CommonOpts opt_opts;
    auto* opt = app.add_subcommand("optimize", "Full parameter optimization at one point");
    add_common(opt, opt_opts);
    std::string opt_out;
    opt->add_option("--out", opt_out, "Write the report to a file");

    CommonOpts key_opts;
    auto* key = app.add_subcommand("keyrate", "Finite-key rate from a measured counts file");
    add_common(key, key_opts);
    std::string counts_path;
    std::string key_out;
    key->add_option("--counts", counts_path, "Counts file")->required();
    key->add_option("--out", key_out, "Write the report to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const auto config = resolve_config(sim_opts);
            const auto report = mdiqkd::evaluate_key_rate(
                config.mode, config.protocol, config.channel, config.finite, config.form);
            emit(config_echo(config) + mdiqkd::serialize_report(report), sim_out);
        } else if (scan->parsed()) {
            const auto config = resolve_config(scan_opts);
            mdiqkd::ScanSpec spec;
            spec.axis = mdiqkd::scan_axis_from_string(axis_str);
            spec.start = start;
            spec.stop = stop;
            spec.step = step;
            spec.mode = config.mode;
            spec.optimize = optimize_points;
            for (const std::string& name : variant_names) {
                spec.variants.push_back(mdiqkd::variant_from_string(name));
            }
            emit(mdiqkd::run_scan(spec, config), scan_out);
        } else if (opt->parsed()) {
            const auto config = resolve_config(opt_opts);
            mdiqkd::ObjectiveConfig oc{config.protocol, config.channel, config.finite,
                                       config.mode, config.form};
            const auto bounds =
                mdiqkd::ParameterBounds::defaults(config.protocol.variant, config.mode);
            const auto res = mdiqkd::optimize_parameters(oc, bounds, config.seed);
            const auto report = mdiqkd::evaluate_key_rate(
                config.mode, mdiqkd::apply_parameters(config.protocol, res.best),
                config.channel, config.finite, config.form);
            std::string text = config_echo(config);
            text += fmt::format("best_rate={:.12e}\n", res.best_rate);
            text += fmt::format("evaluations={}\n", res.evaluations);
            text += fmt::format("converged={}\n", res.converged ? 1 : 0);
            text += fmt::format("zero_rate={}\n", res.zero_rate ? 1 : 0);
            text += fmt::format(
                "best_mu_z={:.10g}\nbest_mu_x={:.10g}\nbest_nu_x={:.10g}\n"
                "best_p_z={:.10g}\nbest_p_x={:.10g}\nbest_p_x_signal={:.10g}\n",
                res.best.mu_z, res.best.mu_x, res.best.nu_x, res.best.p_z, res.best.p_x,
                res.best.p_x_signal);
            text += mdiqkd::serialize_report(report);
            emit(text, opt_out);
        } else if (key->parsed()) {
            const auto config = resolve_config(key_opts);
            const auto report = mdiqkd::compute_from_counts(counts_path, config);
            emit(config_echo(config) + mdiqkd::serialize_report(report), key_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
