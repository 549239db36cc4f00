#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/pipeline.hpp"
#include "mdiqkd/scan.hpp"

namespace mdiqkd {

ScanAxis scan_axis_from_string(const std::string& s) {
    if (s == "distance-per-arm") return ScanAxis::DistancePerArm;
    if (s == "total-distance") return ScanAxis::TotalDistance;
    if (s == "beta") return ScanAxis::Beta;
    throw ConfigError(fmt::format("scan: unknown axis '{}'", s));
}

std::string to_string(ScanAxis a) {
    switch (a) {
        case ScanAxis::DistancePerArm: return "distance-per-arm";
        case ScanAxis::TotalDistance: return "total-distance";
        case ScanAxis::Beta: return "beta";
    }
    throw std::logic_error("unreachable scan axis");
}

void ScanSpec::validate() const {
    if (!(step > 0.0)) {
        throw ConfigError("scan: step must be positive");
    }
    if (stop < start) {
        throw ConfigError("scan: empty range");
    }
    if (variants.empty()) {
        throw ConfigError("scan: no protocol variants selected");
    }
}

std::vector<double> ScanSpec::grid() const {
    std::vector<double> out;
    for (double v = start; v <= stop + step * 1e-9; v += step) {
        out.push_back(v);
    }
    return out;
}

namespace {

struct PointResult {
    std::string status = "ok";
    std::optional<KeyRateReport> report;
    std::optional<ParameterVector> params;
};

RunConfig config_at(const RunConfig& base, ScanAxis axis, double value,
                    ProtocolVariant variant, Mode mode) {
    RunConfig c = base;
    c.mode = mode;
    c.protocol.variant = variant;
    c.protocol.intensities.symmetric = variant != ProtocolVariant::RfiBiased;
    if (c.protocol.intensities.symmetric) {
        c.protocol.intensities.mu_z = c.protocol.intensities.mu_x;
    }
    switch (axis) {
        case ScanAxis::DistancePerArm:
            c.channel.dist_a_km = value;
            c.channel.dist_b_km = value;
            break;
        case ScanAxis::TotalDistance:
            c.channel.dist_a_km = value / 2.0;
            c.channel.dist_b_km = value / 2.0;
            break;
        case ScanAxis::Beta:
            c.protocol.beta = MisalignmentAngle::from_degrees(value);
            break;
    }
    return c;
}

PointResult evaluate_point(const RunConfig& c, bool optimize) {
    PointResult out;
    try {
        if (optimize) {
            ObjectiveConfig oc{c.protocol, c.channel, c.finite, c.mode, c.form};
            const auto bounds = ParameterBounds::defaults(c.protocol.variant, c.mode);
            const OptimizationResult res = optimize_parameters(oc, bounds, c.seed);
            out.params = res.best;
            out.report = evaluate_key_rate(c.mode, apply_parameters(c.protocol, res.best),
                                           c.channel, c.finite, c.form);
        } else {
            ParameterVector p;
            p.mu_z = c.protocol.intensities.mu_z;
            p.mu_x = c.protocol.intensities.mu_x;
            p.nu_x = c.protocol.intensities.nu_x;
            p.p_z = c.protocol.probabilities.p_z;
            p.p_x = c.protocol.probabilities.p_x;
            p.p_x_signal = c.protocol.probabilities.p_x_signal;
            out.params = p;
            out.report = evaluate_key_rate(c.mode, c.protocol, c.channel, c.finite, c.form);
        }
    } catch (const std::exception& e) {
        out.status = fmt::format("error: {}", e.what());
        out.report.reset();
    }
    return out;
}

std::string csv_cell(const std::optional<double>& v) {
    return v.has_value() ? fmt::format("{:.10e}", *v) : std::string{};
}

}  // namespace

std::string run_scan(const ScanSpec& spec, const RunConfig& base) {
    spec.validate();
    base.validate();

    const std::vector<double> grid = spec.grid();
    struct Task {
        double value;
        ProtocolVariant variant;
    };
    std::vector<Task> tasks;
    for (double v : grid) {
        for (ProtocolVariant variant : spec.variants) {
            tasks.push_back({v, variant});
        }
    }

    // Grid points are independent pure evaluations; compute them
    // concurrently and emit in grid order.
    std::vector<std::future<PointResult>> futures;
    futures.reserve(tasks.size());
    for (const Task& t : tasks) {
        futures.push_back(std::async(std::launch::async, [&spec, &base, t]() {
            return evaluate_point(config_at(base, spec.axis, t.value, t.variant, spec.mode),
                                  spec.optimize);
        }));
    }

    std::ostringstream out;
    for (const std::string& line :
         {std::string("mdiqkd scan"),
          fmt::format("axis={} start={:.12g} stop={:.12g} step={:.12g} optimize={}",
                      to_string(spec.axis), spec.start, spec.stop, spec.step,
                      spec.optimize ? "on" : "off"),
          std::string("rates are per transmitted pulse pair")}) {
        out << "# " << line << "\n";
    }
    {
        std::istringstream cfg(serialize_run_config(base));
        std::string line;
        while (std::getline(cfg, line)) {
            out << "# " << line << "\n";
        }
    }
    out << "axis,variant,status,rate,rate_raw,c_value,i_e,i_e_alternate,e_zz_11_upper,"
           "s_zz_11_lower,q_zz_mumu,e_zz_mumu,mu_z,mu_x,nu_x,p_z,p_x,p_x_signal\n";

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const PointResult res = futures[i].get();
        const Task& t = tasks[i];
        out << fmt::format("{:.10g},{},{}", t.value, to_string(t.variant), res.status);
        if (res.report.has_value()) {
            const KeyRateReport& r = *res.report;
            std::optional<double> c_value;
            std::optional<double> e_zz_up;
            if (r.security.has_value()) c_value = r.security->c_value;
            if (r.estimates.has_value()) e_zz_up = r.estimates->zz.e11_upper;
            out << fmt::format(
                ",{},{},{},{},{},{},{},{}", csv_cell(r.rate), csv_cell(r.rate_raw),
                csv_cell(c_value), csv_cell(r.i_e), csv_cell(r.i_e_alternate),
                csv_cell(e_zz_up), csv_cell(r.estimates.has_value()
                                                ? std::optional<double>(r.estimates->zz.s11_lower)
                                                : std::nullopt),
                csv_cell(r.q_zz_mumu));
            out << fmt::format(",{}", csv_cell(r.e_zz_mumu));
        } else {
            out << ",,,,,,,,,";
        }
        if (res.params.has_value()) {
            const ParameterVector& p = *res.params;
            out << fmt::format(",{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}", p.mu_z,
                               p.mu_x, p.nu_x, p.p_z, p.p_x, p.p_x_signal);
        } else {
            out << ",,,,,,";
        }
        out << "\n";
    }
    return out.str();
}

KeyRateReport compute_from_counts(const std::string& counts_path, const RunConfig& config) {
    config.validate();
    const CountsTable counts = load_counts_file(counts_path);
    return finite_key_rate(counts, config.finite, config.protocol, config.channel.f_ec,
                           config.form);
}

std::string serialize_report(const KeyRateReport& r) {
    std::string out;
    auto put = [&out](const std::string& k, double v) {
        out += fmt::format("{}={:.12e}\n", k, v);
    };
    out += fmt::format("variant={}\n", r.variant);
    out += fmt::format("mode={}\n", r.mode);
    put("rate", r.rate);
    put("rate_raw", r.rate_raw);
    put("mu_z", r.mu_z);
    put("s_zz_11_lower", r.s_zz_11_lower);
    put("i_e", r.i_e);
    put("q_zz_mumu", r.q_zz_mumu);
    put("e_zz_mumu", r.e_zz_mumu);
    put("p_zz", r.p_zz);
    put("p_zz_mumu", r.p_zz_mumu);
    put("f_ec", r.f_ec);
    if (r.security.has_value()) {
        put("c_value", r.security->c_value);
        put("u", r.security->u);
        put("v", r.security->v);
    }
    if (r.i_e_alternate.has_value()) put("i_e_alternate", *r.i_e_alternate);
    if (r.n_pairs.has_value()) put("n_pairs", *r.n_pairs);
    if (r.epsilon.has_value()) put("epsilon", *r.epsilon);
    if (r.bound_count.has_value()) {
        out += fmt::format("bound_count={}\n", *r.bound_count);
    }
    if (r.failure_probability_total.has_value()) {
        put("failure_probability_total", *r.failure_probability_total);
    }
    if (r.estimates.has_value()) {
        for (BasisPair basis : kAllBasisPairs) {
            const PairEstimate& e = r.estimates->of(basis);
            std::string tag = to_string(basis);
            std::transform(tag.begin(), tag.end(), tag.begin(), ::tolower);
            put(fmt::format("s11_lower_{}", tag), e.s11_lower);
            put(fmt::format("s11_upper_{}", tag), e.s11_upper);
            put(fmt::format("s11_lower_alt_{}", tag), e.s11_lower_alt);
            put(fmt::format("es11_upper_{}", tag), e.es11_upper);
            put(fmt::format("e11_upper_{}", tag), e.e11_upper);
            put(fmt::format("e11_lower_{}", tag), e.e11_lower);
            out += fmt::format("flipped_{}={}\n", tag, e.flipped ? 1 : 0);
        }
    }
    for (const std::string& note : r.notes) {
        out += fmt::format("# note: {}\n", note);
    }
    return out;
}

}  // namespace mdiqkd
