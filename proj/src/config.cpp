#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/scan.hpp"

namespace mdiqkd {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v)) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("config: bad numeric value '{}' for key '{}'", value, key));
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const auto v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("config: bad integer value '{}' for key '{}'", value, key));
    }
}

}  // namespace

void RunConfig::validate() const {
    channel.validate();
    protocol.validate();
    finite.validate();
}

void apply_config_override(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "variant") {
        c.protocol.variant = variant_from_string(value);
        c.protocol.intensities.symmetric = c.protocol.variant != ProtocolVariant::RfiBiased;
        if (c.protocol.intensities.symmetric) {
            c.protocol.intensities.mu_z = c.protocol.intensities.mu_x;
        }
    } else if (key == "mode") {
        if (value == "asymptotic") c.mode = Mode::Asymptotic;
        else if (value == "finite") c.mode = Mode::Finite;
        else throw ConfigError(fmt::format("config: unknown mode '{}'", value));
    } else if (key == "ie_u_form") {
        if (value == "sqrt") c.form = RfiUForm::Sqrt;
        else if (value == "linear") c.form = RfiUForm::Linear;
        else throw ConfigError(fmt::format("config: unknown ie_u_form '{}'", value));
    } else if (key == "eta_d") c.channel.eta_d = parse_double(key, value);
    else if (key == "p_d") c.channel.p_d = parse_double(key, value);
    else if (key == "e_d") c.channel.e_d = parse_double(key, value);
    else if (key == "alpha_db_per_km") c.channel.alpha_db_per_km = parse_double(key, value);
    else if (key == "f_ec") c.channel.f_ec = parse_double(key, value);
    else if (key == "dist_a_km") c.channel.dist_a_km = parse_double(key, value);
    else if (key == "dist_b_km") c.channel.dist_b_km = parse_double(key, value);
    else if (key == "total_dist_km") {
        const double d = parse_double(key, value) / 2.0;
        c.channel.dist_a_km = d;
        c.channel.dist_b_km = d;
    } else if (key == "beta_deg") {
        c.protocol.beta = MisalignmentAngle::from_degrees(parse_double(key, value));
    } else if (key == "mu") {
        const double v = parse_double(key, value);
        c.protocol.intensities.mu_z = v;
        c.protocol.intensities.mu_x = v;
    } else if (key == "nu") c.protocol.intensities.nu_x = parse_double(key, value);
    else if (key == "mu_z") c.protocol.intensities.mu_z = parse_double(key, value);
    else if (key == "mu_x") c.protocol.intensities.mu_x = parse_double(key, value);
    else if (key == "nu_x") c.protocol.intensities.nu_x = parse_double(key, value);
    else if (key == "p_z") c.protocol.probabilities.p_z = parse_double(key, value);
    else if (key == "p_x") c.protocol.probabilities.p_x = parse_double(key, value);
    else if (key == "p_x_signal") c.protocol.probabilities.p_x_signal = parse_double(key, value);
    else if (key == "p_zz") c.protocol.p_zz = parse_double(key, value);
    else if (key == "p_zz_mumu") c.protocol.p_zz_mumu = parse_double(key, value);
    else if (key == "n_pairs") c.finite.n_pairs = parse_double(key, value);
    else if (key == "epsilon") c.finite.epsilon = parse_double(key, value);
    else if (key == "seed") c.seed = parse_u64(key, value);
    else throw ConfigError(fmt::format("config: unknown key '{}'", key));
}

RunConfig parse_run_config(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("config line {}: expected key=value", lineno));
        }
        apply_config_override(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("config: cannot open '{}'", path));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string serialize_run_config(const RunConfig& c) {
    std::map<std::string, std::string> kv;
    auto num = [](double v) { return fmt::format("{:.12g}", v); };
    kv["variant"] = to_string(c.protocol.variant);
    kv["mode"] = c.mode == Mode::Asymptotic ? "asymptotic" : "finite";
    kv["ie_u_form"] = c.form == RfiUForm::Sqrt ? "sqrt" : "linear";
    kv["eta_d"] = num(c.channel.eta_d);
    kv["p_d"] = num(c.channel.p_d);
    kv["e_d"] = num(c.channel.e_d);
    kv["alpha_db_per_km"] = num(c.channel.alpha_db_per_km);
    kv["f_ec"] = num(c.channel.f_ec);
    kv["dist_a_km"] = num(c.channel.dist_a_km);
    kv["dist_b_km"] = num(c.channel.dist_b_km);
    kv["beta_deg"] = num(c.protocol.beta.degrees());
    kv["mu_z"] = num(c.protocol.intensities.mu_z);
    kv["mu_x"] = num(c.protocol.intensities.mu_x);
    kv["nu_x"] = num(c.protocol.intensities.nu_x);
    kv["p_z"] = num(c.protocol.probabilities.p_z);
    kv["p_x"] = num(c.protocol.probabilities.p_x);
    kv["p_x_signal"] = num(c.protocol.probabilities.p_x_signal);
    kv["p_zz"] = num(c.protocol.p_zz);
    kv["p_zz_mumu"] = num(c.protocol.p_zz_mumu);
    kv["n_pairs"] = num(c.finite.n_pairs);
    kv["epsilon"] = num(c.finite.epsilon);
    kv["seed"] = fmt::format("{}", c.seed);
    std::string out;
    for (const auto& [k, v] : kv) {
        out += fmt::format("{}={}\n", k, v);
    }
    return out;
}

}  // namespace mdiqkd
