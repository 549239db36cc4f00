#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mdiqkd/finitekey.hpp"
#include "mdiqkd/model.hpp"
#include "mdiqkd/optimizer.hpp"
#include "mdiqkd/protocol.hpp"
#include "mdiqkd/security.hpp"

namespace mdiqkd {

/// Everything one run needs. Serialized as flat key=value text, one pair per
/// line, '#' comments; unknown keys are rejected. Defaults follow the
/// reference detector/fiber parameter set.
struct RunConfig {
    ChannelParams channel;
    ProtocolConfig protocol;
    FiniteKeyConfig finite;
    Mode mode = Mode::Asymptotic;
    RfiUForm form = RfiUForm::Sqrt;
    std::uint64_t seed = 1;

    void validate() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
/// Applies one key=value override onto an existing config.
void apply_config_override(RunConfig& config, const std::string& key,
                           const std::string& value);
/// Fully-resolved config as sorted key=value lines (defaults included).
std::string serialize_run_config(const RunConfig& config);

enum class ScanAxis { DistancePerArm, TotalDistance, Beta };

ScanAxis scan_axis_from_string(const std::string& s);
std::string to_string(ScanAxis a);

struct ScanSpec {
    ScanAxis axis = ScanAxis::DistancePerArm;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    std::vector<ProtocolVariant> variants;
    Mode mode = Mode::Asymptotic;
    bool optimize = false;

    void validate() const;
    std::vector<double> grid() const;
};

/// One CSV dataset row per grid point per variant. Per-point estimation
/// failures fill the status column and leave numeric cells empty; the sweep
/// never aborts. Output is byte-stable for a fixed config and seed.
std::string run_scan(const ScanSpec& spec, const RunConfig& config);

/// Full finite-key pipeline on a measured counts file.
KeyRateReport compute_from_counts(const std::string& counts_path, const RunConfig& config);

/// Counts file: one record per line,
///   basisA basisB intA intB pairs_sent psi_plus psi_minus err_psi_plus err_psi_minus
/// whitespace-separated, '#' comments, intensity labels from
/// {mu_z, mu_x, nu_x, o, mu, nu}. A '-' basis letter marks a vacuum side and
/// fills every basis pair consistent with the other side.
CountsTable parse_counts_file(const std::string& text);
CountsTable load_counts_file(const std::string& path);
std::string serialize_counts(const CountsTable& counts);

/// Flat key=value serialization of a report, notes as '#' comment lines.
std::string serialize_report(const KeyRateReport& report);

}  // namespace mdiqkd
