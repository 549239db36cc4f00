#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/pipeline.hpp"
#include "mdiqkd/scan.hpp"

using namespace mdiqkd;

namespace {

RunConfig reference_config() {
    RunConfig c = parse_run_config(
        "# reference setup\n"
        "mu = 0.67\n"
        "nu = 0.01\n"
        "dist_a_km = 80\n"
        "dist_b_km = 80\n");
    return c;
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

double column(const std::string& row, int index) {
    std::istringstream in(row);
    std::string cell;
    for (int i = 0; i <= index; ++i) std::getline(in, cell, ',');
    REQUIRE(!cell.empty());
    return std::stod(cell);
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("/tmp/mdiqkd_test_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parsing, overrides and unknown keys") {
    RunConfig c = reference_config();
    CHECK(c.protocol.intensities.mu_x == 0.67);
    CHECK(c.channel.dist_a_km == 80.0);
    apply_config_override(c, "beta_deg", "25");
    CHECK(c.protocol.beta.degrees() == doctest::Approx(25.0));
    apply_config_override(c, "total_dist_km", "100");
    CHECK(c.channel.dist_a_km == 50.0);
    CHECK_THROWS_AS(apply_config_override(c, "bogus_key", "1"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("mu 0.67\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("mu=abc\n"), ConfigError);
}

TEST_CASE("config serialization round-trips") {
    RunConfig c = reference_config();
    apply_config_override(c, "variant", "rfi_biased");
    apply_config_override(c, "mu_z", "0.44");
    apply_config_override(c, "epsilon", "1e-8");
    const std::string text = serialize_run_config(c);
    const RunConfig back = parse_run_config(text);
    CHECK(serialize_run_config(back) == text);
}

TEST_CASE("scan output is byte-stable and echoes the config") {
    ScanSpec spec;
    spec.axis = ScanAxis::Beta;
    spec.start = 0.0;
    spec.stop = 90.0;
    spec.step = 15.0;
    spec.variants = {ProtocolVariant::RfiSymmetric};
    const RunConfig c = reference_config();
    const std::string a = run_scan(spec, c);
    const std::string b = run_scan(spec, c);
    CHECK(a == b);
    CHECK(a.find("# mu_z=0.67") != std::string::npos);
    CHECK(a.find("axis,variant,status") != std::string::npos);
}

TEST_CASE("beta sweep is symmetric about 45 degrees") {
    ScanSpec spec;
    spec.axis = ScanAxis::Beta;
    spec.start = 0.0;
    spec.stop = 90.0;
    spec.step = 15.0;
    spec.variants = {ProtocolVariant::RfiSymmetric};
    const auto rows = data_rows(run_scan(spec, reference_config()));
    REQUIRE(rows.size() == 7);
    for (std::size_t i = 0; i < rows.size() / 2; ++i) {
        const double lo = column(rows[i], 3);
        const double hi = column(rows[rows.size() - 1 - i], 3);
        CHECK(lo == doctest::Approx(hi).epsilon(1e-9));
    }
}

TEST_CASE("grid points that fail emit a status row instead of aborting") {
    ScanSpec spec;
    spec.axis = ScanAxis::TotalDistance;
    spec.start = -10.0;
    spec.stop = 10.0;
    spec.step = 10.0;
    spec.variants = {ProtocolVariant::RfiSymmetric};
    const std::string csv = run_scan(spec, reference_config());
    const auto rows = data_rows(csv);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].find("error:") != std::string::npos);
    CHECK(rows[1].find("ok") != std::string::npos);
}

TEST_CASE("shared-config scan compares both protocols per point") {
    ScanSpec spec;
    spec.axis = ScanAxis::DistancePerArm;
    spec.start = 80.0;
    spec.stop = 80.0;
    spec.step = 1.0;
    spec.variants = {ProtocolVariant::RfiSymmetric, ProtocolVariant::OriginalSymmetric};
    RunConfig c = reference_config();
    apply_config_override(c, "beta_deg", "25");
    const auto rows = data_rows(run_scan(spec, c));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].find("rfi_symmetric") != std::string::npos);
    CHECK(rows[1].find("original_symmetric") != std::string::npos);
    const double rfi = column(rows[0], 3);
    const double omdi = column(rows[1], 3);
    CHECK(rfi > omdi);
}

TEST_CASE("counts files round-trip through serialization") {
    ProtocolConfig protocol;
    protocol.variant = ProtocolVariant::RfiBiased;
    protocol.intensities.symmetric = false;
    protocol.intensities.mu_z = 0.3;
    protocol.intensities.mu_x = 0.3;
    protocol.intensities.nu_x = 0.06;
    protocol.probabilities = {0.3, 0.25, 0.2};
    ChannelParams channel;
    channel.dist_a_km = channel.dist_b_km = 40.0;
    const CountsTable counts = expected_counts(protocol, channel, 1e12, true);
    const CountsTable parsed = parse_counts_file(serialize_counts(counts));
    REQUIRE(parsed.cells().size() == counts.cells().size());
    FiniteKeyConfig fk;
    const auto direct = finite_key_rate(counts, fk, protocol, 1.16);
    const auto roundtrip = finite_key_rate(parsed, fk, protocol, 1.16);
    CHECK(direct.rate == roundtrip.rate);
}

TEST_CASE("counts file schema errors are named") {
    CHECK_THROWS_AS(parse_counts_file(""), SchemaError);
    CHECK_THROWS_AS(parse_counts_file("# only comments\n"), SchemaError);
    CHECK_THROWS_AS(parse_counts_file("Z Z mu_z mu_z 100 5 5 1\n"), SchemaError);
    CHECK_THROWS_AS(parse_counts_file("Z Z mu_z mu_z 100 5 5 1 -1\n"), SchemaError);
    CHECK_THROWS_AS(parse_counts_file("Z Z mu_z mu_z 100 5 5 1 1.5\n"), SchemaError);
    CHECK_THROWS_AS(parse_counts_file("Z Z mu_z mu_z 100 5 5 9 9\n"), SchemaError);
    CHECK_THROWS_AS(parse_counts_file("Z X mu_z mu_x 100 5 5 1 0\n"), SchemaError);
    CHECK_THROWS_AS(parse_counts_file("Q Z mu_z mu_z 100 5 5 1 0\n"), SchemaError);
    CHECK_THROWS_AS(parse_counts_file("- Z mu_x mu_z 100 5 5 1 0\n"), SchemaError);
    CHECK_THROWS_AS(
        parse_counts_file("Z Z mu_z mu_z 100 5 5 1 0\nZ Z mu_z mu_z 100 5 5 1 0\n"),
        SchemaError);
}

TEST_CASE("vacuum-side rows fill every consistent basis pair") {
    const CountsTable t = parse_counts_file(
        "- X o nu_x 1000 3 2 1 1\n"
        "- - o o 500 0 1 0 0\n");
    CHECK(t.contains(ObsKey{BasisPair::XX, IntensityLabel::Vacuum, IntensityLabel::NuX}));
    CHECK(t.contains(ObsKey{BasisPair::YX, IntensityLabel::Vacuum, IntensityLabel::NuX}));
    CHECK(!t.contains(ObsKey{BasisPair::ZZ, IntensityLabel::Vacuum, IntensityLabel::NuX}));
    for (BasisPair basis : kAllBasisPairs) {
        CHECK(t.contains(ObsKey{basis, IntensityLabel::Vacuum, IntensityLabel::Vacuum}));
    }
}

TEST_CASE("compute_from_counts matches the expectation pipeline within fluctuations") {
    RunConfig c;
    apply_config_override(c, "variant", "rfi_biased");
    apply_config_override(c, "mode", "finite");
    apply_config_override(c, "mu_z", "0.25");
    apply_config_override(c, "mu_x", "0.28");
    apply_config_override(c, "nu_x", "0.06");
    apply_config_override(c, "p_z", "0.2");
    apply_config_override(c, "p_x", "0.29");
    apply_config_override(c, "p_x_signal", "0.12");
    apply_config_override(c, "dist_a_km", "50");
    apply_config_override(c, "dist_b_km", "50");
    const CountsTable counts =
        expected_counts(c.protocol, c.channel, c.finite.n_pairs, true);
    TempFile file("counts.txt", serialize_counts(counts));
    const KeyRateReport from_file = compute_from_counts(file.path, c);
    const KeyRateReport direct = finite_key_rate_expected(c.protocol, c.channel, c.finite);
    CHECK(from_file.rate ==
          doctest::Approx(direct.rate).epsilon(1e-3));
    CHECK(from_file.rate > 0.0);
}

TEST_CASE("empty counts path raises a schema error") {
    RunConfig c;
    apply_config_override(c, "variant", "rfi_biased");
    TempFile file("empty.txt", "");
    CHECK_THROWS_AS(compute_from_counts(file.path, c), SchemaError);
}

TEST_CASE("report serialization carries the audit block") {
    const RunConfig c = reference_config();
    const auto rep = asymptotic_key_rate(c.protocol, c.channel);
    const std::string text = serialize_report(rep);
    CHECK(text.find("rate=") != std::string::npos);
    CHECK(text.find("c_value=") != std::string::npos);
    CHECK(text.find("i_e_alternate=") != std::string::npos);
    CHECK(text.find("s11_lower_zz=") != std::string::npos);
}
