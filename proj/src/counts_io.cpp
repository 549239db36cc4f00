#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/scan.hpp"

namespace mdiqkd {

namespace {

double parse_count(const std::string& tok, int lineno) {
    try {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        if (v < 0.0) {
            throw SchemaError(fmt::format("counts line {}: negative count '{}'", lineno, tok));
        }
        if (v != std::floor(v)) {
            throw SchemaError(
                fmt::format("counts line {}: non-integer count '{}'", lineno, tok));
        }
        return v;
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception&) {
        throw SchemaError(fmt::format("counts line {}: bad count '{}'", lineno, tok));
    }
}

/// Basis pairs a row fills. '-' marks a vacuum side whose basis was never
/// chosen; such a row serves every estimator whose other side matches.
std::vector<BasisPair> basis_pairs_for(const std::string& a, const std::string& b,
                                       int lineno) {
    auto valid_letter = [](const std::string& s) {
        return s == "Z" || s == "X" || s == "Y" || s == "-";
    };
    if (!valid_letter(a) || !valid_letter(b)) {
        throw SchemaError(fmt::format("counts line {}: bad basis letters '{} {}'", lineno, a, b));
    }
    if (a != "-" && b != "-") {
        const std::string pair = a + b;
        for (BasisPair bp : kAllBasisPairs) {
            if (to_string(bp) == pair) return {bp};
        }
        throw SchemaError(fmt::format(
            "counts line {}: basis pair '{}' is not used by any estimator", lineno, pair));
    }
    if (a == "-" && b == "-") {
        return {kAllBasisPairs.begin(), kAllBasisPairs.end()};
    }
    std::vector<BasisPair> out;
    for (BasisPair bp : kAllBasisPairs) {
        const std::string name = to_string(bp);
        if ((a == "-" && name.substr(1, 1) == b) || (b == "-" && name.substr(0, 1) == a)) {
            out.push_back(bp);
        }
    }
    return out;
}

}  // namespace

CountsTable parse_counts_file(const std::string& text) {
    CountsTable table;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() != 9) {
            throw SchemaError(fmt::format(
                "counts line {}: expected 9 fields "
                "(basisA basisB intA intB pairs psi+ psi- err+ err-), got {}",
                lineno, tok.size()));
        }
        IntensityLabel la, lb;
        try {
            la = intensity_label_from_string(tok[2]);
            lb = intensity_label_from_string(tok[3]);
        } catch (const std::exception& e) {
            throw SchemaError(fmt::format("counts line {}: {}", lineno, e.what()));
        }
        if ((tok[0] == "-") != (la == IntensityLabel::Vacuum) ||
            (tok[1] == "-") != (lb == IntensityLabel::Vacuum)) {
            // a '-' basis letter must pair with a vacuum intensity; an
            // explicit letter may also carry vacuum (replicated bookkeeping)
            if (tok[0] == "-" || tok[1] == "-") {
                throw SchemaError(fmt::format(
                    "counts line {}: '-' basis requires vacuum intensity 'o'", lineno));
            }
        }
        CountsCell cell;
        cell.pairs_sent = parse_count(tok[4], lineno);
        cell.psi_plus = parse_count(tok[5], lineno);
        cell.psi_minus = parse_count(tok[6], lineno);
        cell.err_psi_plus = parse_count(tok[7], lineno);
        cell.err_psi_minus = parse_count(tok[8], lineno);
        try {
            cell.validate();
        } catch (const std::exception& e) {
            throw SchemaError(fmt::format("counts line {}: {}", lineno, e.what()));
        }
        for (BasisPair bp : basis_pairs_for(tok[0], tok[1], lineno)) {
            const ObsKey key{bp, la, lb};
            if (table.contains(key)) {
                throw SchemaError(fmt::format("counts line {}: duplicate cell ({}, {}, {})",
                                              lineno, to_string(bp), to_string(la),
                                              to_string(lb)));
            }
            table.put(key, cell);
        }
        ++rows;
    }
    if (rows == 0) {
        throw SchemaError("counts file: no data rows");
    }
    return table;
}

CountsTable load_counts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError(fmt::format("counts file: cannot open '{}'", path));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_counts_file(buf.str());
}

std::string serialize_counts(const CountsTable& counts) {
    std::string out =
        "# basisA basisB intA intB pairs_sent psi_plus psi_minus err_psi_plus err_psi_minus\n";
    for (const auto& [key, cell] : counts.cells()) {
        const std::string name = to_string(key.basis);
        out += fmt::format("{} {} {} {} {:.0f} {:.0f} {:.0f} {:.0f} {:.0f}\n",
                           name.substr(0, 1), name.substr(1, 1), to_string(key.a),
                           to_string(key.b), cell.pairs_sent, cell.psi_plus, cell.psi_minus,
                           cell.err_psi_plus, cell.err_psi_minus);
    }
    return out;
}

}  // namespace mdiqkd
