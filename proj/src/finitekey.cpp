#include "mdiqkd/finitekey.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "mdiqkd/errors.hpp"

namespace mdiqkd {

void FiniteKeyConfig::validate() const {
    if (!(n_pairs >= 1.0)) {
        throw std::invalid_argument("finite-key config: n_pairs must be >= 1");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("finite-key config: epsilon must lie in (0,1)");
    }
}

BoundedObservable chernoff_interval(double k, double n, double epsilon) {
    if (!(n >= 1.0)) {
        throw std::invalid_argument("chernoff_interval: n must be >= 1");
    }
    if (!(k >= 0.0) || k > n) {
        throw std::invalid_argument(
            fmt::format("chernoff_interval: k = {} outside [0, n = {}]", k, n));
    }
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("chernoff_interval: epsilon must lie in (0, 1]");
    }
    const double b = std::log(1.0 / epsilon);
    const double lo = std::max(0.0, k - std::sqrt(2.0 * k * b));
    const double hi = std::min(n, k + b + std::sqrt(2.0 * k * b + b * b));
    return {lo / n, hi / n};
}

void CountsCell::validate() const {
    for (double v : {pairs_sent, psi_plus, psi_minus, err_psi_plus, err_psi_minus}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw SchemaError("counts cell: negative or non-finite count");
        }
    }
    if (err_psi_plus > psi_plus || err_psi_minus > psi_minus) {
        throw SchemaError("counts cell: error counts exceed coincidences");
    }
    if (coincidences() > pairs_sent) {
        throw SchemaError("counts cell: coincidences exceed pairs sent");
    }
}

const CountsCell& CountsTable::at(BasisPair basis, IntensityLabel a, IntensityLabel b) const {
    auto it = cells_.find(ObsKey{basis, a, b});
    if (it == cells_.end()) {
        throw ConfigError(fmt::format("counts table: missing cell ({}, {}, {})",
                                      to_string(basis), to_string(a), to_string(b)));
    }
    return it->second;
}

const BoundedRecord& BoundedObservableTable::at(BasisPair basis, IntensityLabel a,
                                                IntensityLabel b) const {
    auto it = cells_.find(ObsKey{basis, a, b});
    if (it == cells_.end()) {
        throw ConfigError(fmt::format("bounded table: missing cell ({}, {}, {})",
                                      to_string(basis), to_string(a), to_string(b)));
    }
    return it->second;
}

BoundedObservableTable apply_fluctuations(const CountsTable& counts,
                                          const FiniteKeyConfig& config,
                                          const ProtocolConfig& protocol) {
    config.validate();
    BoundedObservableTable out;
    const IntensityLabel sig = protocol.signal_label();

    // Flip decisions from the signal-signal point estimates.
    for (BasisPair basis : kCorrelationPairs) {
        ObsKey key{basis, sig, sig};
        bool flip = false;
        if (counts.contains(key)) {
            const CountsCell& mm = counts.at(basis, sig, sig);
            flip = mm.coincidences() > 0.0 && mm.errors() / mm.coincidences() > 0.5;
        }
        out.flipped[basis] = flip;
    }

    for (const auto& [key, cell] : counts.cells()) {
        cell.validate();
        if (!(cell.pairs_sent >= 1.0)) {
            // A cell that was never scheduled carries no information.
            out.put(key, BoundedRecord{{0.0, 1.0}, {0.0, 1.0}});
            continue;
        }
        const bool flip =
            out.flipped.count(key.basis) != 0 && out.flipped.at(key.basis);
        const double coinc = cell.coincidences();
        const double err = flip ? coinc - cell.errors() : cell.errors();
        out.put(key, BoundedRecord{chernoff_interval(coinc, cell.pairs_sent, config.epsilon),
                                   chernoff_interval(err, cell.pairs_sent, config.epsilon)});
    }
    return out;
}

namespace {

EstimatorCells bounded_cells(const BoundedObservableTable& table, BasisPair basis,
                             IntensityLabel mu, IntensityLabel nu, bool error_gains) {
    const auto o = IntensityLabel::Vacuum;
    auto cell = [&](IntensityLabel a, IntensityLabel b) {
        const BoundedRecord& rec = table.at(basis, a, b);
        return error_gains ? rec.eq : rec.q;
    };
    return {cell(nu, nu), cell(mu, mu), cell(o, mu), cell(mu, o),
            cell(o, nu),  cell(nu, o),  cell(o, o)};
}

}  // namespace

SinglePhotonEstimates estimate_all_bases_bounded(const BoundedObservableTable& table,
                                                 const IntensitySettings& settings,
                                                 ProtocolVariant variant,
                                                 std::vector<std::string>* diagnostics) {
    settings.validate();
    const auto decoy = poisson_coefficients(settings.nu_x);
    const auto signal = poisson_coefficients(settings.mu_x);
    const bool biased = variant == ProtocolVariant::RfiBiased;
    const IntensityLabel mu = biased ? IntensityLabel::MuX : IntensityLabel::Mu;
    const IntensityLabel nu = biased ? IntensityLabel::NuX : IntensityLabel::Nu;

    SinglePhotonEstimates out;
    for (BasisPair basis : kCorrelationPairs) {
        const bool flip = table.flipped.count(basis) != 0 && table.flipped.at(basis);
        out.of(basis) = detail::estimate_from_cells(
            bounded_cells(table, basis, mu, nu, false),
            bounded_cells(table, basis, mu, nu, true), decoy, signal, flip, basis,
            diagnostics);
    }

    if (biased) {
        PairEstimate zz;
        zz.s11_lower = out.xx.s11_lower;
        zz.s11_upper = out.xx.s11_upper;
        zz.s11_lower_alt = out.xx.s11_lower_alt;
        const auto o = IntensityLabel::Vacuum;
        const auto mz = IntensityLabel::MuZ;
        EstimatorCells cells{};
        cells.mm = table.at(BasisPair::ZZ, mz, mz).eq;
        cells.om = table.at(BasisPair::ZZ, o, mz).eq;
        cells.mo = table.at(BasisPair::ZZ, mz, o).eq;
        cells.oo = table.at(BasisPair::ZZ, o, o).eq;
        zz.es11_upper = std::clamp(
            detail::m11_upper_signal(cells, poisson_coefficients(settings.mu_z)), 0.0, 1.0);
        if (zz.s11_lower > 0.0) {
            zz.e11_upper = std::clamp(zz.es11_upper / zz.s11_lower, 0.0, 1.0);
        } else {
            zz.e11_upper = 1.0;
            if (diagnostics) {
                diagnostics->push_back(
                    "estimation failed for ZZ: zero single-photon yield lower bound");
            }
        }
        out.zz = zz;
        if (diagnostics) {
            diagnostics->push_back("ZZ yield bounds taken from the X-basis estimate");
        }
    } else {
        out.zz = detail::estimate_from_cells(
            bounded_cells(table, BasisPair::ZZ, mu, nu, false),
            bounded_cells(table, BasisPair::ZZ, mu, nu, true), decoy, signal, false,
            BasisPair::ZZ, diagnostics);
    }
    return out;
}

KeyRateReport finite_key_rate(const CountsTable& counts, const FiniteKeyConfig& config,
                              const ProtocolConfig& protocol, double f_ec, RfiUForm form) {
    config.validate();
    protocol.validate();
    std::vector<std::string> notes;
    const BoundedObservableTable table = apply_fluctuations(counts, config, protocol);
    const SinglePhotonEstimates est =
        estimate_all_bases_bounded(table, protocol.intensities, protocol.variant, &notes);

    for (BasisPair basis : kCorrelationPairs) {
        if (table.flipped.at(basis)) {
            notes.push_back(fmt::format("flip rule applied to {} counts", to_string(basis)));
        }
    }

    const IntensityLabel zs = protocol.z_signal_label();
    const BoundedRecord& key_cell = table.at(BasisPair::ZZ, zs, zs);
    const double q_up = key_cell.q.upper;
    const double eq_up = key_cell.eq.upper;
    const double e_up = q_up > 0.0 ? std::clamp(eq_up / q_up, 0.0, 1.0) : 0.0;

    SecretKeyInputs in;
    in.mu_z = protocol.intensities.mu_z;
    in.s_zz_11_lower = est.zz.s11_lower;
    in.q_zz_mumu = q_up;
    in.e_zz_mumu = e_up;
    std::optional<SecurityQuantities> security;
    std::optional<double> alternate;
    if (protocol.variant == ProtocolVariant::OriginalSymmetric) {
        in.i_e = eve_information_mdi(std::min(est.xx.e11_upper, 0.5));
    } else {
        const double c = c_quantity(est.correlation_error_uppers());
        const double e_zz = std::min(est.zz.e11_upper, 0.5);
        SecurityQuantities sq = eve_information_rfi_full(e_zz, c, form);
        security = sq;
        in.i_e = sq.i_e;
        alternate = eve_information_rfi(
            e_zz, c, form == RfiUForm::Sqrt ? RfiUForm::Linear : RfiUForm::Sqrt);
    }

    if (protocol.variant == ProtocolVariant::RfiBiased) {
        in.p_zz = protocol.probabilities.p_z * protocol.probabilities.p_z;
        in.p_zz_mumu = 1.0;
    } else {
        in.p_zz = protocol.probabilities.p_z * protocol.probabilities.p_z;
        in.p_zz_mumu = protocol.probabilities.p_x_signal * protocol.probabilities.p_x_signal;
    }
    in.f_ec = f_ec;

    KeyRateReport rep = secret_key_rate(in);
    rep.variant = to_string(protocol.variant);
    rep.mode = "finite";
    rep.security = security;
    rep.i_e_alternate = alternate;
    rep.estimates = est;
    rep.n_pairs = config.n_pairs;
    rep.epsilon = config.epsilon;
    rep.bound_count = 2 * counts.cells().size();
    rep.failure_probability_total = static_cast<double>(*rep.bound_count) * config.epsilon;
    notes.push_back("upper interval ends used for the Z signal gain and error gain");
    notes.push_back(
        "per-term interval ends inside the two-decoy formulas keep lower bounds lower");
    rep.notes = std::move(notes);
    return rep;
}

CountsTable expected_counts(const ProtocolConfig& protocol, const ChannelParams& channel,
                            double n_pairs, bool round_to_integers) {
    protocol.validate();
    channel.validate();
    if (!(n_pairs >= 1.0)) {
        throw std::invalid_argument("expected_counts: n_pairs must be >= 1");
    }
    const BasisProbabilities& pr = protocol.probabilities;
    const bool biased = protocol.variant == ProtocolVariant::RfiBiased;

    // Per-side probability of emitting a given intensity label inside the
    // basis of one basis-pair slot; vacuum is basis-free.
    auto side_prob = [&](char basis, IntensityLabel label) -> double {
        if (label == IntensityLabel::Vacuum) return pr.vacuum();
        const double p_basis = basis == 'Z' ? pr.p_z : pr.p_x;
        if (biased) {
            if (basis == 'Z') return p_basis;  // Z sends the signal state only
            return label == IntensityLabel::MuX ? p_basis * pr.p_x_signal
                                                : p_basis * (1.0 - pr.p_x_signal);
        }
        return label == IntensityLabel::Mu ? p_basis * pr.p_x_signal
                                           : p_basis * (1.0 - pr.p_x_signal);
    };

    CountsTable out;
    for (BasisPair basis : kAllBasisPairs) {
        const std::string name = to_string(basis);
        const auto labels = intensity_labels_for(protocol.variant, basis);
        for (IntensityLabel la : labels) {
            for (IntensityLabel lb : labels) {
                // Only the cells the estimators read: skip mixed
                // signal-decoy cells, which the two-decoy formulas never use.
                const bool a_sig = la != IntensityLabel::Vacuum &&
                                   la != protocol.decoy_label();
                const bool b_sig = lb != IntensityLabel::Vacuum &&
                                   lb != protocol.decoy_label();
                const bool a_dec = la == protocol.decoy_label();
                const bool b_dec = lb == protocol.decoy_label();
                if ((a_sig && b_dec) || (a_dec && b_sig)) continue;

                const double prob = side_prob(name[0], la) * side_prob(name[1], lb);
                const GainErrorRecord rec = pair_observables(
                    channel, protocol.beta,
                    IntensityPair{protocol.intensities.value_of(la),
                                  protocol.intensities.value_of(lb)},
                    basis);
                double pairs = n_pairs * prob;
                double k = pairs * rec.q;
                double ke = pairs * rec.eq;
                if (round_to_integers) {
                    pairs = std::round(pairs);
                    k = std::min(std::round(k), pairs);
                    ke = std::min(std::round(ke), k);
                }
                CountsCell cell;
                cell.pairs_sent = pairs;
                cell.psi_plus = std::floor(k / 2.0);
                cell.psi_minus = k - cell.psi_plus;
                cell.err_psi_plus = std::min(std::floor(ke / 2.0), cell.psi_plus);
                cell.err_psi_minus = std::min(ke - cell.err_psi_plus, cell.psi_minus);
                out.put(ObsKey{basis, la, lb}, cell);
            }
        }
    }
    return out;
}

}  // namespace mdiqkd
