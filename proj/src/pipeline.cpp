#include "mdiqkd/pipeline.hpp"

#include <algorithm>

#include "mdiqkd/decoy.hpp"

namespace mdiqkd {

KeyRateReport asymptotic_key_rate(const ProtocolConfig& protocol, const ChannelParams& channel,
                                  RfiUForm form) {
    protocol.validate();
    channel.validate();
    std::vector<std::string> notes;
    const ObservableTable table = observable_table(protocol, channel);
    const SinglePhotonEstimates est =
        estimate_all_bases(table, protocol.intensities, protocol.variant, &notes);

    const IntensityLabel zs = protocol.z_signal_label();
    const GainErrorRecord& key_cell = table.at(BasisPair::ZZ, zs, zs);

    SecretKeyInputs in;
    in.mu_z = protocol.intensities.mu_z;
    in.s_zz_11_lower = est.zz.s11_lower;
    in.q_zz_mumu = key_cell.q;
    in.e_zz_mumu = key_cell.e.value_or(0.0);
    in.f_ec = channel.f_ec;

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
        in.p_zz = protocol.p_zz;
        in.p_zz_mumu = protocol.p_zz_mumu;
    }
    if (!key_cell.e.has_value()) {
        notes.push_back("Z signal error rate undefined (zero gain); treated as zero");
    }

    KeyRateReport rep = secret_key_rate(in);
    rep.variant = to_string(protocol.variant);
    rep.mode = "asymptotic";
    rep.security = security;
    rep.i_e_alternate = alternate;
    rep.estimates = est;
    for (BasisPair basis : kCorrelationPairs) {
        if (est.of(basis).flipped) {
            notes.push_back("flip rule applied to " + to_string(basis) + " error gains");
        }
    }
    rep.notes = std::move(notes);
    return rep;
}

KeyRateReport finite_key_rate_expected(const ProtocolConfig& protocol,
                                       const ChannelParams& channel,
                                       const FiniteKeyConfig& finite, RfiUForm form) {
    const CountsTable counts = expected_counts(protocol, channel, finite.n_pairs, false);
    return finite_key_rate(counts, finite, protocol, channel.f_ec, form);
}

KeyRateReport evaluate_key_rate(Mode mode, const ProtocolConfig& protocol,
                                const ChannelParams& channel, const FiniteKeyConfig& finite,
                                RfiUForm form) {
    if (mode == Mode::Asymptotic) {
        return asymptotic_key_rate(protocol, channel, form);
    }
    return finite_key_rate_expected(protocol, channel, finite, form);
}

}  // namespace mdiqkd
