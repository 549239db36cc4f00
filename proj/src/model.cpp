#include "mdiqkd/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "mdiqkd/bessel.hpp"
#include "mdiqkd/errors.hpp"

namespace mdiqkd {

void ChannelParams::validate() const {
    auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!(eta_d > 0.0) || !prob(eta_d)) {
        throw std::invalid_argument("channel: eta_d must lie in (0,1]");
    }
    if (!prob(p_d) || !prob(e_d)) {
        throw std::invalid_argument("channel: p_d and e_d must lie in [0,1]");
    }
    if (!(alpha_db_per_km >= 0.0)) {
        throw std::invalid_argument("channel: alpha must be non-negative");
    }
    if (!(f_ec >= 1.0)) {
        throw std::invalid_argument("channel: f_ec must be >= 1");
    }
    if (!(dist_a_km >= 0.0) || !(dist_b_km >= 0.0)) {
        throw std::invalid_argument("channel: distances must be non-negative");
    }
}

double link_efficiency(const ChannelParams& params, Side side) {
    const double dist = side == Side::A ? params.dist_a_km : params.dist_b_km;
    return params.eta_d * std::pow(10.0, -params.alpha_db_per_km * dist / 10.0);
}

ModelIntermediates model_intermediates(double eta_a, double eta_b, IntensityPair intensities,
                                       MisalignmentAngle beta, double p_d) {
    ModelIntermediates m{};
    const double ta = eta_a * intensities.lambda_a;
    const double tb = eta_b * intensities.lambda_b;
    m.mu_prime = ta + tb;
    m.x = std::sqrt(ta * tb) / 2.0;
    m.y = (1.0 - p_d) * std::exp(-m.mu_prime / 4.0);
    const double half = std::exp(-m.mu_prime / 2.0);
    // 1 - (1-p_d) e^{-t/2} evaluated without cancellation at small t.
    auto miss = [p_d](double t) {
        return p_d + (1.0 - p_d) * (-std::expm1(-t / 2.0));
    };
    m.q_correct = 2.0 * (1.0 - p_d) * (1.0 - p_d) * half * miss(ta) * miss(tb);
    m.q_erroneous = 2.0 * p_d * (1.0 - p_d) * (1.0 - p_d) * half *
                    (bessel_i0_minus_one(2.0 * m.x) + miss(m.mu_prime));
    const double c = std::cos(beta.rad);
    const double s = std::sin(beta.rad);
    m.b_arg = 2.0 * m.x * c;
    m.e_arg = 2.0 * m.x * s;
    m.theta = std::sqrt(2.0) * m.x * (c + s);
    m.xi = std::sqrt(2.0) * m.x * (c - s);
    return m;
}

namespace {

GainErrorRecord make_record(double q, double eq) {
    GainErrorRecord rec;
    rec.q = q;
    rec.eq = eq;
    if (q > 0.0) {
        rec.e = eq / q;
    }
    return rec;
}

}  // namespace

GainErrorRecord pair_observables(const ChannelParams& params, MisalignmentAngle beta,
                                 IntensityPair intensities, BasisPair basis) {
    if (!(intensities.lambda_a >= 0.0) || !(intensities.lambda_b >= 0.0)) {
        throw std::invalid_argument("pair_observables: intensities must be non-negative");
    }
    const double eta_a = link_efficiency(params, Side::A);
    const double eta_b = link_efficiency(params, Side::B);
    const ModelIntermediates m =
        model_intermediates(eta_a, eta_b, intensities, beta, params.p_d);
    const double ed = params.e_d;

    if (basis == BasisPair::ZZ) {
        const double q = m.q_correct + m.q_erroneous;
        const double eq = ed * m.q_correct + (1.0 - ed) * m.q_erroneous;
        return make_record(q, eq);
    }

    // The bracket 2y^2 - 4y I0(x) + I0(a) + I0(b) cancels to second order
    // at small intensities; regrouped around (1-y)^2 and I0-1 it stays
    // accurate relative to its own scale. The error gains are carried as
    // Q/2 +- y^2 (1-2 e_d) (I0(a)-I0(b)) so the complementary-angle and
    // swapped-basis identities hold to rounding instead of to the bracket's
    // conditioning.
    const double y2 = m.y * m.y;
    const double one_minus_y =
        params.p_d + (1.0 - params.p_d) * (-std::expm1(-m.mu_prime / 4.0));
    const double i0x = bessel_i0_minus_one(m.x);
    auto gain = [&](double arg1, double arg2, double* delta) {
        const double d1 = bessel_i0_minus_one(arg1);
        const double d2 = bessel_i0_minus_one(arg2);
        *delta = d1 - d2;
        const double bracket =
            2.0 * one_minus_y * one_minus_y - 4.0 * m.y * i0x + d1 + d2;
        return 2.0 * y2 * bracket;
    };
    double delta = 0.0;
    double q, eq;
    if (basis == BasisPair::XX || basis == BasisPair::YY) {
        q = gain(m.e_arg, m.b_arg, &delta);
        eq = q / 2.0 + y2 * (1.0 - 2.0 * ed) * delta;
    } else {
        // XY and YX share the gain; their error gains mirror each other.
        q = gain(m.theta, m.xi, &delta);
        const double shift = y2 * (1.0 - 2.0 * ed) * delta;
        eq = basis == BasisPair::XY ? q / 2.0 + shift : q / 2.0 - shift;
    }
    q = std::max(q, 0.0);
    eq = std::clamp(eq, 0.0, q);
    return make_record(q, eq);
}

const GainErrorRecord& ObservableTable::at(BasisPair basis, IntensityLabel a,
                                           IntensityLabel b) const {
    auto it = cells_.find(ObsKey{basis, a, b});
    if (it == cells_.end()) {
        throw ConfigError(fmt::format("observable table: missing cell ({}, {}, {})",
                                      to_string(basis), to_string(a), to_string(b)));
    }
    return it->second;
}

std::vector<IntensityLabel> intensity_labels_for(ProtocolVariant variant, BasisPair basis) {
    if (variant == ProtocolVariant::RfiBiased) {
        if (basis == BasisPair::ZZ) {
            return {IntensityLabel::MuZ, IntensityLabel::Vacuum};
        }
        return {IntensityLabel::MuX, IntensityLabel::NuX, IntensityLabel::Vacuum};
    }
    return {IntensityLabel::Mu, IntensityLabel::Nu, IntensityLabel::Vacuum};
}

ObservableTable observable_table(const ProtocolConfig& config, const ChannelParams& params) {
    config.validate();
    params.validate();
    ObservableTable table;
    for (BasisPair basis : kAllBasisPairs) {
        const auto labels = intensity_labels_for(config.variant, basis);
        for (IntensityLabel la : labels) {
            for (IntensityLabel lb : labels) {
                IntensityPair pair{config.intensities.value_of(la),
                                   config.intensities.value_of(lb)};
                table.put(ObsKey{basis, la, lb},
                          pair_observables(params, config.beta, pair, basis));
            }
        }
    }
    return table;
}

}  // namespace mdiqkd
