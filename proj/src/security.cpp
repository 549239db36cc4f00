#include "mdiqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "mdiqkd/errors.hpp"

namespace mdiqkd {

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument(fmt::format("binary_entropy: {} outside [0,1]", x));
    }
    if (x == 0.0 || x == 1.0) {
        return 0.0;
    }
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

const PairEstimate& SinglePhotonEstimates::of(BasisPair b) const {
    switch (b) {
        case BasisPair::ZZ: return zz;
        case BasisPair::XX: return xx;
        case BasisPair::YY: return yy;
        case BasisPair::XY: return xy;
        case BasisPair::YX: return yx;
    }
    throw std::logic_error("unreachable basis pair");
}

PairEstimate& SinglePhotonEstimates::of(BasisPair b) {
    return const_cast<PairEstimate&>(std::as_const(*this).of(b));
}

std::array<double, 4> SinglePhotonEstimates::correlation_error_uppers() const {
    return {xx.e11_upper, yy.e11_upper, xy.e11_upper, yx.e11_upper};
}

double c_quantity(const std::array<double, 4>& e11_uppers) {
    double c = 0.0;
    for (double e : e11_uppers) {
        if (std::isnan(e) || !(e >= 0.0 && e <= 1.0)) {
            throw EstimationError(fmt::format("c_quantity: missing or invalid bound {}", e));
        }
        const double clamped = std::min(0.5, e);
        const double corr = 1.0 - 2.0 * clamped;
        c += corr * corr;
    }
    return c;
}

SecurityQuantities eve_information_rfi_full(double e, double c, RfiUForm form) {
    if (!(e >= 0.0 && e <= 0.5)) {
        throw std::invalid_argument(fmt::format("eve_information_rfi: e = {} outside [0,0.5]", e));
    }
    if (!(c >= 0.0 && c <= 4.0)) {
        throw std::invalid_argument(fmt::format("eve_information_rfi: C = {} outside [0,4]", c));
    }
    SecurityQuantities out;
    out.c_value = c;
    const double half_c = c / 2.0;
    const double one_minus_e = 1.0 - e;
    const double u_arg =
        form == RfiUForm::Sqrt ? std::sqrt(half_c) / one_minus_e : half_c / one_minus_e;
    out.u = std::min(u_arg, 1.0);
    if (e == 0.0) {
        out.v = 0.0;
        out.i_e = binary_entropy((1.0 + out.u) / 2.0);
        return out;
    }
    const double radicand =
        std::max(0.0, half_c - one_minus_e * one_minus_e * out.u * out.u);
    out.v = std::clamp(std::sqrt(radicand) / e, 0.0, 1.0);
    out.i_e = one_minus_e * binary_entropy((1.0 + out.u) / 2.0) +
              e * binary_entropy((1.0 + out.v) / 2.0);
    return out;
}

double eve_information_rfi(double e, double c, RfiUForm form) {
    return eve_information_rfi_full(e, c, form).i_e;
}

double eve_information_mdi(double e) {
    if (!(e >= 0.0 && e <= 0.5)) {
        throw std::invalid_argument(fmt::format("eve_information_mdi: e = {} outside [0,0.5]", e));
    }
    return binary_entropy(e);
}

KeyRateReport secret_key_rate(const SecretKeyInputs& in) {
    if (!(in.mu_z > 0.0)) {
        throw std::invalid_argument("secret_key_rate: mu_z must be positive");
    }
    for (double p : {in.p_zz, in.p_zz_mumu, in.e_zz_mumu, in.q_zz_mumu}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("secret_key_rate: probabilities must lie in [0,1]");
        }
    }
    KeyRateReport rep;
    rep.mu_z = in.mu_z;
    rep.s_zz_11_lower = in.s_zz_11_lower;
    rep.i_e = in.i_e;
    rep.q_zz_mumu = in.q_zz_mumu;
    rep.e_zz_mumu = in.e_zz_mumu;
    rep.p_zz = in.p_zz;
    rep.p_zz_mumu = in.p_zz_mumu;
    rep.f_ec = in.f_ec;
    rep.rate_raw = recompute_rate(rep);
    rep.rate = std::max(0.0, rep.rate_raw);
    return rep;
}

double recompute_rate(const KeyRateReport& r) {
    const double gain =
        r.mu_z * r.mu_z * std::exp(-2.0 * r.mu_z) * r.s_zz_11_lower * (1.0 - r.i_e);
    const double ec = r.q_zz_mumu * r.f_ec * binary_entropy(std::min(r.e_zz_mumu, 0.5));
    return r.p_zz * r.p_zz_mumu * (gain - ec);
}

}  // namespace mdiqkd
