#include "mdiqkd/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace mdiqkd {

std::string to_string(BasisPair b) {
    switch (b) {
        case BasisPair::ZZ: return "ZZ";
        case BasisPair::XX: return "XX";
        case BasisPair::YY: return "YY";
        case BasisPair::XY: return "XY";
        case BasisPair::YX: return "YX";
    }
    throw std::logic_error("unreachable basis pair");
}

std::string to_string(IntensityLabel l) {
    switch (l) {
        case IntensityLabel::Mu: return "mu";
        case IntensityLabel::Nu: return "nu";
        case IntensityLabel::MuZ: return "mu_z";
        case IntensityLabel::MuX: return "mu_x";
        case IntensityLabel::NuX: return "nu_x";
        case IntensityLabel::Vacuum: return "o";
    }
    throw std::logic_error("unreachable intensity label");
}

std::string to_string(ProtocolVariant v) {
    switch (v) {
        case ProtocolVariant::RfiSymmetric: return "rfi_symmetric";
        case ProtocolVariant::OriginalSymmetric: return "original_symmetric";
        case ProtocolVariant::RfiBiased: return "rfi_biased";
    }
    throw std::logic_error("unreachable protocol variant");
}

BasisPair basis_pair_from_string(const std::string& s) {
    for (BasisPair b : kAllBasisPairs) {
        if (to_string(b) == s) return b;
    }
    throw std::invalid_argument(fmt::format("unknown basis pair '{}'", s));
}

IntensityLabel intensity_label_from_string(const std::string& s) {
    for (IntensityLabel l : {IntensityLabel::Mu, IntensityLabel::Nu, IntensityLabel::MuZ,
                             IntensityLabel::MuX, IntensityLabel::NuX, IntensityLabel::Vacuum}) {
        if (to_string(l) == s) return l;
    }
    throw std::invalid_argument(fmt::format("unknown intensity label '{}'", s));
}

ProtocolVariant variant_from_string(const std::string& s) {
    for (ProtocolVariant v : {ProtocolVariant::RfiSymmetric, ProtocolVariant::OriginalSymmetric,
                              ProtocolVariant::RfiBiased}) {
        if (to_string(v) == s) return v;
    }
    throw std::invalid_argument(fmt::format("unknown protocol variant '{}'", s));
}

MisalignmentAngle MisalignmentAngle::from_degrees(double deg) {
    return MisalignmentAngle{deg * std::numbers::pi / 180.0};
}

double MisalignmentAngle::degrees() const { return rad * 180.0 / std::numbers::pi; }

double IntensitySettings::value_of(IntensityLabel l) const {
    switch (l) {
        case IntensityLabel::Mu: return mu_x;
        case IntensityLabel::MuZ: return mu_z;
        case IntensityLabel::MuX: return mu_x;
        case IntensityLabel::Nu: return nu_x;
        case IntensityLabel::NuX: return nu_x;
        case IntensityLabel::Vacuum: return 0.0;
    }
    throw std::logic_error("unreachable intensity label");
}

void IntensitySettings::validate() const {
    if (!(mu_z > 0.0) || !(mu_x > 0.0)) {
        throw std::invalid_argument("intensities: signal intensities must be positive");
    }
    if (!(nu_x > 0.0) || !(nu_x < mu_x)) {
        throw std::invalid_argument("intensities: decoy must satisfy 0 < nu < mu");
    }
    if (symmetric && mu_z != mu_x) {
        throw std::invalid_argument("intensities: symmetric mode requires mu_z == mu_x");
    }
}

void BasisProbabilities::validate() const {
    if (!(p_z > 0.0 && p_z < 1.0) || !(p_x > 0.0 && p_x < 1.0) ||
        !(p_x_signal > 0.0 && p_x_signal < 1.0)) {
        throw std::invalid_argument("probabilities: p_z, p_x, p_x_signal must lie in (0,1)");
    }
    if (!(vacuum() > 0.0)) {
        throw std::invalid_argument("probabilities: p_z + 2*p_x must leave room for vacuum");
    }
}

void ProtocolConfig::validate() const {
    intensities.validate();
    if (variant == ProtocolVariant::RfiBiased) {
        probabilities.validate();
    }
    if (!(p_zz >= 0.0 && p_zz <= 1.0) || !(p_zz_mumu >= 0.0 && p_zz_mumu <= 1.0)) {
        throw std::invalid_argument("protocol: probability prefactors must lie in [0,1]");
    }
    if (!std::isfinite(beta.rad)) {
        throw std::invalid_argument("protocol: beta must be finite");
    }
}

IntensityLabel ProtocolConfig::signal_label() const {
    return variant == ProtocolVariant::RfiBiased ? IntensityLabel::MuX : IntensityLabel::Mu;
}

IntensityLabel ProtocolConfig::decoy_label() const {
    return variant == ProtocolVariant::RfiBiased ? IntensityLabel::NuX : IntensityLabel::Nu;
}

IntensityLabel ProtocolConfig::z_signal_label() const {
    return variant == ProtocolVariant::RfiBiased ? IntensityLabel::MuZ : IntensityLabel::Mu;
}

}  // namespace mdiqkd
