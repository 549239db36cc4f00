#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdiqkd/protocol.hpp"

namespace mdiqkd {

/// Binary Shannon entropy, H(0) = H(1) = 0 by continuity.
/// Throws std::invalid_argument outside [0,1].
double binary_entropy(double x);

/// Single-photon bounds for one basis pair. Error-rate bounds divide the
/// error-gain bound by the opposite yield bound. `flipped` records whether
/// the bit-flip rule was applied to this pair's data before estimating.
/// `s11_lower_alt` evaluates the numerator with the printed coefficient of
/// the M^{mu,o} term (a'_0 instead of b'_0); identical whenever the two
/// sides use equal intensities, kept for the audit trail.
struct PairEstimate {
    double s11_lower = 0.0;
    double s11_upper = 0.0;
    double es11_lower = 0.0;
    double es11_upper = 0.0;
    double e11_lower = 0.0;
    double e11_upper = 0.0;
    bool flipped = false;
    double s11_lower_alt = 0.0;
};

struct SinglePhotonEstimates {
    PairEstimate zz;
    PairEstimate xx;
    PairEstimate yy;
    PairEstimate xy;
    PairEstimate yx;

    const PairEstimate& of(BasisPair b) const;
    PairEstimate& of(BasisPair b);
    /// e11 upper bounds of the four X/Y-family pairs, in XX, YY, XY, YX order.
    std::array<double, 4> correlation_error_uppers() const;
};

/// C = sum over {XX, YY, XY, YX} of (1 - 2*min(0.5, e^{11,U}))^2.
/// Inputs are post-flip upper bounds; residual values above 0.5 clamp to 0.5.
/// Throws EstimationError on missing (NaN) or out-of-range bounds.
double c_quantity(const std::array<double, 4>& e11_uppers);

/// Which u the reference-frame-independent bound uses.
///   Sqrt:   u = min[sqrt(C/2)/(1-e), 1]   (reproduces the published values)
///   Linear: u = min[(C/2)/(1-e), 1]
enum class RfiUForm { Sqrt, Linear };

struct SecurityQuantities {
    double c_value = 0.0;
    double u = 0.0;
    double v = 0.0;
    double i_e = 0.0;
};

/// Eve's information bound of the RFI analysis:
/// I_E = (1-e) H[(1+u)/2] + e H[(1+v)/2], v = sqrt(max(0, C/2 - (1-e)^2 u^2))/e
/// clamped to [0,1]; the e -> 0 limit is H[(1+u)/2].
/// Preconditions: e in [0, 0.5], C in [0, 4]; violations throw.
SecurityQuantities eve_information_rfi_full(double e_zz_11_upper, double c_value,
                                            RfiUForm form = RfiUForm::Sqrt);
double eve_information_rfi(double e_zz_11_upper, double c_value,
                           RfiUForm form = RfiUForm::Sqrt);

/// Original-protocol bound I_E = H(e_XX^{11,U}), e in [0, 0.5].
double eve_information_mdi(double e_xx_11_upper);

struct SecretKeyInputs {
    double mu_z = 0.0;
    double s_zz_11_lower = 0.0;
    double i_e = 0.0;
    double q_zz_mumu = 0.0;
    double e_zz_mumu = 0.0;
    double p_zz = 1.0;
    double p_zz_mumu = 1.0;
    double f_ec = 1.16;
};

/// Everything needed to audit a rate. `rate` is clamped at zero; `rate_raw`
/// is the unclamped value. recompute_rate() re-derives rate_raw from the
/// echoed scalars.
struct KeyRateReport {
    double rate = 0.0;
    double rate_raw = 0.0;
    double mu_z = 0.0;
    double s_zz_11_lower = 0.0;
    double i_e = 0.0;
    double q_zz_mumu = 0.0;
    double e_zz_mumu = 0.0;
    double p_zz = 1.0;
    double p_zz_mumu = 1.0;
    double f_ec = 1.16;
    std::string variant;
    std::string mode;
    std::optional<SecurityQuantities> security;     // RFI pipelines
    std::optional<double> i_e_alternate;            // the other u-form, for audit
    std::optional<SinglePhotonEstimates> estimates;
    std::optional<double> n_pairs;
    std::optional<double> epsilon;
    std::optional<std::uint64_t> bound_count;       // Chernoff bounds consumed
    std::optional<double> failure_probability_total;
    std::vector<std::string> notes;                 // flips, interval ends used
};

/// R = P_zz P_zz^{mumu} { mu^2 e^{-2mu} S^{11,L} [1 - I_E] - Q f H(E) }.
KeyRateReport secret_key_rate(const SecretKeyInputs& in);

double recompute_rate(const KeyRateReport& report);

}  // namespace mdiqkd
