#pragma once

#include <string>
#include <vector>

#include "mdiqkd/bounds.hpp"
#include "mdiqkd/model.hpp"
#include "mdiqkd/protocol.hpp"
#include "mdiqkd/security.hpp"

namespace mdiqkd {

/// Poisson photon-number weights lambda^k e^{-lambda} / k! for k = 0, 1, 2.
struct PoissonCoefficients {
    double p0 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
};

PoissonCoefficients poisson_coefficients(double lambda);

struct YieldBounds {
    double lower = 0.0;
    double upper = 0.0;
    /// Numerator variant using the printed a'_0 coefficient on the M^{mu,o}
    /// term instead of the symmetric b'_0; equal under equal intensities.
    double lower_alt = 0.0;
};

/// The seven observables one two-decoy estimate consumes, as bounded rates.
/// nn = (nu,nu), mm = (mu,mu), om/mo = vacuum-signal, on/no = vacuum-decoy,
/// oo = double vacuum.
struct EstimatorCells {
    BoundedObservable nn, mm, om, mo, on, no, oo;
};

namespace detail {

/// Worst-case low end of the two-decoy single-photon lower bound
/// (numerator terms take the interval end matching their sign).
/// Returns {value, value_with_printed_t1_coefficient}.
struct LowerPair {
    double value;
    double value_alt;
};
LowerPair m11_lower(const EstimatorCells& cells, const PoissonCoefficients& decoy,
                    const PoissonCoefficients& signal);

/// Worst-case high end of the decoy-data upper bound (M^{nn} - T3)/(a1 b1).
double m11_upper(const EstimatorCells& cells, const PoissonCoefficients& decoy);

/// Worst-case high end of the signal-only upper bound
/// (M^{mm} - T3')/(a'1 b'1); only mm, om, mo, oo cells are read.
double m11_upper_signal(const EstimatorCells& cells, const PoissonCoefficients& signal);

/// Shared by the exact and the fluctuation paths: turns one pair's gain and
/// (post-flip) error-gain cells into a PairEstimate.
PairEstimate estimate_from_cells(const EstimatorCells& gain_cells,
                                 const EstimatorCells& error_cells,
                                 const PoissonCoefficients& decoy,
                                 const PoissonCoefficients& signal, bool flipped,
                                 BasisPair basis, std::vector<std::string>* diagnostics);

}  // namespace detail

/// Lower/upper bounds on the single-photon yield of one basis pair from the
/// two-decoy observables, clamped to [0,1]. Crossings within 1e-12 snap the
/// lower bound down to the upper; larger crossings throw EstimationError.
/// Preconditions: nu < mu (else std::invalid_argument). The biased protocol
/// has no Z-basis decoy, so BasisPair::ZZ is rejected there.
YieldBounds single_photon_yield_bounds(const ObservableTable& table, BasisPair basis,
                                       const IntensitySettings& settings);

/// Upper bound on the single-photon error gain. `use_signal_only` selects the
/// signal-state form for the Z basis of the biased protocol. The table is
/// consumed as given; callers apply the bit-flip rule beforehand.
double single_photon_error_gain_upper(const ObservableTable& table, BasisPair basis,
                                      const IntensitySettings& settings, bool use_signal_only);

/// Full estimation for the active variant: per-pair yield bounds, error-gain
/// bounds with the flip rule (a pair whose signal-signal error rate exceeds
/// 0.5 has its error gains replaced by q - eq first), and error-rate bounds
/// e^{11L(U)} = eS^{11L(U)} / S^{11U(L)}. The biased protocol takes the Z
/// yield from the X-basis bound (single-photon yields are basis-independent)
/// and the Z error gain from the signal-only form. A vanishing yield lower
/// bound makes that pair's e11 upper vacuous (1.0) instead of failing, so
/// all-zero data degrades to a zero rate with diagnostics.
SinglePhotonEstimates estimate_all_bases(const ObservableTable& table,
                                         const IntensitySettings& settings,
                                         ProtocolVariant variant,
                                         std::vector<std::string>* diagnostics = nullptr);

}  // namespace mdiqkd
