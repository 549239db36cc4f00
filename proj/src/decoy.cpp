#include "mdiqkd/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "mdiqkd/errors.hpp"

namespace mdiqkd {

PoissonCoefficients poisson_coefficients(double lambda) {
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("poisson_coefficients: lambda must be non-negative");
    }
    const double e = std::exp(-lambda);
    return {e, lambda * e, lambda * lambda * e / 2.0};
}

namespace detail {

LowerPair m11_lower(const EstimatorCells& c, const PoissonCoefficients& d,
                    const PoissonCoefficients& s) {
    // Alice and Bob coefficients coincide (equal intensities both sides);
    // they are spelled separately to mirror the estimator's structure.
    const double a0 = d.p0, a1 = d.p1;
    const double b0 = d.p0, b1 = d.p1, b2 = d.p2;
    const double ap0 = s.p0, ap1 = s.p1;
    const double bp0 = s.p0, bp1 = s.p1, bp2 = s.p2;
    const double den = a1 * ap1 * (b1 * bp2 - bp1 * b2);
    if (!(den > 0.0)) {
        throw std::invalid_argument("single-photon bounds: b1*b'2 - b'1*b2 must be positive");
    }
    // T1 terms enter positively, T2 and the T3 block negatively; each
    // observable takes the interval end that keeps the result a lower bound.
    const double t1 = ap1 * bp2 * c.nn.lower + a1 * b2 * ap0 * c.om.lower;
    const double t1_mo = a1 * b2 * bp0 * c.mo.lower;
    const double t1_mo_alt = a1 * b2 * ap0 * c.mo.lower;
    const double t2 = a1 * b2 * c.mm.upper + a1 * b2 * ap0 * bp0 * c.oo.upper;
    const double t3_block =
        ap1 * bp2 * (a0 * c.on.upper + b0 * c.no.upper - a0 * b0 * c.oo.lower);
    return {(t1 + t1_mo - t2 - t3_block) / den, (t1 + t1_mo_alt - t2 - t3_block) / den};
}

double m11_upper(const EstimatorCells& c, const PoissonCoefficients& d) {
    const double a0 = d.p0, a1 = d.p1;
    const double b0 = d.p0, b1 = d.p1;
    const double t3 = a0 * c.on.lower + b0 * c.no.lower - a0 * b0 * c.oo.upper;
    return (c.nn.upper - t3) / (a1 * b1);
}

double m11_upper_signal(const EstimatorCells& c, const PoissonCoefficients& s) {
    const double ap0 = s.p0, ap1 = s.p1;
    const double bp0 = s.p0, bp1 = s.p1;
    const double t3p = ap0 * c.om.lower + bp0 * c.mo.lower - ap0 * bp0 * c.oo.upper;
    return (c.mm.upper - t3p) / (ap1 * bp1);
}

}  // namespace detail

namespace {

constexpr double kCrossingTolerance = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void check_decoy_settings(const IntensitySettings& settings, BasisPair basis) {
    const double mu = basis == BasisPair::ZZ && !settings.symmetric ? settings.mu_z
                                                                    : settings.mu_x;
    if (!(settings.nu_x > 0.0) || !(settings.nu_x < mu)) {
        throw std::invalid_argument("single-photon bounds: require 0 < nu < mu");
    }
}

struct CellLabels {
    IntensityLabel mu;
    IntensityLabel nu;
};

CellLabels labels_for(const IntensitySettings& settings, BasisPair basis,
                      ProtocolVariant variant) {
    if (variant == ProtocolVariant::RfiBiased || !settings.symmetric) {
        if (basis == BasisPair::ZZ) {
            throw std::invalid_argument(
                "single-photon bounds: biased protocol has no Z-basis decoy data");
        }
        return {IntensityLabel::MuX, IntensityLabel::NuX};
    }
    return {IntensityLabel::Mu, IntensityLabel::Nu};
}

EstimatorCells exact_cells(const ObservableTable& table, BasisPair basis, CellLabels l,
                           bool error_gains, bool flip) {
    const auto o = IntensityLabel::Vacuum;
    auto cell = [&](IntensityLabel a, IntensityLabel b) {
        const GainErrorRecord& rec = table.at(basis, a, b);
        double v = error_gains ? (flip ? rec.q - rec.eq : rec.eq) : rec.q;
        return BoundedObservable::exact(v);
    };
    return {cell(l.nu, l.nu), cell(l.mu, l.mu), cell(o, l.mu), cell(l.mu, o),
            cell(o, l.nu),    cell(l.nu, o),    cell(o, o)};
}

YieldBounds finish_yield_bounds(detail::LowerPair lower, double upper, BasisPair basis) {
    YieldBounds out;
    out.lower = clamp01(lower.value);
    out.lower_alt = clamp01(lower.value_alt);
    out.upper = clamp01(upper);
    if (out.lower > out.upper) {
        if (out.lower - out.upper <= kCrossingTolerance) {
            out.lower = out.upper;
        } else {
            throw EstimationError(fmt::format(
                "single-photon bounds for {} cross: lower {} > upper {}", to_string(basis),
                out.lower, out.upper));
        }
    }
    return out;
}

}  // namespace

YieldBounds single_photon_yield_bounds(const ObservableTable& table, BasisPair basis,
                                       const IntensitySettings& settings) {
    check_decoy_settings(settings, basis);
    const ProtocolVariant variant =
        settings.symmetric ? ProtocolVariant::RfiSymmetric : ProtocolVariant::RfiBiased;
    const CellLabels labels = labels_for(settings, basis, variant);
    const auto cells = exact_cells(table, basis, labels, false, false);
    const auto decoy = poisson_coefficients(settings.nu_x);
    const auto signal = poisson_coefficients(settings.mu_x);
    return finish_yield_bounds(detail::m11_lower(cells, decoy, signal),
                               detail::m11_upper(cells, decoy), basis);
}

double single_photon_error_gain_upper(const ObservableTable& table, BasisPair basis,
                                      const IntensitySettings& settings,
                                      bool use_signal_only) {
    if (use_signal_only) {
        const auto o = IntensityLabel::Vacuum;
        const IntensityLabel mz =
            settings.symmetric ? IntensityLabel::Mu : IntensityLabel::MuZ;
        auto cell = [&](IntensityLabel a, IntensityLabel b) {
            return BoundedObservable::exact(table.at(basis, a, b).eq);
        };
        EstimatorCells cells{};
        cells.mm = cell(mz, mz);
        cells.om = cell(o, mz);
        cells.mo = cell(mz, o);
        cells.oo = cell(o, o);
        return clamp01(
            detail::m11_upper_signal(cells, poisson_coefficients(settings.mu_z)));
    }
    check_decoy_settings(settings, basis);
    const ProtocolVariant variant =
        settings.symmetric ? ProtocolVariant::RfiSymmetric : ProtocolVariant::RfiBiased;
    const CellLabels labels = labels_for(settings, basis, variant);
    const auto cells = exact_cells(table, basis, labels, true, false);
    return clamp01(detail::m11_upper(cells, poisson_coefficients(settings.nu_x)));
}

namespace detail {

PairEstimate estimate_from_cells(const EstimatorCells& gain_cells,
                                 const EstimatorCells& error_cells,
                                 const PoissonCoefficients& decoy,
                                 const PoissonCoefficients& signal, bool flipped,
                                 BasisPair basis, std::vector<std::string>* diagnostics) {
    PairEstimate est;
    est.flipped = flipped;

    const auto yb = finish_yield_bounds(m11_lower(gain_cells, decoy, signal),
                                        m11_upper(gain_cells, decoy), basis);
    est.s11_lower = yb.lower;
    est.s11_upper = yb.upper;
    est.s11_lower_alt = yb.lower_alt;

    est.es11_upper = clamp01(m11_upper(error_cells, decoy));
    est.es11_lower = clamp01(m11_lower(error_cells, decoy, signal).value);

    if (est.s11_lower > 0.0) {
        est.e11_upper = clamp01(est.es11_upper / est.s11_lower);
    } else {
        est.e11_upper = 1.0;
        if (diagnostics) {
            diagnostics->push_back(fmt::format(
                "estimation failed for {}: zero single-photon yield lower bound",
                to_string(basis)));
        }
    }
    est.e11_lower = est.s11_upper > 0.0 ? clamp01(est.es11_lower / est.s11_upper) : 0.0;
    return est;
}

}  // namespace detail

namespace {

PairEstimate estimate_pair(const ObservableTable& table, BasisPair basis, CellLabels labels,
                           const PoissonCoefficients& decoy, const PoissonCoefficients& signal,
                           bool allow_flip, std::vector<std::string>* diagnostics) {
    // Flip decision comes from the signal-signal error rate of this pair.
    bool flip = false;
    if (allow_flip) {
        const GainErrorRecord& mm = table.at(basis, labels.mu, labels.mu);
        flip = mm.e.has_value() && *mm.e > 0.5;
    }
    const auto qcells = exact_cells(table, basis, labels, false, false);
    const auto ecells = exact_cells(table, basis, labels, true, flip);
    return detail::estimate_from_cells(qcells, ecells, decoy, signal, flip, basis,
                                       diagnostics);
}

}  // namespace

SinglePhotonEstimates estimate_all_bases(const ObservableTable& table,
                                         const IntensitySettings& settings,
                                         ProtocolVariant variant,
                                         std::vector<std::string>* diagnostics) {
    settings.validate();
    const auto decoy = poisson_coefficients(settings.nu_x);
    const auto signal = poisson_coefficients(settings.mu_x);
    SinglePhotonEstimates out;

    const CellLabels xy_labels = variant == ProtocolVariant::RfiBiased
                                     ? CellLabels{IntensityLabel::MuX, IntensityLabel::NuX}
                                     : CellLabels{IntensityLabel::Mu, IntensityLabel::Nu};
    for (BasisPair basis : kCorrelationPairs) {
        out.of(basis) =
            estimate_pair(table, basis, xy_labels, decoy, signal, true, diagnostics);
    }

    if (variant == ProtocolVariant::RfiBiased) {
        // No Z decoy: the yield bound is borrowed from the X basis, the error
        // gain comes from the signal-only form.
        PairEstimate zz;
        zz.s11_lower = out.xx.s11_lower;
        zz.s11_upper = out.xx.s11_upper;
        zz.s11_lower_alt = out.xx.s11_lower_alt;
        zz.es11_upper = single_photon_error_gain_upper(table, BasisPair::ZZ, settings, true);
        zz.es11_lower = 0.0;
        if (zz.s11_lower > 0.0) {
            zz.e11_upper = std::clamp(zz.es11_upper / zz.s11_lower, 0.0, 1.0);
        } else {
            zz.e11_upper = 1.0;
            if (diagnostics) {
                diagnostics->push_back(
                    "estimation failed for ZZ: zero single-photon yield lower bound");
            }
        }
        zz.e11_lower = 0.0;
        out.zz = zz;
        if (diagnostics) {
            diagnostics->push_back("ZZ yield bounds taken from the X-basis estimate");
        }
    } else {
        const CellLabels z_labels{IntensityLabel::Mu, IntensityLabel::Nu};
        out.zz = estimate_pair(table, BasisPair::ZZ, z_labels, decoy, signal, false,
                               diagnostics);
    }
    return out;
}

}  // namespace mdiqkd
