#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mdiqkd/finitekey.hpp"
#include "mdiqkd/model.hpp"
#include "mdiqkd/protocol.hpp"

namespace mdiqkd {

/// Free parameters of the key-rate objective. Symmetric variants optimize
/// the tied signal intensity (mu_z = mu_x) and the decoy only; the biased
/// protocol optimizes all six coordinates.
struct ParameterVector {
    double mu_z = 0.4;
    double mu_x = 0.3;
    double nu_x = 0.05;
    double p_z = 0.5;
    double p_x = 0.2;
    double p_x_signal = 0.5;

    double& coord(int i);
    double coord(int i) const;
    static constexpr int kCount = 6;
};

/// Box bounds per coordinate. Pinning a coordinate (equal lower and upper)
/// removes it from the search.
struct ParameterBounds {
    ParameterVector lower;
    ParameterVector upper;

    static ParameterBounds defaults(ProtocolVariant variant, Mode mode);
};

struct OptimizationResult {
    ParameterVector best;
    double best_rate = 0.0;      // clamped at zero
    double best_rate_raw = 0.0;  // unclamped objective value
    std::uint64_t evaluations = 0;
    bool converged = false;
    bool zero_rate = false;  // no start produced a positive rate
    std::vector<std::pair<ParameterVector, double>> trace;  // improving steps
};

struct ObjectiveConfig {
    ProtocolConfig protocol;  // template; intensities/probabilities overwritten
    ChannelParams channel;
    FiniteKeyConfig finite;
    Mode mode = Mode::Finite;
    RfiUForm form = RfiUForm::Sqrt;
};

/// Applies a parameter vector onto a protocol template.
ProtocolConfig apply_parameters(const ProtocolConfig& base, const ParameterVector& p);

/// Derivative-free multi-start search: pattern-style coordinate descent with
/// adaptive step shrink from 16 deterministic starts (structured anchors
/// plus a seeded quasi-random sequence). Candidate moves of one iteration
/// are independent and compared against a snapshot, so evaluation order
/// cannot change the outcome; the whole run is reproducible given the seed.
OptimizationResult optimize_parameters(const ObjectiveConfig& config,
                                       const ParameterBounds& bounds, std::uint64_t seed);

}  // namespace mdiqkd
