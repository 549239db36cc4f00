#pragma once

namespace mdiqkd {

/// Bounded expected rate (probability per pulse pair), 0 <= lower <= upper <= 1.
/// Degenerate intervals (lower == upper) carry exact asymptotic values, which
/// lets the decoy estimator serve both the exact and the fluctuation paths.
struct BoundedObservable {
    double lower = 0.0;
    double upper = 0.0;

    static BoundedObservable exact(double v) { return {v, v}; }
};

}  // namespace mdiqkd
