#pragma once

namespace mdiqkd {

/// Modified Bessel function of the first kind, order zero.
///
/// Power series with term-ratio cutoff at 1e-16 relative. The channel model
/// only ever evaluates I0 at arguments well below 1, but the series stays
/// accurate (<= 1e-12 relative) up to |z| = 30, which the quadrature oracle
/// exercises. Even in z. Throws std::invalid_argument on non-finite input.
double bessel_i0(double z);

/// I0(z) - 1 without the leading term, accurate relative to its own
/// z^2/4 scale. The gain formulas subtract I0 values whose difference sits
/// many orders below 1; summing the series from k = 1 keeps that difference
/// meaningful at small arguments.
double bessel_i0_minus_one(double z);

}  // namespace mdiqkd
