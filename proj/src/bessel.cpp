#include "mdiqkd/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqkd {

double bessel_i0(double z) {
    if (!std::isfinite(z)) {
        throw std::invalid_argument("bessel_i0: argument must be finite");
    }
    const double q = z * z / 4.0;
    double term = 1.0;
    double sum = 1.0;
    // All terms positive, so no cancellation; at |z| = 30 the series needs
    // ~80 terms to fall below the cutoff.
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term <= sum * 1e-16) {
            break;
        }
    }
    return sum;
}

double bessel_i0_minus_one(double z) {
    if (!std::isfinite(z)) {
        throw std::invalid_argument("bessel_i0_minus_one: argument must be finite");
    }
    const double q = z * z / 4.0;
    double term = q;
    double sum = q;
    for (int k = 2; k < 400; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term <= sum * 1e-16) {
            break;
        }
    }
    return sum;
}

}  // namespace mdiqkd
