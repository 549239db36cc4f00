#pragma once

// Independent brute-force validators used by the test suites. These share no
// numerics with the library beyond primitive arithmetic: the Bessel check
// integrates the defining identity, the decoy fixtures mix an explicit yield
// grid through truncated Poisson statistics, and the coverage check samples
// real binomial data against whatever interval rule it is handed.

#include <cstdint>
#include <functional>

#include "mdiqkd/bounds.hpp"
#include "mdiqkd/model.hpp"
#include "mdiqkd/protocol.hpp"

namespace mdiqkd::oracle {

/// I0(z) = (1/2pi) \oint e^{z cos phi} dphi by trapezoidal quadrature over
/// 4096 nodes. Even in z by construction. |z| <= 30.
double i0_by_quadrature(double z);

/// Yields and error rates per photon-number pair, n, m <= 20.
struct YieldGrid {
    static constexpr int kMax = 20;
    double yield[kMax + 1][kMax + 1] = {};
    double error[kMax + 1][kMax + 1] = {};
};

/// Q^{ll'} = sum Poisson(n;l) Poisson(m;l') Y_nm, EQ with e_nm * Y_nm,
/// truncated at the grid size; every basis pair gets the same mixture.
/// Rejects intensities whose truncation tail exceeds 1e-12 of total mass.
/// `labels` lists the intensity levels to tabulate (vacuum included).
ObservableTable synthetic_decoy_fixture(const YieldGrid& grid,
                                        const IntensitySettings& settings,
                                        ProtocolVariant variant);

/// True single-photon yield and error gain of a grid.
double grid_y11(const YieldGrid& grid);
double grid_error_yield_11(const YieldGrid& grid);

/// Smooth pseudo-random grid for property tests (deterministic per seed).
YieldGrid random_grid(std::uint64_t seed);

using IntervalRule = std::function<BoundedObservable(double k, double n, double eps)>;

/// Samples binomial counts at a known success probability and returns the
/// frequency with which the true expectation escapes the interval.
double coverage_check(const IntervalRule& rule, std::uint64_t trials, double epsilon,
                      double n, double p, std::uint64_t seed);

}  // namespace mdiqkd::oracle
