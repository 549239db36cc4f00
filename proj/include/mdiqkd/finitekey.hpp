#pragma once

#include <map>
#include <string>
#include <vector>

#include "mdiqkd/bounds.hpp"
#include "mdiqkd/decoy.hpp"
#include "mdiqkd/model.hpp"
#include "mdiqkd/protocol.hpp"
#include "mdiqkd/security.hpp"

namespace mdiqkd {

struct FiniteKeyConfig {
    double n_pairs = 3e12;   // total transmitted pulse pairs
    double epsilon = 1e-10;  // failure probability per bound

    void validate() const;
};

/// Inverted multiplicative Chernoff interval on the expectation behind an
/// observed count: [k - sqrt(2 k b), k + b + sqrt(2 k b + b^2)] with
/// b = ln(1/epsilon), floored at 0, capped at n, divided by n.
/// Always contains k/n. Throws on k > n, k < 0, or epsilon outside (0, 1].
BoundedObservable chernoff_interval(double k, double n, double epsilon);

/// Raw tallies of one (basis pair, intensity pair) cell. The two Bell-state
/// columns are carried through from the announcement stage; estimators
/// consume their sums. Counts ingested from files are integers; tables
/// synthesized from model expectations may carry fractional values.
struct CountsCell {
    double pairs_sent = 0.0;
    double psi_plus = 0.0;
    double psi_minus = 0.0;
    double err_psi_plus = 0.0;
    double err_psi_minus = 0.0;

    double coincidences() const { return psi_plus + psi_minus; }
    double errors() const { return err_psi_plus + err_psi_minus; }
    void validate() const;
};

class CountsTable {
public:
    void put(ObsKey key, CountsCell cell) { cells_[key] = cell; }
    bool contains(ObsKey key) const { return cells_.count(key) != 0; }
    const CountsCell& at(BasisPair basis, IntensityLabel a, IntensityLabel b) const;
    const std::map<ObsKey, CountsCell>& cells() const { return cells_; }

private:
    std::map<ObsKey, CountsCell> cells_;
};

struct BoundedRecord {
    BoundedObservable q;
    BoundedObservable eq;
};

class BoundedObservableTable {
public:
    void put(ObsKey key, BoundedRecord rec) { cells_[key] = rec; }
    const BoundedRecord& at(BasisPair basis, IntensityLabel a, IntensityLabel b) const;
    bool contains(ObsKey key) const { return cells_.count(key) != 0; }
    const std::map<ObsKey, BoundedRecord>& cells() const { return cells_; }

    std::map<BasisPair, bool> flipped;

private:
    std::map<ObsKey, BoundedRecord> cells_;
};

/// Chernoff intervals for every observable. The bit-flip rule is applied at
/// the counts level first: an X/Y-family pair whose signal-signal error
/// point estimate exceeds 0.5 has err := coincidences - err applied across
/// all its cells before inversion.
BoundedObservableTable apply_fluctuations(const CountsTable& counts,
                                          const FiniteKeyConfig& config,
                                          const ProtocolConfig& protocol);

/// Bounded-table analogue of estimate_all_bases; flips were already applied.
SinglePhotonEstimates estimate_all_bases_bounded(const BoundedObservableTable& table,
                                                 const IntensitySettings& settings,
                                                 ProtocolVariant variant,
                                                 std::vector<std::string>* diagnostics);

/// Finite-size key rate: worst-case interval ends everywhere (yield lower
/// bounds, error uppers, Q and E of the key cell at their upper ends).
/// The report notes which end was used where and the accumulated failure
/// probability (number of Chernoff bounds times epsilon). `f_ec` is the
/// error-correction efficiency applied to the observed Z-basis data.
KeyRateReport finite_key_rate(const CountsTable& counts, const FiniteKeyConfig& config,
                              const ProtocolConfig& protocol, double f_ec,
                              RfiUForm form = RfiUForm::Sqrt);

/// Model-expectation counts for the active protocol: every estimator cell
/// gets pairs_sent = n_pairs * P(joint event) and coincidences/errors from
/// the exact gains. With `round_to_integers` the cells are rounded to whole
/// counts (coincidences split evenly across the two Bell states).
CountsTable expected_counts(const ProtocolConfig& protocol, const ChannelParams& channel,
                            double n_pairs, bool round_to_integers);

}  // namespace mdiqkd
