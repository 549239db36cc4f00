#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mdiqkd/protocol.hpp"

namespace mdiqkd {

/// Detector and fiber parameters, plus the two arm lengths to the relay.
struct ChannelParams {
    double eta_d = 0.125;           // detector efficiency
    double p_d = 1.2e-6;            // dark count probability per gate
    double e_d = 0.005;             // misalignment-error probability
    double alpha_db_per_km = 0.195; // fiber attenuation
    double f_ec = 1.16;             // error-correction efficiency
    double dist_a_km = 0.0;         // Alice -> relay
    double dist_b_km = 0.0;         // Bob -> relay

    void validate() const;  // throws std::invalid_argument
};

enum class Side { A, B };

/// eta = eta_d * 10^(-alpha * dist / 10)
double link_efficiency(const ChannelParams& params, Side side);

struct IntensityPair {
    double lambda_a = 0.0;
    double lambda_b = 0.0;
};

/// Gain q and error gain eq of one (basis pair, intensity pair) cell.
/// The error rate e = eq/q is absent when q == 0 so downstream estimators
/// can reject the cell instead of reading a silent zero.
struct GainErrorRecord {
    double q = 0.0;
    double eq = 0.0;
    std::optional<double> e;
};

/// Intermediate quantities shared by all basis-pair expressions.
struct ModelIntermediates {
    double mu_prime;     // eta_A*lambda_A + eta_B*lambda_B
    double x;            // sqrt(eta_A*lambda_A*eta_B*lambda_B)/2
    double y;            // (1-P_d)*exp(-mu'/4)
    double q_correct;    // ZZ coincidence term without bit error
    double q_erroneous;  // ZZ dark-count coincidence term
    double b_arg;        // 2x cos(beta)
    double e_arg;        // 2x sin(beta)
    double theta;        // sqrt(2) x (cos(beta) + sin(beta))
    double xi;           // sqrt(2) x (cos(beta) - sin(beta))
};

ModelIntermediates model_intermediates(double eta_a, double eta_b, IntensityPair intensities,
                                       MisalignmentAngle beta, double p_d);

/// Closed-form gain and error gain for weak coherent pulses through the
/// symmetric lossy channel into the two-Bell-state measurement.
/// For ZZ the angle plays no role. YY mirrors XX; the YX gain equals the
/// XY gain while its error gain uses the swapped interference terms.
GainErrorRecord pair_observables(const ChannelParams& params, MisalignmentAngle beta,
                                 IntensityPair intensities, BasisPair basis);

struct ObsKey {
    BasisPair basis;
    IntensityLabel a;
    IntensityLabel b;
    auto operator<=>(const ObsKey&) const = default;
};

/// Gains and error gains indexed by (basis pair, intensity-label pair).
class ObservableTable {
public:
    void put(ObsKey key, GainErrorRecord rec) { cells_[key] = rec; }
    bool contains(ObsKey key) const { return cells_.count(key) != 0; }
    /// Throws ConfigError naming the missing cell.
    const GainErrorRecord& at(BasisPair basis, IntensityLabel a, IntensityLabel b) const;
    const std::map<ObsKey, GainErrorRecord>& cells() const { return cells_; }

private:
    std::map<ObsKey, GainErrorRecord> cells_;
};

/// Evaluates the model over every cell the active protocol variant needs,
/// including single-sided and double vacuum entries.
ObservableTable observable_table(const ProtocolConfig& config, const ChannelParams& params);

/// The intensity labels each side may emit under a variant, vacuum included.
std::vector<IntensityLabel> intensity_labels_for(ProtocolVariant variant, BasisPair basis);

}  // namespace mdiqkd
