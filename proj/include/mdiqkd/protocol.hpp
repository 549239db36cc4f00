#pragma once

#include <array>
#include <string>

namespace mdiqkd {

enum class ProtocolVariant {
    RfiSymmetric,       // three-intensity symmetric, RFI security bound
    OriginalSymmetric,  // three-intensity symmetric, I_E = H(e_XX^11U)
    RfiBiased,          // four-intensity biased bases (signal-only Z)
};

enum class Mode { Asymptotic, Finite };

enum class BasisPair { ZZ, XX, YY, XY, YX };

inline constexpr std::array<BasisPair, 5> kAllBasisPairs = {
    BasisPair::ZZ, BasisPair::XX, BasisPair::YY, BasisPair::XY, BasisPair::YX};

/// The X/Y-family pairs entering the quantity C.
inline constexpr std::array<BasisPair, 4> kCorrelationPairs = {
    BasisPair::XX, BasisPair::YY, BasisPair::XY, BasisPair::YX};

/// Intensity level labels. The symmetric three-intensity protocol uses
/// {mu, nu, o}; the biased four-intensity protocol uses {mu_z, mu_x, nu_x, o}.
enum class IntensityLabel { Mu, Nu, MuZ, MuX, NuX, Vacuum };

std::string to_string(BasisPair b);
std::string to_string(IntensityLabel l);
std::string to_string(ProtocolVariant v);
BasisPair basis_pair_from_string(const std::string& s);
IntensityLabel intensity_label_from_string(const std::string& s);
ProtocolVariant variant_from_string(const std::string& s);

/// Relative reference-frame deviation. Stored in radians; only the combined
/// deviation enters anywhere, so the two per-party angles are not modeled.
struct MisalignmentAngle {
    double rad = 0.0;

    static MisalignmentAngle from_degrees(double deg);
    double degrees() const;
};

/// Mean photon numbers per protocol role. Symmetric mode collapses
/// mu_z = mu_x = mu and uses nu_x as nu. Vacuum is exactly zero.
struct IntensitySettings {
    double mu_z = 0.67;
    double mu_x = 0.67;
    double nu_x = 0.01;
    bool symmetric = true;

    double value_of(IntensityLabel l) const;
    void validate() const;  // throws std::invalid_argument
};

/// Per-side sampling probabilities of the biased protocol: Z w.p. p_z
/// (always signal mu_z), X and Y each w.p. p_x (signal mu_x w.p. p_x_signal,
/// decoy nu_x otherwise), vacuum with the remainder 1 - p_z - 2 p_x.
struct BasisProbabilities {
    double p_z = 0.5;
    double p_x = 0.2;
    double p_x_signal = 0.5;

    double vacuum() const { return 1.0 - p_z - 2.0 * p_x; }
    void validate() const;
};

struct ProtocolConfig {
    ProtocolVariant variant = ProtocolVariant::RfiSymmetric;
    IntensitySettings intensities;
    BasisProbabilities probabilities;
    MisalignmentAngle beta;
    // Probability prefactors of the key-rate formula in asymptotic mode.
    // The biased finite pipeline derives them from `probabilities` instead.
    double p_zz = 1.0;
    double p_zz_mumu = 1.0;

    void validate() const;
    /// Signal and decoy labels used by the X/Y-family estimators.
    IntensityLabel signal_label() const;
    IntensityLabel decoy_label() const;
    /// Signal label of the Z basis (Mu in symmetric mode, MuZ in biased).
    IntensityLabel z_signal_label() const;
};

}  // namespace mdiqkd
