"""Secret key rates for original and reference-frame-independent MDI-QKD.

Thin python layer over the C++ core. Configuration dictionaries accept the
same keys as the CLI config files (mu, nu, mu_z, beta_deg, dist_a_km, ...).
"""

from ._core import (
    __version__,
    bessel_i0,
    binary_entropy,
    c_quantity,
    chernoff_interval,
    eve_information_mdi,
    eve_information_rfi,
    key_rate,
    key_rate_from_counts,
    link_efficiency,
    optimize,
    pair_observables,
    run_scan,
    synthesize_counts,
)

__all__ = [
    "__version__",
    "bessel_i0",
    "binary_entropy",
    "c_quantity",
    "chernoff_interval",
    "eve_information_mdi",
    "eve_information_rfi",
    "key_rate",
    "key_rate_from_counts",
    "link_efficiency",
    "optimize",
    "pair_observables",
    "run_scan",
    "synthesize_counts",
]
