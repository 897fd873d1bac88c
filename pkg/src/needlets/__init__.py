"""Needlet polyspectra on the sphere.

Band-limited isotropic Gaussian field simulation, exact-cubature evaluation
of the needlet polyspectra and excursion measure, high-frequency limit
constants by quadrature, and Monte Carlo verification of the variance
limits and CLT rate diagnostics.
"""

from .asymptotics import (
    AsymptoticConstant,
    c2,
    c3_bessel,
    c3_wigner,
    c4,
    cq_bessel,
    legendre_bessel_limit_check,
    variance_exact,
)
from .cubature import (
    GaussLegendreRule,
    SphereRule,
    gauss_legendre,
    integrate_sphere,
    sphere_rule_for_degree,
)
from .fieldsim import (
    FieldOnGrid,
    HarmonicCoeffs,
    empirical_correlation,
    sample_alm,
    spherical_harmonic,
    synthesize_beta,
)
from .mcharness import (
    ExperimentConfig,
    McSummary,
    cumulant_ratio_table,
    excursion_clt_table,
    ks_distance,
    kstat_cum4,
    run_experiment,
    wasserstein1_empirical,
)
from .model import (
    BandProfile,
    NeedletWindow,
    PowerSpectrum,
    band_profile,
    band_scaling_limit,
    rho_tilde,
    spectrum_eval,
    window_eval,
)
from .polyspectra import (
    ExcursionSample,
    PolyspectrumSample,
    empirical_measure,
    polyspectrum,
    truncated_expansion,
)
from .specfun import (
    HilbDecomposition,
    bessel_j0,
    gaussian_cdf,
    gaussian_pdf,
    hermite_eval,
    hilb_decompose,
    indicator_hermite_coeff,
    legendre_eval,
)
from .wigner import (
    TripleIndex,
    wigner3j_scaled_limit,
    wigner3j_zero_sq,
    wigner3j_zero_sq_batch,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticConstant", "BandProfile", "ExcursionSample",
    "ExperimentConfig", "FieldOnGrid", "GaussLegendreRule",
    "HarmonicCoeffs", "HilbDecomposition", "McSummary", "NeedletWindow",
    "PolyspectrumSample", "PowerSpectrum", "SphereRule", "TripleIndex",
    "band_profile", "band_scaling_limit", "bessel_j0", "c2", "c3_bessel",
    "c3_wigner", "c4", "cq_bessel", "cumulant_ratio_table",
    "empirical_correlation", "empirical_measure", "excursion_clt_table",
    "gauss_legendre", "gaussian_cdf", "gaussian_pdf", "hermite_eval",
    "hilb_decompose", "indicator_hermite_coeff", "integrate_sphere",
    "ks_distance", "kstat_cum4", "legendre_bessel_limit_check",
    "legendre_eval", "polyspectrum", "rho_tilde", "run_experiment",
    "sample_alm", "spectrum_eval", "sphere_rule_for_degree",
    "spherical_harmonic", "synthesize_beta", "truncated_expansion",
    "variance_exact", "wasserstein1_empirical", "wigner3j_scaled_limit",
    "wigner3j_zero_sq", "wigner3j_zero_sq_batch", "window_eval",
]
