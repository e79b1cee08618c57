"""Gaussian-process reconstruction of 2D turbulent vorticity fields.

Stationary priors are built from power-law spectral densities on the
periodic grid (with RBF and Matern baselines), sampled by FFT, and
conditioned on sparse noisy pointwise observations.
"""

__version__ = "0.1.0"

from .spectral_field import (  # noqa: E402
    GridSpec,
    PowerLawFit,
    RealField,
    SpectralField,
    SpectrumEstimate,
    biot_savart,
    biot_savart_spectral,
    curl,
    default_fit_range,
    fit_power_law,
    radial_spectrum,
    radial_spectrum_of_power,
    sample_gaussian_field,
    to_physical,
    to_spectral,
)
from .kernels import (  # noqa: E402
    FactorizationError,
    KernelSpec,
    KernelTable,
    PhysicsParams,
    SpectralDensity,
    build_kernel_table,
    check_admissible,
    direct_kernel_sum,
    forcing_to_alpha,
    gram_matrix,
    spectral_density,
    velocity_spectral_covariance,
)
from .gp_inference import (  # noqa: E402
    ObservationSet,
    Posterior,
    credible_interval,
    energy_variance,
    fit_posterior,
    greedy_sensor_placement,
    log_marginal_likelihood,
    select_hyperparameter,
)
from .experiments import (  # noqa: E402
    AlphaSpectrumResult,
    SweepPoint,
    SweepResult,
    TrialConfig,
    TrialResult,
    VortexParams,
    derive_seed,
    generate_cht_truth,
    generate_vortex_truth,
    observe,
    run_comparison,
    run_trial,
    spectral_validation,
    sweep_alpha,
    sweep_density,
)

__all__ = [
    "__version__",
    "GridSpec",
    "RealField",
    "SpectralField",
    "SpectrumEstimate",
    "PowerLawFit",
    "to_spectral",
    "to_physical",
    "sample_gaussian_field",
    "biot_savart",
    "biot_savart_spectral",
    "curl",
    "radial_spectrum",
    "radial_spectrum_of_power",
    "fit_power_law",
    "default_fit_range",
    "KernelSpec",
    "KernelTable",
    "SpectralDensity",
    "PhysicsParams",
    "FactorizationError",
    "spectral_density",
    "build_kernel_table",
    "direct_kernel_sum",
    "gram_matrix",
    "velocity_spectral_covariance",
    "forcing_to_alpha",
    "check_admissible",
    "ObservationSet",
    "Posterior",
    "fit_posterior",
    "log_marginal_likelihood",
    "select_hyperparameter",
    "credible_interval",
    "energy_variance",
    "greedy_sensor_placement",
    "TrialConfig",
    "TrialResult",
    "VortexParams",
    "SweepPoint",
    "SweepResult",
    "AlphaSpectrumResult",
    "derive_seed",
    "generate_cht_truth",
    "generate_vortex_truth",
    "observe",
    "run_trial",
    "run_comparison",
    "sweep_alpha",
    "sweep_density",
    "spectral_validation",
]
