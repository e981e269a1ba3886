"""Numerical harmonic analysis on rank-one symmetric and Damek-Ricci spaces."""

from .errors import NumericsError
from .lorentz import (
    LorentzEstimate,
    PolarGridFunction,
    RadialGridFunction,
    a_pq,
    distribution_function,
    lorentz_norm,
    m_p,
    radialize,
    rearrangement,
)
from .poisson import (
    NRadialBoundary,
    PoissonField,
    ZonalBoundary,
    mean_value_check,
    mode_ode_residual,
    n_transform_radial,
    normalize_C,
    poisson_kernel_N,
    poisson_transform_KM,
    sphere_area,
    sup_envelope,
    zonal_mode_profiles,
)
from .roe import (
    EigenCombination,
    NormSpec,
    RoeConfig,
    RoeReport,
    eigen_residual,
    euclid_roe_demo,
    laplacian_power,
    roe_verify,
)
from .space import (
    SpaceError,
    SpaceParams,
    ball_volume,
    damek_ricci,
    density,
    gamma_p,
    make_space,
    real_hyperbolic,
    space_id,
    symmetric_rank_one,
)
from .spectrum import (
    NoSolutionError,
    SharpnessPair,
    SpectrumRegion,
    counterexample_pair,
    equal_modulus_solve,
    lambda_map,
    min_modulus_on_spectrum,
    one_sided_pair,
    spectrum_contains,
)
from .spherical import CFit, SpectralPoint, envelope_check, fit_c, phi_n_integral, phi_ode

__version__ = "0.1.0"

__all__ = [
    "CFit",
    "EigenCombination",
    "LorentzEstimate",
    "NRadialBoundary",
    "NoSolutionError",
    "NormSpec",
    "NumericsError",
    "PoissonField",
    "PolarGridFunction",
    "RadialGridFunction",
    "RoeConfig",
    "RoeReport",
    "SharpnessPair",
    "SpaceError",
    "SpaceParams",
    "SpectralPoint",
    "SpectrumRegion",
    "ZonalBoundary",
    "a_pq",
    "ball_volume",
    "counterexample_pair",
    "damek_ricci",
    "density",
    "distribution_function",
    "eigen_residual",
    "envelope_check",
    "equal_modulus_solve",
    "euclid_roe_demo",
    "fit_c",
    "gamma_p",
    "lambda_map",
    "laplacian_power",
    "lorentz_norm",
    "m_p",
    "make_space",
    "mean_value_check",
    "min_modulus_on_spectrum",
    "mode_ode_residual",
    "n_transform_radial",
    "normalize_C",
    "one_sided_pair",
    "phi_n_integral",
    "phi_ode",
    "poisson_kernel_N",
    "poisson_transform_KM",
    "radialize",
    "rearrangement",
    "roe_verify",
    "space_id",
    "spectrum_contains",
    "sphere_area",
    "sup_envelope",
    "symmetric_rank_one",
    "zonal_mode_profiles",
]
