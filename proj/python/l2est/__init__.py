"""Adaptive estimation of the L2 norm of a multivariate probability density."""

from ._l2est import (  # noqa: F401
    __version__,
    adaptive_rate,
    alpha_m,
    density_info,
    density_names,
    estimate,
    eval_t,
    grid,
    kappa,
    kernel_info,
    optimal_bandwidth,
    oracle_star_risk,
    rate_exponent,
    rate_exponent_isotropic,
    sample_density,
    varpi,
)
