"""Joint law of position, occupation time and local time for sticky Brownian motion."""
from .errors import DomainError, NumericalError, ResourceError, SupportError
from .kernels import (convolve_hitting, gauss_kernel, hitting_density, killed_kernel,
                      laplace_G, laplace_H)
from .laplace import (DualTriple, bm_transform, forward_transform, j_identities,
                      sbm_transform, solve_ode_constants)
from .laws import (StickyParams, atom_masses, bivariate_from_x, bivariate_reflected,
                   position_marginal, trivariate_from_x, trivariate_from_zero)
from .simulate import (RngSpec, local_time_estimate, sample_bm_path, sample_sbm_batch,
                       time_change_to_sbm)
from .stats import VerificationReport, atom_fraction, ks_statistic

__version__ = "0.1.0"

__all__ = [
    "DomainError", "NumericalError", "ResourceError", "SupportError",
    "convolve_hitting", "gauss_kernel", "hitting_density", "killed_kernel",
    "laplace_G", "laplace_H",
    "DualTriple", "bm_transform", "forward_transform", "j_identities",
    "sbm_transform", "solve_ode_constants",
    "StickyParams", "atom_masses", "bivariate_from_x", "bivariate_reflected",
    "position_marginal", "trivariate_from_x", "trivariate_from_zero",
    "RngSpec", "local_time_estimate", "sample_bm_path", "sample_sbm_batch",
    "time_change_to_sbm",
    "VerificationReport", "atom_fraction", "ks_statistic",
]
