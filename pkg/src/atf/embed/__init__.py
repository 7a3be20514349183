"""Ball embeddings, the tetrahedra of the c = 1 argument and simplex fitting."""
from .fit import OpenSimplex, SimplexFit, SimplexFitter, fit_simplex
from .pyramid import pyramid_p_eps, pyramid_pbar_eps, tetra_volume
from .traynor import (
    eps_bound,
    jacobian_determinant,
    numerical_jacobian,
    psi_inverse,
    sample_ball,
    sigma_rho,
    standard_form,
    symplectic_check,
    traynor_embedding,
    traynor_psi,
)

__all__ = [
    "OpenSimplex",
    "SimplexFit",
    "SimplexFitter",
    "eps_bound",
    "fit_simplex",
    "jacobian_determinant",
    "numerical_jacobian",
    "psi_inverse",
    "pyramid_p_eps",
    "pyramid_pbar_eps",
    "sample_ball",
    "sigma_rho",
    "standard_form",
    "symplectic_check",
    "tetra_volume",
    "traynor_embedding",
    "traynor_psi",
]
