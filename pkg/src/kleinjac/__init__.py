"""Jacobians of imaginary real hyperelliptic curves and their Klein quotients."""

from .config import DEFAULT, Tolerances
from .curve import (
    INF_MINUS,
    INF_PLUS,
    CurveDescriptor,
    SurfacePath,
    SurfacePoint,
    continue_y,
    hodge_star,
    sigma_point,
    validate_curve,
)
from .divisors import (
    Divisor,
    QuotientDivisor,
    degree,
    div_of_x_translate,
    is_principal_X,
    is_principal_Y,
    make_divisor,
    make_quotient_divisor,
    pullback,
    pushforward,
    sigma_star,
)
from .jacobian import (
    HarmonicFormY,
    JacobianPoint,
    Lattice,
    abel_jacobi,
    eta_from_omega,
    fixed_component_representatives,
    is_sigma1_fixed,
    lattice_from_periods,
    omega_from_eta,
    reduce_mod_lattice,
    sigma0_class,
    sigma1,
)
from .periods import PeriodData, integrate_form, period_matrix, riemann_validate, sigma_invariance_residual
from .pipeline import Analysis, analyze
from .topology import (
    HomologyBasis,
    SigmaHomologyAction,
    adapt_basis_to_sigma,
    canonical_homology_basis,
    intersection_number,
    sigma_homology_matrix,
)

__version__ = "0.1.0"
