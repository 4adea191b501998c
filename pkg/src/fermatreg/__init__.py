"""Hypergeometric regulators and Jacobi-sum Hecke L-values for Fermat motives.

Computes, for a character pair (a, b) mod N on the Fermat curve
x^N + y^N = 1: the regulator determinant R built from special values of
3F2 hypergeometric series, its integral renormalization R~ through the
homology lattice, the L-value L*(0) by a smoothed approximate functional
equation over Jacobi-sum Euler factors, and the recognized rational ratio
R~ / L*(0).
"""

from .cyclo import (
    CycElt,
    cyclotomic_poly,
    disc_abs,
    elt_norm,
    elt_trace,
    embed,
    euler_phi,
    galois_apply,
)
from .hyperg import beta, f3f2_at1, f_tilde, f_val, gamma_rat
from .index import (
    ElementDescriptor,
    FermatIndex,
    InsufficientElements,
    element_set,
    h_set,
    is_primitive,
    orbit,
    reduce_nonprimitive,
)
from .jacobi import (
    EnumerationTooLarge,
    LocalFactorData,
    SplittingData,
    dirichlet_coeffs,
    hecke_verify,
    jacobi_sum,
    local_factor,
)
from .lattice import (
    RankMismatch,
    f_infty_matrix,
    period_det,
    period_pairing,
    r_tilde,
    t_lattice_basis,
)
from .lfunc import (
    ContourTooClose,
    EpsilonIndeterminate,
    FunctionalEqData,
    UnknownConductor,
    conductor_norm,
    kernel_G,
    l_star_zero,
    lambda_at,
    solve_epsilon,
)
from .regulator import DegenerateRegulator, d_const, r_value, reg_matrix, row_coefficient
from .verify import CaseReport, RunConfig, rational_recognize, table_run, verify_case

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
