"""Exact polynomial-reproduction certificates for binary Hermite subdivision schemes."""
from fractions import Fraction

from .algebra import Matrix, Poly, rat, solve_linear
from .cascade import basic_limit_samples, oracle_reproduces, refine, sample_poly
from .catalog import derham, extended, merrien, primal3, primal3_constraints
from .construct import build_system, construct, load_template
from .families import alpha1, alpha1_closed, alpha2, gamma_table, q_poly, qhat_poly, qtilde_poly, rhs_vector
from .reproduction import certify, check_constants, degree_residual, infer_tau
from .symbol import HermiteMask, load_mask, save_mask, subsymbol_deriv, symbol_deriv

__version__ = "0.1.0"
