"""Jacobi forms of lattice index: lattices, Weil representations, dimensions, q-expansions."""

from .lattice import (Lattice, LatticeInfo, direct_sum, even_sublattice, invariants_of,
                      make_lattice, named_lattice, radical_quotient, rescale, shadow_reps)
from .cyclotomic import CycloNum, gauss_sum_chi, milgram_check
from .theta_rep import rep_matrices, singular_basis, singular_dimension, traces, verify_relations
from .dimension import DimResult, HPResult, dim_formula, dim_jacobi, hp_polynomial
from .qseries import (JacobiQExp, QSeries, delta_operator, named_form, pullback,
                      theta_decompose, theta_series)
from .expr import evaluate, parse_lattice_expr

__version__ = "0.1.0"
