"""Exact cut-and-join operators, Virasoro constraints and generalized ancestor potentials.

Three independent solvers compute ``Z = R T Delta . prod tau_alpha``:

* :func:`direct_ancestor_potential` applies the operators literally,
* :func:`cutjoin_ancestor_potential` runs ``Z^(m) = W Z^(m-1) / m``,
* :func:`solve_from_constraints` solves the Virasoro constraints degree by degree.
"""
from .cutjoin import CutJoinOperator, build_cut_and_join, cutjoin_ancestor_potential, run_recursion, tau_alpha
from .giventaldata import GiventalData, ValidationError, direct_ancestor_potential, validate
from .kernels import BACKEND
from .modeops import ModeOperator, WindowSpec
from .scalarseries import Q, LaurentSeries
from .tpoly import HbarSeries, TPolynomial
from .virasoro import solve_from_constraints

__all__ = [
    "BACKEND", "CutJoinOperator", "GiventalData", "HbarSeries", "LaurentSeries", "ModeOperator", "Q",
    "TPolynomial", "ValidationError", "WindowSpec", "build_cut_and_join", "cutjoin_ancestor_potential",
    "direct_ancestor_potential", "run_recursion", "solve_from_constraints", "tau_alpha", "validate",
]
