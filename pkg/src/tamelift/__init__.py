"""Lifting mod pi^n Galois representations through tame local conditions.

Modules, bottom to top:

    padic_ring        O/pi^N for a totally ramified extension of W(F)
    matrix_algebra    2x2 matrices, Ad0, subgroup enumeration
    tame_rep          tame representations and their classification
    cohomology        local H^i of Ad0 and the cocycle action on lifts
    local_conditions  the pairs (C_q, N_q) and their checks
    lifting_engine    the stepwise global lift over synthetic global data
    cli               command line front end
"""

from .padic_ring import Ring, RingElem, RingParams, find_prime
from .matrix_algebra import Ad0Vector, CocyclePair, Mat2
from .tame_rep import TameRep, case_tag, classify_integral, classify_residual
from .cohomology import act_on_deformation, h1_space
from .local_conditions import build_condition, membership_test, nearly_ordinary_ledger, preservation_check
from .lifting_engine import GlobalProblem, check_sobre, demo_problem, dimension_ledger, run

__all__ = [
    "Ad0Vector",
    "CocyclePair",
    "GlobalProblem",
    "Mat2",
    "Ring",
    "RingElem",
    "RingParams",
    "TameRep",
    "act_on_deformation",
    "build_condition",
    "case_tag",
    "check_sobre",
    "classify_integral",
    "classify_residual",
    "demo_problem",
    "dimension_ledger",
    "find_prime",
    "h1_space",
    "membership_test",
    "nearly_ordinary_ledger",
    "preservation_check",
    "run",
]

__version__ = "0.1.0"
