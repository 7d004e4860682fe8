"""Solvers for the partial connected red-blue dominating set problem.

Pick a connected set of at most ``k`` red vertices whose blue neighbourhood
in a bipartite coverage graph has at least ``t`` vertices.
"""

from .epas import epas_solve, steiner_epas_solve
from .estimators import BruteForceSolver, EpasSolver, ExactTSolver, PasSolver
from .exact import exact_solve_by_t
from .graphs import (ConnGraph, Infeasible, InfeasibleReason, Instance, InstanceError, RedBlueGraph,
                     ResourceLimitError, Solution, verify_solution)
from .oracle import brute_force_decide
from .pas import pas_outer
from .validation import SolverConfig

__all__ = [
    "BruteForceSolver", "ConnGraph", "EpasSolver", "ExactTSolver", "Infeasible", "InfeasibleReason",
    "Instance", "InstanceError", "PasSolver", "RedBlueGraph", "ResourceLimitError", "Solution",
    "SolverConfig", "brute_force_decide", "epas_solve", "exact_solve_by_t", "pas_outer",
    "steiner_epas_solve", "verify_solution",
]

__version__ = "0.1.0"
