"""scikit-learn style front end to the solvers.

Each estimator is configured through ``__init__`` keyword arguments only
(so ``get_params``/``set_params``/``clone`` work) and solves one
:class:`~pcrbds.graphs.Instance` per ``fit``::

    est = EpasSolver(epsilon="1/2", d=2, mode="exhaustive").fit(inst)
    est.solution_        # Solution or None
    est.predict(inst)    # sorted vertex tuple or None
"""

from __future__ import annotations

import math
from fractions import Fraction

from sklearn.base import BaseEstimator

from .epas import epas_solve
from .exact import exact_solve_by_t
from .graphs import Infeasible, Instance, VerificationReport, verify_solution
from .oracle import OracleLimits, brute_force_decide
from .pas import pas_outer
from .validation import SolverConfig, check_d, check_epsilon, check_instance


class _Solver(BaseEstimator):
    def _config(self) -> SolverConfig:
        return SolverConfig(mode=self.mode, seed=self.seed, trials=self.trials, n_jobs=self.n_jobs)

    def _solve(self, inst: Instance):
        raise NotImplementedError

    def fit(self, X: Instance, y=None):
        inst = check_instance(X)
        self.result_ = self._solve(inst)
        self.feasible_ = not isinstance(self.result_, Infeasible)
        self.solution_ = self.result_ if self.feasible_ else None
        return self

    def predict(self, X):
        """Vertex tuple (or None) for an instance, or a list of them for a list."""
        if isinstance(X, Instance):
            self.fit(X)
            return self.solution_.vertices if self.feasible_ else None
        return [self.predict(inst) for inst in X]

    def guarantee(self, inst: Instance) -> tuple[int, int]:
        """(size budget, coverage target) the returned set is certified against."""
        return inst.k, inst.t

    def verify(self, inst: Instance, vertices) -> VerificationReport:
        budget, target = self.guarantee(inst)
        return verify_solution(inst, vertices, target, budget)


class ExactTSolver(_Solver):
    """Exact solver via colour coding on the coverage target."""

    def __init__(self, mode="randomized", trials=None, seed=0, n_jobs=1):
        self.mode = mode
        self.trials = trials
        self.seed = seed
        self.n_jobs = n_jobs

    def _solve(self, inst):
        return exact_solve_by_t(inst, self._config())


class EpasSolver(_Solver):
    """Keeps the budget ``k``, may fall short of ``t`` by a factor ``1 - epsilon``."""

    def __init__(self, epsilon="1/2", d=2, mode="randomized", trials=None, seed=0, n_jobs=1):
        self.epsilon = epsilon
        self.d = d
        self.mode = mode
        self.trials = trials
        self.seed = seed
        self.n_jobs = n_jobs

    def _solve(self, inst):
        return epas_solve(inst, check_epsilon(self.epsilon), self.d, self._config())

    def guarantee(self, inst):
        eps = check_epsilon(self.epsilon)
        return inst.k, math.ceil((1 - eps) * inst.t)


class PasSolver(_Solver):
    """Reaches ``t``, may exceed ``k`` by ``max(1, ceil(epsilon k))``."""

    def __init__(self, epsilon="1/2", d=2, mode="randomized", trials=None, seed=0, n_jobs=1):
        self.epsilon = epsilon
        self.d = d
        self.mode = mode
        self.trials = trials
        self.seed = seed
        self.n_jobs = n_jobs

    def _solve(self, inst):
        return pas_outer(inst, check_epsilon(self.epsilon), check_d(self.d), self._config())

    def guarantee(self, inst):
        eps = check_epsilon(self.epsilon)
        return inst.k + max(1, math.ceil(eps * inst.k)), inst.t


class BruteForceSolver(_Solver):
    def __init__(self, max_red=24, max_subset_size=8):
        self.max_red = max_red
        self.max_subset_size = max_subset_size

    def _solve(self, inst):
        return brute_force_decide(inst, OracleLimits(max_red=self.max_red, max_subset_size=self.max_subset_size))


SOLVERS = {
    "exact-t": ExactTSolver,
    "epas": EpasSolver,
    "pas": PasSolver,
    "brute": BruteForceSolver,
}


def epsilon_str(eps) -> str:
    eps = Fraction(check_epsilon(eps))
    return f"{eps.numerator}/{eps.denominator}"
