"""Input validation helpers and solver configuration."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable

from .graphs import Instance, InstanceError, ResourceLimitError, is_kdd_free

log = logging.getLogger(__name__)

MODES = ("randomized", "exhaustive")


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by the randomized/exhaustive solvers.

    ``trials=None`` picks each algorithm's default trial count (capped at
    ``max_trials``). The ``max_*`` limits turn blow-ups into
    :class:`ResourceLimitError` instead of silent degradation.
    """

    mode: str = "randomized"
    seed: int = 0
    trials: int | None = None
    max_trials: int = 5000
    max_colorings: int = 200_000
    max_separation_colorings: int = 1 << 16
    max_terminals: int = 20
    max_seeds: int = 100_000
    kdd_limit: int = 200_000
    n_jobs: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n_jobs < 1:
            raise ValueError("n_jobs must be >= 1")

    def with_(self, **changes) -> "SolverConfig":
        return replace(self, **changes)

    def trial_count(self, default: float) -> int:
        if self.trials is not None:
            return self.trials
        return max(1, min(self.max_trials, math.ceil(default)))


EXHAUSTIVE = SolverConfig(mode="exhaustive")


def check_epsilon(eps) -> Fraction:
    """Coerce ``eps`` to an exact rational in (0, 1).

    Accepts a :class:`~fractions.Fraction`, a ``"N/D"`` string, a
    ``(num, den)`` pair or a float (read through its decimal repr).
    """
    if isinstance(eps, Fraction):
        value = eps
    elif isinstance(eps, tuple):
        num, den = eps
        value = Fraction(int(num), int(den))
    elif isinstance(eps, float):
        value = Fraction(repr(eps))
    elif isinstance(eps, (int, str)):
        try:
            value = Fraction(eps)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse epsilon {eps!r}") from exc
    else:
        raise TypeError(f"unsupported epsilon type {type(eps).__name__}")
    if not 0 < value < 1:
        raise ValueError(f"epsilon must lie strictly between 0 and 1, got {value}")
    return value


def check_instance(inst) -> Instance:
    if not isinstance(inst, Instance):
        raise TypeError(f"expected an Instance, got {type(inst).__name__}")
    return inst


def check_red_set(inst: Instance, S: Iterable[int]) -> frozenset[int]:
    S = frozenset(int(v) for v in S)
    bad = [v for v in S if not 0 <= v < inst.red_count]
    if bad:
        raise InstanceError(f"red vertices {sorted(bad)} out of range [0, {inst.red_count})")
    return S


def check_d(d) -> int:
    d = int(d)
    if d < 1:
        raise ValueError("d must be >= 1")
    return d


def warn_if_not_kdd_free(inst: Instance, d: int, limit: int) -> None:
    """Check the K_{d,d}-freeness precondition when cheap enough, else trust it."""
    try:
        free = is_kdd_free(inst.cov, d, limit)
    except ResourceLimitError:
        log.warning("K_%d,%d-freeness not checked (too many red subsets); trusting caller", d, d)
        return
    if not free:
        log.warning("coverage graph contains K_%d,%d; approximation guarantees do not apply", d, d)
