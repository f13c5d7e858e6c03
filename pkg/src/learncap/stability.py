"""Stability of a learning machine and its relation to capacity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from ._summation import scatter_sum
from .capacity import capacity_search, machine_affinity
from .machines import DEFAULT_TYPE_BUDGET, LearningMachine, _check_p, type_array
from .pmf import Pmf

__all__ = [
    "StabilityReport",
    "hypothesis_given_example",
    "stability_s",
    "collision_lower_bound",
    "stability_report",
    "distribution_free_stability",
]


def hypothesis_given_example(
    machine: LearningMachine, p: Pmf, m: int | None = None, budget: int = DEFAULT_TYPE_BUDGET
) -> np.ndarray:
    """``P(H | Z_trn = z)`` as an ``(n, |H|)`` array, one row per observation.

    One slot of the training set is pinned to ``z``; the other ``m - 1``
    draws are enumerated by type.
    """
    _check_p(machine, p)
    m = machine.resolve_m(m)
    n = machine.observation_alphabet_size
    h_size = machine.hypothesis_size(m)
    rest, log_coef = type_array(n, m - 1, budget)
    weights = np.exp(log_coef + xlogy(rest, p.mass[None, :]).sum(axis=1))

    out = np.zeros((n, h_size))
    for z in range(n):
        counts = rest.copy()
        counts[:, z] += 1
        rows, hyp, prob = machine.kernel_coo(counts, m)
        out[z] = scatter_sum(hyp, weights[rows] * prob, h_size)
    return out


def _stability_parts(machine, p, m, budget) -> tuple[float, float]:
    given = hypothesis_given_example(machine, p, m, budget)
    p_h = np.array([math.fsum(p.mass * given[:, h]) for h in range(given.shape[1])])
    overlaps = np.array([math.fsum(np.minimum(p_h, row)) for row in given])
    return math.fsum(p.mass * overlaps), math.fsum(p_h * p_h)


def stability_s(
    machine: LearningMachine, p: Pmf, m: int | None = None, budget: int = DEFAULT_TYPE_BUDGET
) -> float:
    """Expected overlap between ``P(H)`` and ``P(H | Z_trn)``.

    Computed from the hypothesis side, independently of the joint used by
    :func:`learncap.capacity.machine_affinity`; the two add up to one.
    """
    return _stability_parts(machine, p, m, budget)[0]


def collision_lower_bound(
    machine: LearningMachine, p: Pmf, m: int | None = None, budget: int = DEFAULT_TYPE_BUDGET
) -> float:
    """Probability that two independent training sets yield the same hypothesis."""
    return _stability_parts(machine, p, m, budget)[1]


@dataclass(frozen=True)
class StabilityReport:
    s_value: float
    affinity: float
    collision_lower_bound: float


def stability_report(
    machine: LearningMachine, p: Pmf, m: int | None = None, budget: int = DEFAULT_TYPE_BUDGET
) -> StabilityReport:
    s, collision = _stability_parts(machine, p, m, budget)
    return StabilityReport(
        s_value=s,
        affinity=machine_affinity(machine, p, m, budget),
        collision_lower_bound=collision,
    )


def distribution_free_stability(
    machine: LearningMachine, m: int | None = None, grid_resolution: float | None = None
) -> float:
    """Infimum of the stability over observation distributions, via the capacity grid."""
    return 1.0 - capacity_search(machine, m, grid_resolution).capacity_estimate
