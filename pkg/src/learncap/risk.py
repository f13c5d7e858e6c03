"""True and empirical risk of a learning machine under a bounded loss."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .machines import DEFAULT_TYPE_BUDGET, LearningMachine, _check_p, _TypeKernel
from .pmf import Pmf

__all__ = [
    "LossTable",
    "GapCheck",
    "true_risk",
    "empirical_risk",
    "risk_gap",
    "tight_loss",
    "risk_gap_check",
    "majority_vote_loss",
    "misclassification_loss",
    "hoeffding_affinity_bound",
]


class LossTable:
    """Loss ``L(h, z)`` in ``[0, 1]``; rows index hypotheses, columns observations.

    A loss that is random given ``(h, z)`` is stored as its conditional mean;
    both risks only see that mean.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("loss table must be 2-D (hypothesis x observation)")
        if not np.all(np.isfinite(arr)) or arr.min(initial=0.0) < 0.0 or arr.max(initial=0.0) > 1.0:
            raise ValueError("loss values must lie in [0, 1]")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def shape(self) -> tuple[int, int]:
        return self._values.shape

    def scaled(self, c: float) -> LossTable:
        return LossTable(c * self._values)

    def __repr__(self):
        return f"LossTable(shape={self.shape})"


def _joint_and_loss(machine, p, m, loss, budget):
    _check_p(machine, p)
    m = machine.resolve_m(m)
    joint = _TypeKernel(machine, m, budget).joint(p)
    if loss.shape != (joint.shape[1], joint.shape[0]):
        raise DimensionError(
            f"loss table {loss.shape} does not match (hypotheses, observations) "
            f"= {(joint.shape[1], joint.shape[0])}"
        )
    return joint, loss.values


def _true(joint: np.ndarray, loss: np.ndarray, p: Pmf) -> float:
    p_h = joint.sum(axis=0)
    return math.fsum((p_h[:, None] * p.mass[None, :] * loss).ravel())


def _empirical(joint: np.ndarray, loss: np.ndarray) -> float:
    return math.fsum((joint.T * loss).ravel())


def true_risk(
    machine: LearningMachine, p: Pmf, m: int | None, loss: LossTable, budget: int = DEFAULT_TYPE_BUDGET
) -> float:
    """``E_H E_{Z ~ p} L(H, Z)``: the hypothesis is scored on a fresh observation."""
    joint, values = _joint_and_loss(machine, p, m, loss, budget)
    return _true(joint, values, p)


def empirical_risk(
    machine: LearningMachine, p: Pmf, m: int | None, loss: LossTable, budget: int = DEFAULT_TYPE_BUDGET
) -> float:
    """``E_H E_{Z ~ P(z | H)} L(H, Z)``: the hypothesis scored on its own training examples."""
    joint, values = _joint_and_loss(machine, p, m, loss, budget)
    return _empirical(joint, values)


def risk_gap(
    machine: LearningMachine, p: Pmf, m: int | None, loss: LossTable, budget: int = DEFAULT_TYPE_BUDGET
) -> float:
    """``true_risk - empirical_risk`` from a single joint evaluation."""
    joint, values = _joint_and_loss(machine, p, m, loss, budget)
    return _true(joint, values, p) - _empirical(joint, values)


def tight_loss(
    machine: LearningMachine,
    p: Pmf,
    m: int | None = None,
    reverse: bool = False,
    tie_tol: float = 1e-12,
    budget: int = DEFAULT_TYPE_BUDGET,
) -> LossTable:
    """Loss ``1{P(z) >= P(z | h)}`` whose risk gap equals the machine's affinity.

    With ``reverse=True`` the indicator is ``1{P(z) <= P(z | h)}`` and the gap
    is minus the affinity.  Differences within ``tie_tol`` count as ties and
    score 1; hypotheses of zero probability also score 1.
    """
    _check_p(machine, p)
    m = machine.resolve_m(m)
    joint = _TypeKernel(machine, m, budget).joint(p)
    p_h = joint.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        posterior = np.where(p_h[None, :] > 0, joint / p_h[None, :], p.mass[:, None])
    diff = p.mass[:, None] - posterior
    if reverse:
        diff = -diff
    return LossTable((diff >= -tie_tol).astype(np.float64).T)


@dataclass(frozen=True)
class GapCheck:
    gap: float
    affinity: float
    holds: bool


def risk_gap_check(
    machine: LearningMachine, p: Pmf, m: int | None, loss: LossTable, tol: float = 1e-12
) -> GapCheck:
    """Compare ``|true - empirical|`` with the affinity for one loss."""
    joint, values = _joint_and_loss(machine, p, m, loss, DEFAULT_TYPE_BUDGET)
    gap = _true(joint, values, p) - _empirical(joint, values)
    outer = np.outer(joint.sum(axis=1), joint.sum(axis=0))
    affinity = 1.0 - math.fsum(np.minimum(outer, joint).ravel())
    return GapCheck(gap=gap, affinity=affinity, holds=abs(gap) <= affinity + tol)


def majority_vote_loss(m: int) -> LossTable:
    """Loss of predicting the majority label from the count of ones ``k``.

    ``L(k, z) = 1{z=1} 1{k < m/2} + 1{z=0} 1{k >= m/2}``, for the
    empirical-average machine.
    """
    k = np.arange(m + 1)
    predicts_one = 2 * k >= m
    return LossTable(np.column_stack([predicts_one, ~predicts_one]).astype(np.float64))


def misclassification_loss(n: int) -> LossTable:
    """``1{z != h}`` for a machine whose hypotheses are observation symbols."""
    return LossTable(1.0 - np.eye(n))


def hoeffding_affinity_bound(phi: float, m: int) -> float:
    """``2 exp(-2 m (1/2 - phi)**2)``, an upper bound on the majority machine's affinity."""
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi={phi!r} outside [0, 1]")
    return 2.0 * math.exp(-2.0 * m * (0.5 - phi) ** 2)
