"""Joint distributions and the affinity calculus built on total variation."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import rel_entr

from .errors import DimensionError
from .pmf import SUM_TOL, Pmf, similarity, tv_distance

__all__ = [
    "JointPmf",
    "mutual_affinity",
    "mutual_affinity_given_y",
    "mutual_affinity_given_x",
    "information_of_event",
    "mutual_information",
    "bayes_error",
]


class JointPmf:
    """Joint pmf of ``(X, Y)``; rows index ``X``, columns index ``Y``."""

    __slots__ = ("_mass",)

    def __init__(self, mass):
        arr = np.array(mass, dtype=np.float64)
        if arr.ndim != 2 or 0 in arr.shape:
            raise ValueError("joint mass must be a nonempty 2-D array")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0:
            raise ValueError("joint mass must be finite and nonnegative")
        total = math.fsum(arr.ravel())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"joint mass sums to {total!r}, not 1")
        arr.setflags(write=False)
        self._mass = arr

    @classmethod
    def independent(cls, px: Pmf, py: Pmf) -> JointPmf:
        return cls(np.outer(px.mass, py.mass))

    @classmethod
    def from_channel(cls, px: Pmf, channel) -> JointPmf:
        """Joint of ``X ~ px`` and ``Y`` drawn from row ``x`` of a row-stochastic matrix."""
        ch = np.asarray(channel, dtype=np.float64)
        if ch.ndim != 2 or ch.shape[0] != px.alphabet_size:
            raise DimensionError("channel needs one row per symbol of px")
        return cls(px.mass[:, None] * ch)

    @classmethod
    def from_tensor(cls, tensor, x_axes, y_axes) -> JointPmf:
        """Group the axes of a joint tensor into a pair ``(X, Y)``.

        Axes in neither group are summed out, so ``from_tensor(t, [0], [1, 2])``
        gives the joint of ``A`` with the pair ``(B, C)``.
        """
        t = np.asarray(tensor, dtype=np.float64)
        x_axes, y_axes = list(x_axes), list(y_axes)
        rest = [a for a in range(t.ndim) if a not in x_axes and a not in y_axes]
        if rest:
            t = t.sum(axis=tuple(rest))
            keep = [a for a in range(t.ndim + len(rest)) if a not in rest]
            remap = {a: i for i, a in enumerate(keep)}
            x_axes = [remap[a] for a in x_axes]
            y_axes = [remap[a] for a in y_axes]
        t = np.transpose(t, x_axes + y_axes)
        nx = int(np.prod(t.shape[: len(x_axes)]))
        return cls(t.reshape(nx, -1))

    @property
    def mass(self) -> np.ndarray:
        return self._mass

    @property
    def x_size(self) -> int:
        return self._mass.shape[0]

    @property
    def y_size(self) -> int:
        return self._mass.shape[1]

    def marginal_x(self) -> Pmf:
        return Pmf(self._mass.sum(axis=1))

    def marginal_y(self) -> Pmf:
        return Pmf(self._mass.sum(axis=0))

    def conditional_x(self, y: int) -> Pmf:
        """``P(X | Y = y)``."""
        col = self._mass[:, y]
        total = math.fsum(col)
        if total <= 0.0:
            raise ValueError(f"P(Y={y}) is zero")
        return Pmf(col / total)

    def conditional_y(self, x: int) -> Pmf:
        """``P(Y | X = x)``."""
        row = self._mass[x, :]
        total = math.fsum(row)
        if total <= 0.0:
            raise ValueError(f"P(X={x}) is zero")
        return Pmf(row / total)

    def product_of_marginals(self) -> JointPmf:
        return JointPmf.independent(self.marginal_x(), self.marginal_y())

    def transpose(self) -> JointPmf:
        return JointPmf(self._mass.T)

    def __repr__(self):
        return f"JointPmf(x_size={self.x_size}, y_size={self.y_size})"


def mutual_affinity(j: JointPmf) -> float:
    """Total variation distance between ``j`` and the product of its marginals."""
    outer = np.outer(j.mass.sum(axis=1), j.mass.sum(axis=0))
    return 1.0 - math.fsum(np.minimum(outer, j.mass).ravel())


def mutual_affinity_given_y(j: JointPmf) -> float:
    """``E_Y tv(P(X), P(X | Y))``; zero-probability columns carry no weight."""
    px = j.marginal_x()
    py = j.mass.sum(axis=0)
    terms = [py[y] * tv_distance(px, j.conditional_x(y)) for y in range(j.y_size) if py[y] > 0]
    return math.fsum(terms)


def mutual_affinity_given_x(j: JointPmf) -> float:
    """``E_X tv(P(Y), P(Y | X))``."""
    return mutual_affinity_given_y(j.transpose())


def information_of_event(j: JointPmf, y: int) -> float:
    """Information the event ``Y = y`` carries about ``X``: ``tv(P(X), P(X | Y=y))``."""
    if not 0 <= y < j.y_size:
        raise ValueError(f"symbol {y} outside the Y alphabet")
    if j.mass[:, y].sum() <= 0.0:
        raise ValueError(f"event Y={y} has zero probability")
    return tv_distance(j.marginal_x(), j.conditional_x(y))


def mutual_information(j: JointPmf) -> float:
    """Mutual information in nats."""
    outer = np.outer(j.mass.sum(axis=1), j.mass.sum(axis=0))
    return max(0.0, math.fsum(rel_entr(j.mass, outer).ravel()))


def bayes_error(prior0: float, p0: Pmf, p1: Pmf) -> tuple[float, float]:
    """Optimal Bayes error of a two-class problem and its overlap bound.

    Returns ``(e_star, bound)`` with ``e_star = sum_x min(pi0 p0(x), pi1 p1(x))``
    and ``bound = kappa * similarity(p0, p1)``, ``kappa = max(pi0, pi1)``.
    The two coincide when the classes are balanced.
    """
    if not 0.0 <= prior0 <= 1.0:
        raise ValueError(f"prior0={prior0!r} outside [0, 1]")
    if p0.alphabet_size != p1.alphabet_size:
        raise DimensionError("class conditionals live on different alphabets")
    prior1 = 1.0 - prior0
    e_star = math.fsum(np.minimum(prior0 * p0.mass, prior1 * p1.mass))
    kappa = max(prior0, prior1)
    return e_star, kappa * similarity(p0, p1)
