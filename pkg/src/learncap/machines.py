"""Permutation-invariant learning machines as kernels on training-set types.

A training set of ``m`` draws from an ``n``-symbol alphabet enters every
machine here only through its type: the vector of per-symbol counts.  Types
are enumerated in a fixed canonical order (first count descending, then the
rest recursively), and :func:`type_rank` maps a type back to its position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import comb, gammaln, xlogy

from ._summation import scatter_sum
from .affinity import JointPmf
from .errors import BudgetExceededError, DimensionError
from .pmf import Pmf

DEFAULT_TYPE_BUDGET = 10_000_000

# (type_rows, hypothesis_indices, probabilities): a sparse kernel in COO form.
KernelCoo = tuple[np.ndarray, np.ndarray, np.ndarray]

__all__ = [
    "TypeVector",
    "LearningMachine",
    "count_types",
    "type_array",
    "type_rank",
    "enumerate_types",
    "make_empirical_average_machine",
    "make_majority_machine",
    "make_randomized_label_machine",
    "make_lazy_learner",
    "make_constant_machine",
    "make_tabular_machine",
    "post_process",
    "joint_ztrn_h",
    "joint_type_h",
]


@dataclass(frozen=True)
class TypeVector:
    """Occurrence counts of each observation symbol in a training set."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")
        if not self.counts:
            raise ValueError("a type needs at least one symbol")

    @property
    def m(self) -> int:
        return sum(self.counts)

    @property
    def alphabet_size(self) -> int:
        return len(self.counts)

    @classmethod
    def of(cls, sample: Sequence[int], alphabet_size: int) -> TypeVector:
        """Type of an explicit sequence of symbols."""
        counts = [0] * alphabet_size
        for z in sample:
            counts[z] += 1
        return cls(tuple(counts))

    def log_multinomial(self) -> float:
        """Log of the number of sequences sharing this type."""
        return math.lgamma(self.m + 1) - sum(math.lgamma(c + 1) for c in self.counts)


def count_types(alphabet_size: int, m: int) -> int:
    """Number of types, ``C(m + n - 1, n - 1)``."""
    return math.comb(m + alphabet_size - 1, alphabet_size - 1)


def _check_budget(alphabet_size: int, m: int, budget: int) -> None:
    total = count_types(alphabet_size, m)
    if total > budget:
        raise BudgetExceededError(
            f"{total} types for alphabet size {alphabet_size} and m={m} exceed budget {budget}"
        )


@lru_cache(maxsize=64)
def _compositions(n: int, m: int) -> np.ndarray:
    if n == 1:
        return np.array([[m]], dtype=np.int64)
    blocks = []
    for first in range(m, -1, -1):
        rest = _compositions(n - 1, m - first)
        block = np.empty((rest.shape[0], n), dtype=np.int64)
        block[:, 0] = first
        block[:, 1:] = rest
        blocks.append(block)
    out = np.concatenate(blocks)
    out.setflags(write=False)
    return out


def type_array(
    alphabet_size: int, m: int, budget: int = DEFAULT_TYPE_BUDGET
) -> tuple[np.ndarray, np.ndarray]:
    """All types as a ``(T, n)`` count matrix plus their log multinomial coefficients.

    ``m = 0`` is allowed and yields the single empty type.
    """
    if alphabet_size < 1 or m < 0:
        raise ValueError("need alphabet_size >= 1 and m >= 0")
    _check_budget(alphabet_size, m, budget)
    counts = _compositions(alphabet_size, m)
    log_coef = gammaln(m + 1) - gammaln(counts + 1).sum(axis=1)
    return counts, log_coef


def type_rank(counts: np.ndarray) -> np.ndarray:
    """Position of each type row in the canonical enumeration order."""
    counts = np.atleast_2d(np.asarray(counts, dtype=np.int64))
    n = counts.shape[1]
    remaining = counts.sum(axis=1)
    rank = np.zeros(counts.shape[0], dtype=np.int64)
    for j in range(n - 1):
        parts = n - j
        # Types whose j-th count exceeds c_j come first: C(r - c_j - 1 + parts - 1, parts - 1) of them.
        top = remaining - counts[:, j] - 1
        ahead = np.where(
            top >= 0,
            np.rint(comb(np.maximum(top, 0) + parts - 1, parts - 1)).astype(np.int64),
            0,
        )
        rank += ahead
        remaining = remaining - counts[:, j]
    return rank


def enumerate_types(alphabet_size: int, m: int) -> list[tuple[TypeVector, float]]:
    """Every type of ``m`` draws over ``alphabet_size`` symbols with its log multinomial weight."""
    if alphabet_size < 1 or m < 1:
        raise ValueError("need alphabet_size >= 1 and m >= 1")
    counts, log_coef = type_array(alphabet_size, m)
    return [(TypeVector(tuple(int(c) for c in row)), float(w)) for row, w in zip(counts, log_coef)]


def _log_type_probs(counts: np.ndarray, log_coef: np.ndarray, p: Pmf) -> np.ndarray:
    return log_coef + xlogy(counts, p.mass[None, :]).sum(axis=1)


@dataclass(frozen=True)
class LearningMachine:
    """Kernel from training-set types to distributions over hypotheses.

    ``hypothesis_labels(m)`` names the hypothesis alphabet for sample size
    ``m``; ``kernel_coo(counts, m)`` evaluates the kernel on a batch of type
    rows and returns it sparsely as ``(row, hypothesis, probability)``.
    A machine built for a single sample size carries it in ``m`` and rejects
    any other.
    """

    name: str
    observation_alphabet_size: int
    hypothesis_labels: Callable[[int], Sequence]
    kernel_coo: Callable[[np.ndarray, int], KernelCoo]
    m: int | None = None

    def resolve_m(self, m: int | None) -> int:
        if m is None:
            if self.m is None:
                raise ValueError(f"machine {self.name!r} needs an explicit m")
            return self.m
        if m < 1:
            raise ValueError("m must be positive")
        if self.m is not None and m != self.m:
            raise ValueError(f"machine {self.name!r} is defined for m={self.m} only")
        return m

    def hypothesis_size(self, m: int | None = None) -> int:
        return len(self.hypothesis_labels(self.resolve_m(m)))

    def kernel(self, t: TypeVector) -> Pmf:
        """Hypothesis distribution for one type, as a dense Pmf."""
        if t.alphabet_size != self.observation_alphabet_size:
            raise DimensionError("type does not match the observation alphabet")
        m = self.resolve_m(t.m)
        _, hyp, prob = self.kernel_coo(np.array([t.counts], dtype=np.int64), m)
        dense = np.zeros(self.hypothesis_size(m))
        np.add.at(dense, hyp, prob)
        return Pmf(dense)


def _point_mass(hyp: np.ndarray) -> KernelCoo:
    rows = np.arange(hyp.size, dtype=np.int64)
    return rows, hyp.astype(np.int64), np.ones(hyp.size)


def _fixed_m(m: int | None) -> int | None:
    if m is not None and m < 1:
        raise ValueError("m must be positive")
    return m


def make_empirical_average_machine(m: int | None = None) -> LearningMachine:
    """Binary observations; the hypothesis is the number of ones ``k in {0..m}``.

    The count stands in for the average ``k/m``; the two carry the same
    information and the count matches the majority threshold ``k >= m/2``.
    """
    return LearningMachine(
        name="empirical-average",
        observation_alphabet_size=2,
        hypothesis_labels=lambda mm: list(range(mm + 1)),
        kernel_coo=lambda counts, mm: _point_mass(counts[:, 1]),
        m=_fixed_m(m),
    )


def make_majority_machine(m: int | None = None) -> LearningMachine:
    """Binary observations; reports the more frequent label, ties going to 1."""
    return LearningMachine(
        name="majority",
        observation_alphabet_size=2,
        hypothesis_labels=lambda mm: [0, 1],
        kernel_coo=lambda counts, mm: _point_mass((2 * counts[:, 1] >= mm).astype(np.int64)),
        m=_fixed_m(m),
    )


def _randomized_label_kernel(counts: np.ndarray, m: int) -> KernelCoo:
    rows, hyp = np.nonzero(counts)
    return rows.astype(np.int64), hyp.astype(np.int64), counts[rows, hyp] / m


def make_randomized_label_machine(n: int, m: int | None = None) -> LearningMachine:
    """Outputs a single symbol drawn from the empirical distribution of the sample."""
    if n < 1:
        raise ValueError("alphabet size must be positive")
    return LearningMachine(
        name="randomized-label",
        observation_alphabet_size=n,
        hypothesis_labels=lambda mm: list(range(n)),
        kernel_coo=_randomized_label_kernel,
        m=_fixed_m(m),
    )


def make_lazy_learner(n: int, m: int | None = None) -> LearningMachine:
    """Returns the training set itself, i.e. its type; hypotheses are all types."""
    if n < 1:
        raise ValueError("alphabet size must be positive")

    @lru_cache(maxsize=8)
    def labels(mm):
        counts, _ = type_array(n, mm)
        return [tuple(int(c) for c in row) for row in counts]

    return LearningMachine(
        name="lazy",
        observation_alphabet_size=n,
        hypothesis_labels=labels,
        kernel_coo=lambda counts, mm: _point_mass(type_rank(counts)),
        m=_fixed_m(m),
    )


def make_constant_machine(n: int, hypothesis_pmf: Pmf | None = None) -> LearningMachine:
    """Ignores the training set and draws its hypothesis from a fixed pmf.

    Defaults to a single hypothesis.
    """
    q = hypothesis_pmf if hypothesis_pmf is not None else Pmf.delta(1)
    support = np.flatnonzero(q.mass)

    def kernel(counts, mm):
        t = counts.shape[0]
        rows = np.repeat(np.arange(t, dtype=np.int64), support.size)
        hyp = np.tile(support, t)
        return rows, hyp, np.tile(q.mass[support], t)

    return LearningMachine(
        name="constant",
        observation_alphabet_size=n,
        hypothesis_labels=lambda mm: list(range(q.alphabet_size)),
        kernel_coo=kernel,
    )


def make_tabular_machine(n: int, m: int, table, name: str = "tabular") -> LearningMachine:
    """Machine for one sample size given by a row-stochastic ``(T, |H|)`` table.

    Row ``i`` is the hypothesis distribution for the type of rank ``i``.
    """
    tab = np.array(table, dtype=np.float64)
    expected = count_types(n, m)
    if tab.ndim != 2 or tab.shape[0] != expected:
        raise DimensionError(f"table needs {expected} rows, one per type")
    if tab.min() < 0 or not np.allclose(tab.sum(axis=1), 1.0, rtol=0, atol=1e-12):
        raise ValueError("table rows must be probability vectors")
    tab.setflags(write=False)

    def kernel(counts, mm):
        ranks = type_rank(counts)
        sub = tab[ranks]
        rows, hyp = np.nonzero(sub)
        return rows.astype(np.int64), hyp.astype(np.int64), sub[rows, hyp]

    return LearningMachine(
        name=name,
        observation_alphabet_size=n,
        hypothesis_labels=lambda mm: list(range(tab.shape[1])),
        kernel_coo=kernel,
        m=m,
    )


def post_process(machine: LearningMachine, channel, name: str | None = None) -> LearningMachine:
    """Machine whose hypothesis is the original one passed through a fixed channel.

    ``channel`` is either a row-stochastic matrix (fixed hypothesis alphabet)
    or a callable ``m -> matrix``.  The result sits below ``machine`` in the
    partial order: ``S -> H1 -> H2`` is a Markov chain by construction.
    """
    get = channel if callable(channel) else (lambda mm: channel)

    def matrix(mm):
        mat = np.asarray(get(mm), dtype=np.float64)
        if mat.shape[0] != len(machine.hypothesis_labels(mm)):
            raise DimensionError("channel needs one row per hypothesis")
        return mat

    def kernel(counts, mm):
        rows, hyp, prob = machine.kernel_coo(counts, mm)
        mat = matrix(mm)
        dense = np.zeros((counts.shape[0], mat.shape[1]))
        np.add.at(dense, rows, prob[:, None] * mat[hyp])
        r, h = np.nonzero(dense)
        return r.astype(np.int64), h.astype(np.int64), dense[r, h]

    return LearningMachine(
        name=name or f"{machine.name}+channel",
        observation_alphabet_size=machine.observation_alphabet_size,
        hypothesis_labels=lambda mm: list(range(matrix(mm).shape[1])),
        kernel_coo=kernel,
        m=machine.m,
    )


def _check_p(machine: LearningMachine, p: Pmf) -> None:
    if p.alphabet_size != machine.observation_alphabet_size:
        raise DimensionError(
            f"p has {p.alphabet_size} symbols, machine expects {machine.observation_alphabet_size}"
        )


class _TypeKernel:
    """Types of one sample size with the machine's kernel evaluated on them.

    The kernel does not depend on the observation distribution, so repeated
    evaluations at different ``p`` (capacity search) reuse this.
    """

    def __init__(self, machine: LearningMachine, m: int, budget: int = DEFAULT_TYPE_BUDGET):
        self.machine = machine
        self.m = m
        self.n = machine.observation_alphabet_size
        self.h_size = machine.hypothesis_size(m)
        self.counts, self.log_coef = type_array(self.n, m, budget)
        self.rows, self.hyp, self.prob = machine.kernel_coo(self.counts, m)

    def type_weights(self, p: Pmf) -> np.ndarray:
        return np.exp(_log_type_probs(self.counts, self.log_coef, p))

    def joint(self, p: Pmf) -> np.ndarray:
        """``P(Z_trn = z, H = h)`` as an ``(n, |H|)`` array."""
        w = self.type_weights(p)
        base = w[self.rows] * self.prob / self.m
        live = base > 0
        rows, hyp, base = self.rows[live], self.hyp[live], base[live]
        z_idx = np.repeat(np.arange(self.n, dtype=np.int64)[None, :], rows.size, axis=0)
        contrib = base[:, None] * self.counts[rows]
        targets = z_idx * self.h_size + hyp[:, None]
        keep = contrib > 0
        flat = scatter_sum(targets[keep], contrib[keep], self.n * self.h_size)
        return flat.reshape(self.n, self.h_size)

    def joint_type_h(self, p: Pmf) -> np.ndarray:
        """``P(type, H)`` as a ``(T, |H|)`` array."""
        w = self.type_weights(p)
        out = np.zeros((self.counts.shape[0], self.h_size))
        np.add.at(out, (self.rows, self.hyp), w[self.rows] * self.prob)
        return out


def joint_ztrn_h(
    machine: LearningMachine, p: Pmf, m: int | None = None, budget: int = DEFAULT_TYPE_BUDGET
) -> JointPmf:
    """Exact joint of ``Z_trn`` (a uniform draw from the sample) and the hypothesis.

    ``P(z, h) = sum_types P(type) * counts[z] / m * kernel(type)[h]`` where
    ``P(type)`` is the multinomial probability under ``p``.  Rows index ``z``.
    """
    _check_p(machine, p)
    m = machine.resolve_m(m)
    return JointPmf(_TypeKernel(machine, m, budget).joint(p))


def joint_type_h(
    machine: LearningMachine, p: Pmf, m: int | None = None, budget: int = DEFAULT_TYPE_BUDGET
) -> JointPmf:
    """Joint of the training-set type and the hypothesis; rows index types by rank."""
    _check_p(machine, p)
    m = machine.resolve_m(m)
    return JointPmf(_TypeKernel(machine, m, budget).joint_type_h(p))
