"""Mutual affinity of learning machines, closed-form capacities and capacity search."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, xlogy

from .affinity import JointPmf, mutual_information
from .errors import BudgetExceededError
from .machines import DEFAULT_TYPE_BUDGET, LearningMachine, _check_p, _TypeKernel, count_types, type_array
from .pmf import Pmf, effective_support, shannon_entropy

DEFAULT_GRID_BUDGET = 200_000
DEFAULT_WORK_BUDGET = 500_000_000
_TIE_TOL = 1e-12

__all__ = [
    "CapacityReport",
    "EntropyBounds",
    "machine_affinity",
    "bernoulli_affinity_closed",
    "binomial_md_closed",
    "de_moivre_mad",
    "deterministic_capacity_asymptotic",
    "randomized_capacity_closed",
    "majority_affinity_closed",
    "lazy_affinity",
    "sqrt_law_bound",
    "classification_bound",
    "classification_bound_log_form",
    "capacity_search",
    "entropy_capacity_bounds",
]


def _affinity_of(joint: np.ndarray) -> float:
    outer = np.outer(joint.sum(axis=1), joint.sum(axis=0))
    return 1.0 - math.fsum(np.minimum(outer, joint).ravel())


def machine_affinity(
    machine: LearningMachine, p: Pmf, m: int | None = None, budget: int = DEFAULT_TYPE_BUDGET
) -> float:
    """Mutual affinity between one training example and the machine's hypothesis."""
    _check_p(machine, p)
    m = machine.resolve_m(m)
    return _affinity_of(_TypeKernel(machine, m, budget).joint(p))


def _check_phi(phi: float) -> None:
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi={phi!r} outside [0, 1]")


def _binomial_pmf(phi: float, m: int) -> np.ndarray:
    k = np.arange(m + 1)
    log_coef = gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
    return np.exp(log_coef + xlogy(k, phi) + xlogy(m - k, 1.0 - phi))


def bernoulli_affinity_closed(phi: float, m: int) -> float:
    """Mean absolute deviation ``E|phi - K/m|`` of ``K ~ Binomial(m, phi)``.

    This is the affinity of the empirical-average machine at ``Bernoulli(phi)``;
    summed directly with log-space binomial weights.
    """
    _check_phi(phi)
    if m < 1:
        raise ValueError("m must be positive")
    k = np.arange(m + 1)
    return math.fsum(_binomial_pmf(phi, m) * np.abs(phi - k / m))


def binomial_md_closed(phi: float, m: int) -> float:
    """Closed-form mean deviation of ``K/m``, valid only when ``m * phi`` is an integer."""
    _check_phi(phi)
    mu = m * phi
    if abs(mu - round(mu)) > 1e-9:
        raise ValueError("closed form needs m * phi to be an integer")
    mu = int(round(mu))
    if mu == m or mu == 0:
        return 0.0
    log_val = (
        math.log(2.0 / m)
        + (m - mu) * math.log(1.0 - phi)
        + (1 + mu) * math.log(phi)
        + math.log(1 + mu)
        + math.log(math.comb(m, mu + 1))
    )
    return math.exp(log_val)


def de_moivre_mad(phi: float, m: int) -> float:
    """De Moivre's identity ``E|K - m phi| = 2 c (1 - phi) P(K = c)``, ``c = ceil(m phi)``, divided by ``m``."""
    _check_phi(phi)
    if phi in (0.0, 1.0):
        return 0.0
    c = math.ceil(m * phi)
    if c == 0:
        return 0.0
    log_pk = (
        math.lgamma(m + 1)
        - math.lgamma(c + 1)
        - math.lgamma(m - c + 1)
        + c * math.log(phi)
        + (m - c) * math.log(1.0 - phi)
    )
    return 2.0 * c * (1.0 - phi) * math.exp(log_pk) / m


def deterministic_capacity_asymptotic(m: int) -> float:
    """Large-``m`` capacity of the empirical-average machine, ``1 / sqrt(2 pi m)``."""
    return 1.0 / math.sqrt(2.0 * math.pi * m)


def randomized_capacity_closed(m: int, n: int) -> float:
    """Capacity of the randomized-label machine, ``(1 - 1/n) / m``."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    return (1.0 - 1.0 / n) / m


def majority_affinity_closed(phi: float, m: int) -> float:
    """Affinity of the majority machine at ``Bernoulli(phi)`` for odd ``m``.

    ``|sum_{k <= (m-1)/2} b_k (phi - k/m)| + |sum_{k >= (m+1)/2} b_k (phi - k/m)|``
    with ``b_k`` the binomial weights.
    """
    _check_phi(phi)
    if m < 1 or m % 2 == 0:
        raise ValueError("closed form needs odd m; use machine_affinity for even m")
    k = np.arange(m + 1)
    dev = _binomial_pmf(phi, m) * (phi - k / m)
    half = (m + 1) // 2
    return abs(math.fsum(dev[:half])) + abs(math.fsum(dev[half:]))


def lazy_affinity(p: Pmf, m: int) -> float:
    """Affinity of the lazy learner: ``1/2 sum_k E|N_k/m - p_k|`` with ``N_k ~ Binomial(m, p_k)``."""
    if m < 1:
        raise ValueError("m must be positive")
    return 0.5 * math.fsum(bernoulli_affinity_closed(float(pk), m) for pk in p.mass)


def sqrt_law_bound(p: Pmf, m: int) -> float:
    """Asymptotic capacity bound ``sqrt((Ess[p] - 1) / (2 pi m))``."""
    if m < 1:
        raise ValueError("m must be positive")
    return math.sqrt(max(effective_support(p) - 1.0, 0.0) / (2.0 * math.pi * m))


def classification_bound_log_form(y_size: int, n_hypotheses: int, m: int) -> float:
    """Square-root law for classifiers written through the hypothesis count ``|Y|**|X|``."""
    if y_size < 2:
        raise ValueError("log form needs at least two labels")
    x_size = math.log(n_hypotheses) / math.log(y_size)
    return math.sqrt((y_size * x_size - 1.0) / (2.0 * math.pi * m))


def classification_bound(x_size: int, y_size: int, m: int) -> float:
    """Risk-gap bound ``sqrt((|X||Y| - 1) / (2 pi m))`` for any classifier on ``X x Y``."""
    if x_size < 1 or y_size < 1 or m < 1:
        raise ValueError("sizes and m must be positive")
    value = math.sqrt((x_size * y_size - 1.0) / (2.0 * math.pi * m))
    if y_size >= 2:
        other = classification_bound_log_form(y_size, y_size**x_size, m)
        if not math.isclose(value, other, rel_tol=1e-9, abs_tol=1e-12):
            raise ArithmeticError(f"log form disagrees: {value} vs {other}")
    return value


@dataclass(frozen=True)
class CapacityReport:
    machine_id: str
    m: int
    affinity_at: dict = field(repr=False)
    capacity_estimate: float
    argmax_distribution: Pmf
    grid_resolution: float


def _default_resolution(n: int) -> float:
    if n <= 2:
        return 1.0 / 200
    if n <= 4:
        return 1.0 / 40
    raise ValueError("no default grid resolution for alphabets larger than 4")


def _refinement(center: np.ndarray, step: float) -> list[np.ndarray]:
    n = center.size
    pts = []
    for head in itertools.product(range(-10, 11), repeat=n - 1):
        last = -sum(head)
        if abs(last) > 10:
            continue
        q = center + step * np.array(head + (last,), dtype=np.float64)
        if q.min() < -1e-12:
            continue
        pts.append(np.clip(q, 0.0, None))
    return pts


def capacity_search(
    machine: LearningMachine,
    m: int | None = None,
    grid_resolution: float | None = None,
    budget: int = DEFAULT_TYPE_BUDGET,
    grid_budget: int = DEFAULT_GRID_BUDGET,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> CapacityReport:
    """Approximate the supremum of the affinity over observation distributions.

    Evaluates a regular simplex grid of the given spacing (plus the uniform
    distribution), then a local grid at a tenth of the spacing around the
    best point.  Ties within ``1e-12`` go to the lexicographically smallest
    distribution.  ``grid_budget`` caps the number of grid points and
    ``work_budget`` caps grid points times types.
    """
    m = machine.resolve_m(m)
    n = machine.observation_alphabet_size
    res = grid_resolution if grid_resolution is not None else _default_resolution(n)
    steps = round(1.0 / res)
    if steps < 1 or abs(steps * res - 1.0) > 1e-9:
        raise ValueError("grid_resolution must be 1/N for a positive integer N")
    res = 1.0 / steps

    n_base = math.comb(steps + n - 1, n - 1) + 1
    if n_base + 21 ** (n - 1) > grid_budget:
        raise BudgetExceededError(f"simplex grid of {n_base} points exceeds budget {grid_budget}")

    n_points = n_base + 21 ** (n - 1)
    if n_points * count_types(n, m) > work_budget:
        raise BudgetExceededError(
            f"{n_points} grid points over {count_types(n, m)} types exceeds work budget {work_budget}"
        )
    tk = _TypeKernel(machine, m, budget)
    values: dict[tuple[float, ...], float] = {}
    pmfs: dict[tuple[float, ...], Pmf] = {}

    def evaluate(points):
        for q in points:
            pmf = Pmf.from_weights(q)
            key = pmf.descriptor()
            if key not in values:
                values[key] = _affinity_of(tk.joint(pmf))
                pmfs[key] = pmf

    def best():
        top = max(values.values())
        key = min(k for k, v in values.items() if v >= top - _TIE_TOL)
        return key, top

    grid_counts, _ = type_array(n, steps)
    evaluate(list(grid_counts / steps) + [np.full(n, 1.0 / n)])
    centre, _ = best()
    evaluate(_refinement(pmfs[centre].mass, res / 10.0))
    key, top = best()
    return CapacityReport(
        machine_id=machine.name,
        m=m,
        affinity_at=values,
        capacity_estimate=top,
        argmax_distribution=pmfs[key],
        grid_resolution=res,
    )


@dataclass(frozen=True)
class EntropyBounds:
    """Affinity next to its information-theoretic upper bounds (nats)."""

    affinity: float
    mi_type_h: float
    h_of_h: float
    bound_thm6: float
    bound_cor5: float
    bound_cor5_size: float
    bound_cor6: float

    def violation(self) -> float:
        """Largest breach of the bound chain, compared on squared values.

        Squaring keeps rounding noise in the entropies (about 1e-16 nats) from
        being inflated to 1e-8 by the square root.
        """
        bounds = (self.bound_thm6, self.bound_cor5, self.bound_cor5_size, self.bound_cor6)
        sq = [b * b for b in bounds]
        return max(
            max(self.affinity**2 - s for s in sq),
            sq[0] - sq[1],
            sq[1] - sq[2],
        )

    def holds(self, tol: float = 1e-12) -> bool:
        return self.violation() <= tol


def entropy_capacity_bounds(
    machine: LearningMachine, p: Pmf, m: int | None = None, budget: int = DEFAULT_TYPE_BUDGET
) -> EntropyBounds:
    """Affinity and the bounds through ``I(S_m; H)``, ``H(H)``, ``log|H|`` and the type count.

    ``I(S_m; H)`` is computed as ``I(type; H)``, which is the same quantity
    because the hypothesis depends on the sample only through its type.
    """
    _check_p(machine, p)
    m = machine.resolve_m(m)
    tk = _TypeKernel(machine, m, budget)
    affinity = _affinity_of(tk.joint(p))
    jt = JointPmf(tk.joint_type_h(p))
    mi = mutual_information(jt)
    h = shannon_entropy(jt.marginal_y())
    n = machine.observation_alphabet_size
    return EntropyBounds(
        affinity=affinity,
        mi_type_h=mi,
        h_of_h=h,
        bound_thm6=math.sqrt(mi / (2 * m)),
        bound_cor5=math.sqrt(h / (2 * m)),
        bound_cor5_size=math.sqrt(math.log(tk.h_size) / (2 * m)),
        bound_cor6=math.sqrt(n * math.log(1 + m) / (2 * m)),
    )
