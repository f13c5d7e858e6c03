"""Finite probability mass functions and distribution-level functionals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import rel_entr

from .errors import DimensionError

SUM_TOL = 1e-12

__all__ = [
    "Pmf",
    "Lemma1State",
    "similarity",
    "tv_distance",
    "tv_distance_l1",
    "lemma1_product",
    "effective_support",
    "geometric_pmf",
    "shannon_entropy",
    "kl_divergence",
]


class Pmf:
    """Probability mass function over the alphabet ``{0, ..., n-1}``.

    The mass vector is copied and frozen on construction.  Entries must be
    nonnegative and sum to one within ``1e-12``.
    """

    __slots__ = ("_mass",)

    def __init__(self, mass):
        arr = np.array(mass, dtype=np.float64).ravel()
        if arr.size < 1:
            raise ValueError("a Pmf needs at least one symbol")
        if not np.all(np.isfinite(arr)):
            raise ValueError("probabilities must be finite")
        if arr.min() < 0.0:
            raise ValueError(f"negative probability {arr.min()!r}")
        total = math.fsum(arr)
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        arr.setflags(write=False)
        self._mass = arr

    @classmethod
    def uniform(cls, n: int) -> Pmf:
        if n < 1:
            raise ValueError("alphabet size must be positive")
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def delta(cls, n: int, index: int = 0) -> Pmf:
        if not 0 <= index < n:
            raise ValueError(f"index {index} outside alphabet of size {n}")
        mass = np.zeros(n)
        mass[index] = 1.0
        return cls(mass)

    @classmethod
    def bernoulli(cls, phi: float) -> Pmf:
        """Binary pmf ``(1 - phi, phi)``; symbol 1 is the success."""
        if not 0.0 <= phi <= 1.0:
            raise ValueError(f"phi={phi!r} outside [0, 1]")
        return cls([1.0 - phi, phi])

    @classmethod
    def from_weights(cls, weights) -> Pmf:
        """Normalise nonnegative weights into a Pmf."""
        w = np.asarray(weights, dtype=np.float64)
        total = math.fsum(w.ravel())
        if total <= 0.0:
            raise ValueError("weights must have positive total")
        return cls(w / total)

    @property
    def mass(self) -> np.ndarray:
        return self._mass

    @property
    def alphabet_size(self) -> int:
        return self._mass.size

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self._mass))

    def __len__(self) -> int:
        return self._mass.size

    def __getitem__(self, index):
        return self._mass[index]

    def __iter__(self):
        return iter(self._mass.tolist())

    def __eq__(self, other):
        if not isinstance(other, Pmf):
            return NotImplemented
        return self._mass.shape == other._mass.shape and bool(np.all(self._mass == other._mass))

    def __hash__(self):
        return hash(self._mass.tobytes())

    def __repr__(self):
        return f"Pmf({np.array2string(self._mass, precision=6, separator=', ')})"

    def descriptor(self, digits: int = 12) -> tuple[float, ...]:
        """Rounded mass tuple, used as a sortable key for this distribution."""
        return tuple(round(float(x), digits) for x in self._mass)


def _check_same_alphabet(p: Pmf, q: Pmf) -> None:
    if p.alphabet_size != q.alphabet_size:
        raise DimensionError(
            f"alphabet sizes differ: {p.alphabet_size} != {q.alphabet_size}"
        )


def similarity(p: Pmf, q: Pmf) -> float:
    """Overlap ``sum_a min(p(a), q(a))``."""
    _check_same_alphabet(p, q)
    return math.fsum(np.minimum(p.mass, q.mass))


def tv_distance(p: Pmf, q: Pmf) -> float:
    """Total variation distance, ``1 - similarity(p, q)``."""
    return 1.0 - similarity(p, q)


def tv_distance_l1(p: Pmf, q: Pmf) -> float:
    """Total variation distance as half the L1 norm of ``p - q``.

    Kept as a separate code path from :func:`tv_distance` so the two can
    check each other.
    """
    _check_same_alphabet(p, q)
    return 0.5 * math.fsum(np.abs(p.mass - q.mass))


@dataclass(frozen=True)
class Lemma1State:
    """Where the product recursion stopped.

    ``rho`` and ``nu`` are the pair that would produce the next factor;
    ``history`` holds the partial product after each factor taken.
    """

    rho: Pmf
    nu: Pmf
    partial_product: float
    steps_taken: int
    converged: bool
    history: tuple[float, ...] = field(default=(), repr=False)


def lemma1_product(
    p: Pmf, q: Pmf, max_steps: int = 10_000, tol: float = 1e-9
) -> tuple[float, Lemma1State]:
    """Upper bound on ``tv_distance(p, q)`` from a finite product of factors.

    Each factor is ``1 - sum_a rho(a) nu(a)``; the pair is then updated to
    ``rho(1 - nu) / factor`` and ``nu(1 - rho) / factor``, starting from
    ``(p, q)``.  Every partial product is at least the true distance and the
    infinite product equals it.

    Stops after ``max_steps`` factors, when a factor drops to ``tol`` or
    below (distance is zero within ``tol``), or when the partial product
    moves by less than ``tol``.
    """
    _check_same_alphabet(p, q)
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    rho = p.mass.copy()
    nu = q.mass.copy()
    product = 1.0
    history = []
    converged = False
    steps = 0
    while steps < max_steps:
        factor = 1.0 - math.fsum(rho * nu)
        previous = product
        product *= factor
        steps += 1
        history.append(product)
        if factor <= tol:
            converged = True
            break
        if previous - product < tol:
            converged = True
            break
        rho, nu = rho * (1.0 - nu) / factor, nu * (1.0 - rho) / factor
        # Renormalise to stop rounding drift; the exact update already sums to 1.
        rho /= math.fsum(rho)
        nu /= math.fsum(nu)

    state = Lemma1State(
        rho=Pmf(rho),
        nu=Pmf(nu),
        partial_product=product,
        steps_taken=steps,
        converged=converged,
        history=tuple(history),
    )
    return product, state


def effective_support(p: Pmf) -> float:
    """Effective support set size ``1 + (sum_z sqrt(p(z)(1 - p(z))))**2``."""
    root = math.fsum(np.sqrt(p.mass * (1.0 - p.mass)))
    return 1.0 + root * root


def geometric_pmf(alpha: float, tail_mass_tol: float = 1e-12) -> Pmf:
    """Geometric law ``alpha (1 - alpha)**(z - 1)`` on ``z = 1, 2, ...``.

    Truncated to the shortest prefix whose tail mass ``(1 - alpha)**n`` is at
    most ``tail_mass_tol``, then renormalised.  Index 0 holds ``z = 1``.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha={alpha!r} outside (0, 1]")
    if not 0.0 < tail_mass_tol < 1.0:
        raise ValueError("tail_mass_tol must lie in (0, 1)")
    q = 1.0 - alpha
    if q == 0.0:
        return Pmf.delta(1)
    n = max(1, math.ceil(math.log(tail_mass_tol) / math.log(q)))
    # The log ratio can land one off either way; settle it exactly.
    while n > 1 and q ** (n - 1) <= tail_mass_tol:
        n -= 1
    while q**n > tail_mass_tol:
        n += 1
    z = np.arange(n)
    return Pmf.from_weights(alpha * q**z)


def shannon_entropy(p: Pmf) -> float:
    """Entropy in nats, with ``0 log 0 = 0``."""
    m = p.mass[p.mass > 0]
    return max(0.0, -math.fsum(m * np.log(m)))


def kl_divergence(p: Pmf, q: Pmf) -> float:
    """``D(p || q)`` in nats; ``math.inf`` when ``p`` is not absolutely continuous wrt ``q``."""
    _check_same_alphabet(p, q)
    terms = rel_entr(p.mass, q.mass)
    if np.isinf(terms).any():
        return math.inf
    return max(0.0, math.fsum(terms))
