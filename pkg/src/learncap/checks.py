"""Seeded randomized suites for the inequalities between affinity, information and risk.

Each suite draws its instances from its own generator, derived from the
master seed and the suite's position, so suites can be run alone and give
the same instances as in a full run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .affinity import JointPmf, information_of_event, mutual_affinity, mutual_information
from .capacity import bernoulli_affinity_closed, entropy_capacity_bounds, machine_affinity, majority_affinity_closed
from .machines import count_types, make_tabular_machine
from .pmf import Pmf, kl_divergence, tv_distance
from .risk import LossTable, risk_gap, tight_loss
from .stability import stability_report

DEFAULT_INSTANCES = 1000
TOL = 1e-12

__all__ = ["SuiteResult", "SUITES", "run_suite", "run_all", "random_pmf", "random_channel", "random_tabular_machine"]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    instances: int
    failures: int
    worst_violation: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def random_pmf(rng: np.random.Generator, n: int, sparse: bool = False) -> Pmf:
    w = rng.exponential(size=n)
    if sparse and n > 1:
        w[rng.random(n) < 0.3] = 0.0
        if w.sum() == 0:
            w[rng.integers(n)] = 1.0
    return Pmf.from_weights(w)


def random_channel(rng: np.random.Generator, rows: int, cols: int, deterministic: bool = False) -> np.ndarray:
    if deterministic:
        out = np.zeros((rows, cols))
        out[np.arange(rows), rng.integers(cols, size=rows)] = 1.0
        return out
    w = rng.exponential(size=(rows, cols))
    return w / w.sum(axis=1, keepdims=True)


def random_joint(rng: np.random.Generator, shape) -> np.ndarray:
    w = rng.exponential(size=shape)
    return w / w.sum()


def random_tabular_machine(rng: np.random.Generator, max_n: int = 3, max_m: int = 5, max_h: int = 4):
    n = int(rng.integers(2, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    h = int(rng.integers(1, max_h + 1))
    table = random_channel(rng, count_types(n, m), h, deterministic=bool(rng.random() < 0.5))
    return make_tabular_machine(n, m, table, name="random"), n, m


# Each check returns its largest violation; a positive value fails the instance.


def _dpi(rng):
    a, h1, h2 = (int(rng.integers(2, 6)) for _ in range(3))
    j1 = random_channel(rng, 1, a)[0][:, None] * random_channel(rng, a, h1)
    j2 = j1 @ random_channel(rng, h1, h2)
    return mutual_affinity(JointPmf(j2)) - mutual_affinity(JointPmf(j1)) - TOL


def _info_cant_hurt(rng):
    a, b, c = (int(rng.integers(2, 5)) for _ in range(3))
    t = random_joint(rng, (a, b, c))
    grown = mutual_affinity(JointPmf.from_tensor(t, (0,), (1, 2)))
    base = mutual_affinity(JointPmf.from_tensor(t, (0,), (1,)))
    # Markov collapse: C drawn from B alone adds nothing.
    ab = random_joint(rng, (a, b))
    chain = ab[:, :, None] * random_channel(rng, b, c)[None, :, :]
    collapsed = mutual_affinity(JointPmf.from_tensor(chain, (0,), (1, 2)))
    return max(base - grown - TOL, abs(collapsed - mutual_affinity(JointPmf(ab))) - TOL)


def _event_bound(rng):
    j = JointPmf(random_joint(rng, (int(rng.integers(2, 7)), int(rng.integers(2, 7)))))
    py = j.marginal_y().mass
    return max(information_of_event(j, y) - (1.0 - py[y]) - TOL for y in range(j.y_size) if py[y] > 0)


def _pinsker(rng):
    n = int(rng.integers(2, 7))
    p, q = random_pmf(rng, n, sparse=True), random_pmf(rng, n)
    j = JointPmf(random_joint(rng, (n, int(rng.integers(2, 7)))))
    return max(
        tv_distance(p, q) - math.sqrt(kl_divergence(p, q) / 2.0) - TOL,
        mutual_affinity(j) - math.sqrt(mutual_information(j) / 2.0) - TOL,
    )


def _collision(rng):
    machine, n, m = random_tabular_machine(rng)
    rep = stability_report(machine, random_pmf(rng, n, sparse=True), m)
    return max(rep.collision_lower_bound - rep.s_value - TOL, abs(rep.s_value + rep.affinity - 1.0) - TOL)


def _entropy_bounds(rng):
    machine, n, m = random_tabular_machine(rng)
    b = entropy_capacity_bounds(machine, random_pmf(rng, n, sparse=True), m)
    return b.violation() - TOL


def _risk_gap(rng):
    machine, n, m = random_tabular_machine(rng)
    p = random_pmf(rng, n, sparse=True)
    h = machine.hypothesis_size(m)
    aff = machine_affinity(machine, p, m)
    loss = LossTable(rng.random((h, n)))
    tight = risk_gap(machine, p, m, tight_loss(machine, p, m))
    rev = risk_gap(machine, p, m, tight_loss(machine, p, m, reverse=True))
    return max(
        abs(risk_gap(machine, p, m, loss)) - aff - TOL,
        abs(tight - aff) - TOL,
        abs(rev + aff) - TOL,
    )


def _partial_order_suite() -> SuiteResult:
    # Deterministic grid; the instance count is fixed by the grid, not the argument.
    worst, failures, count = 0.0, 0, 0
    for m in (11, 51):
        for phi in np.linspace(0.0, 1.0, 201):
            v = majority_affinity_closed(float(phi), m) - bernoulli_affinity_closed(float(phi), m) - TOL
            count += 1
            if v > 0:
                failures += 1
                worst = max(worst, v)
    return SuiteResult("partial_order", count, failures, worst)


_RANDOM_SUITES: dict[str, Callable] = {
    "dpi": _dpi,
    "info_cant_hurt": _info_cant_hurt,
    "event_bound": _event_bound,
    "pinsker": _pinsker,
    "collision": _collision,
    "entropy_bounds": _entropy_bounds,
    "risk_gap": _risk_gap,
}

SUITES = tuple(_RANDOM_SUITES) + ("partial_order",)


def run_suite(name: str, seed: int = 0, instances: int = DEFAULT_INSTANCES) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    rng = np.random.default_rng([seed, SUITES.index(name)])
    if name == "partial_order":
        return _partial_order_suite()
    fn = _RANDOM_SUITES[name]
    worst, failures = 0.0, 0
    for _ in range(instances):
        v = fn(rng)
        if v > 0:
            failures += 1
            worst = max(worst, v)
    return SuiteResult(name, instances, failures, worst)


def run_all(seed: int = 0, instances: int = DEFAULT_INSTANCES) -> list[SuiteResult]:
    return [run_suite(name, seed, instances) for name in SUITES]
