"""Seeded Monte Carlo runs of the two fair-coin classifier experiments.

Each trial gets its own generator, seeded from ``(master_seed, m, trial)``
through :class:`numpy.random.SeedSequence` and driving a PCG64 bit
generator.  A trial's draws therefore do not depend on how trials are
scheduled, and results are combined in trial order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .capacity import bernoulli_affinity_closed, randomized_capacity_closed

DEFAULT_M_VALUES = (10, 25, 50, 100, 200)

__all__ = [
    "DEFAULT_M_VALUES",
    "McConfig",
    "McRecord",
    "McResult",
    "trial_generator",
    "simulate_majority",
    "simulate_randomized_classifier",
]


@dataclass(frozen=True)
class McConfig:
    m_values: tuple[int, ...] = DEFAULT_M_VALUES
    trials: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        if not self.m_values:
            raise ValueError("m_values must not be empty")
        if any(m < 1 for m in self.m_values):
            raise ValueError("every m must be positive")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class McRecord:
    m: int
    empirical_risk_mean: float
    standard_error: float
    capacity: float
    tight_capacity: float | None = None

    @property
    def bound_det(self) -> float:
        return self.empirical_risk_mean + self.capacity

    @property
    def bound_rand(self) -> float | None:
        if self.tight_capacity is None:
            return None
        return self.empirical_risk_mean + self.tight_capacity


@dataclass(frozen=True)
class McResult:
    experiment: str
    config: McConfig
    records: tuple[McRecord, ...] = field(default=())

    def by_m(self, m: int) -> McRecord:
        for r in self.records:
            if r.m == m:
                return r
        raise KeyError(m)


def trial_generator(master_seed: int, m: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=(m, trial))))


def _majority_error(rng: np.random.Generator, m: int) -> float:
    ones = int(rng.integers(0, 2, size=m).sum())
    # Ties go to label 1, so the training error is the fraction of zeros.
    return (m - ones) / m if 2 * ones >= m else ones / m


def _randomized_error(rng: np.random.Generator, m: int) -> float:
    ones = int(rng.integers(0, 2, size=m).sum())
    predict_one = rng.random() < ones / m
    return (m - ones) / m if predict_one else ones / m


def _run(trial_fn, cfg: McConfig, m: int, workers: int) -> tuple[float, float]:
    def one(t):
        return trial_fn(trial_generator(cfg.master_seed, m, t), m)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            errors = np.fromiter(pool.map(one, range(cfg.trials)), dtype=np.float64, count=cfg.trials)
    else:
        errors = np.fromiter(map(one, range(cfg.trials)), dtype=np.float64, count=cfg.trials)
    mean = math.fsum(errors) / cfg.trials
    if cfg.trials == 1:
        return mean, 0.0
    var = math.fsum((errors - mean) ** 2) / (cfg.trials - 1)
    return mean, math.sqrt(var / cfg.trials)


def simulate_majority(cfg: McConfig, workers: int = 1) -> McResult:
    """Training error of the majority-label classifier on ``m`` fair bits.

    Capacity column: affinity of the empirical-average machine at ``phi = 1/2``.
    """
    records = []
    for m in cfg.m_values:
        mean, se = _run(_majority_error, cfg, m, workers)
        records.append(McRecord(m, mean, se, bernoulli_affinity_closed(0.5, m)))
    return McResult("majority", cfg, tuple(records))


def simulate_randomized_classifier(cfg: McConfig, workers: int = 1) -> McResult:
    """Training error of the classifier that predicts 1 throughout with probability ``s/m``.

    Reports both the empirical-average capacity and the randomized-label
    capacity ``1/(2m)``, which the gap to the true risk of 1/2 meets exactly.
    """
    records = []
    for m in cfg.m_values:
        mean, se = _run(_randomized_error, cfg, m, workers)
        records.append(
            McRecord(
                m,
                mean,
                se,
                bernoulli_affinity_closed(0.5, m),
                tight_capacity=randomized_capacity_closed(m, 2),
            )
        )
    return McResult("randomized", cfg, tuple(records))
