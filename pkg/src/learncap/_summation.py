"""Compensated scatter-add used for every expectation over training-set types.

Plain ``np.add.at`` / ``bincount`` accumulate sequentially and their rounding
depends on the order of the contributions.  ``scatter_sum`` sorts the
contributions by target and sums each target's terms with a compensated
method, so results agree to ~1 ulp whatever order the types arrive in.
"""

from __future__ import annotations

import math

import numpy as np


def scatter_sum(targets: np.ndarray, values: np.ndarray, size: int) -> np.ndarray:
    """Return ``out`` with ``out[i] = sum(values[targets == i])``, compensated.

    Two strategies, picked by shape:

    * few targets with long runs: ``math.fsum`` over each run (correctly
      rounded);
    * many targets with short runs: Neumaier summation vectorised across
      targets, one pass per position within a run.
    """
    targets = np.asarray(targets, dtype=np.int64).ravel()
    values = np.asarray(values, dtype=np.float64).ravel()
    out = np.zeros(size, dtype=np.float64)
    if targets.size == 0:
        return out

    order = np.argsort(targets, kind="stable")
    t_sorted = targets[order]
    v_sorted = values[order]
    counts = np.bincount(t_sorted, minlength=size)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    occupied = np.flatnonzero(counts)
    longest = int(counts.max())

    if occupied.size <= longest:
        for idx in occupied:
            lo = starts[idx]
            out[idx] = math.fsum(v_sorted[lo : lo + counts[idx]])
        return out

    rank = np.arange(t_sorted.size) - starts[t_sorted]
    by_rank = np.lexsort((t_sorted, rank))
    t_r = t_sorted[by_rank]
    v_r = v_sorted[by_rank]
    bounds = np.concatenate(([0], np.cumsum(np.bincount(rank, minlength=longest))))

    comp = np.zeros(size, dtype=np.float64)
    for k in range(longest):
        tk = t_r[bounds[k] : bounds[k + 1]]
        vk = v_r[bounds[k] : bounds[k + 1]]
        s = out[tk]
        total = s + vk
        big = np.abs(s) >= np.abs(vk)
        comp[tk] += np.where(big, (s - total) + vk, (vk - total) + s)
        out[tk] = total
    return out + comp
