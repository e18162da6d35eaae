"""Latin hypercube designs on the unit cube."""

from __future__ import annotations

import numpy as np


def lhs(n0: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Jittered Latin hypercube sample of shape ``(n0, m)``.

    Each column holds exactly one point in every stratum ``[k/n0, (k+1)/n0)``,
    placed uniformly inside the stratum; columns are permuted independently.
    """
    if int(n0) != n0 or int(m) != m or n0 < 1 or m < 1:
        raise ValueError(f"lhs needs positive integer sizes, got n0={n0}, m={m}")
    n0, m = int(n0), int(m)
    out = np.empty((n0, m))
    for j in range(m):
        strata = rng.permutation(n0)
        jitter = rng.random(n0)
        col = (strata + jitter) / n0
        # rounding can push k + jitter onto the next stratum edge
        out[:, j] = np.minimum(col, np.nextafter((strata + 1) / n0, 0.0))
    # keep points strictly inside the cube
    np.maximum(out, np.finfo(float).tiny, out=out)
    return out


def default_initial_size(m: int, budget: int) -> int:
    """2(m+1) points, but never more than half the evaluation budget."""
    return max(1, min(2 * (m + 1), budget // 2))
