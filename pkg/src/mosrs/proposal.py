"""Candidate generation around the leader, step-size adaptation, and surrogate screening."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .pareto import DEFAULT_DIVISIONS, grid_from_objectives, pareto_front, roulette_index
from .surrogate import RbfModel, predict

GAMMA_INIT = 0.2
GAMMA_MAX = 0.2
GAMMA_MIN = 0.2 * 0.5**6
SUCCESS_TOL = 3
FAIL_TOL = 3


def default_perturb_prob(m: int) -> float:
    return min(1.0, 20.0 / m)


def default_num_candidates(m: int) -> int:
    return 100 * m


@dataclass(frozen=True)
class SrsState:
    gamma: float = GAMMA_INIT
    consec_success: int = 0
    consec_fail: int = 0
    num_candidates: int = 100
    perturb_prob: float = 1.0
    gamma_min: float = GAMMA_MIN
    gamma_max: float = GAMMA_MAX
    success_tol: int = SUCCESS_TOL
    fail_tol: int = FAIL_TOL

    def __post_init__(self):
        if not 0 < self.gamma_min <= self.gamma_max:
            raise ValueError("need 0 < gamma_min <= gamma_max")
        if not self.gamma_min <= self.gamma <= self.gamma_max:
            raise ValueError(f"gamma {self.gamma} outside [{self.gamma_min}, {self.gamma_max}]")
        if not 0 < self.perturb_prob <= 1:
            raise ValueError("perturb_prob must lie in (0, 1]")
        if self.num_candidates < 1 or self.success_tol < 1 or self.fail_tol < 1:
            raise ValueError("candidate count and thresholds must be positive")
        if self.consec_success < 0 or self.consec_fail < 0:
            raise ValueError("counters must be nonnegative")
        if self.consec_success and self.consec_fail:
            raise ValueError("at most one counter can be nonzero")


def generate_candidates(x_best, state: SrsState, rng: np.random.Generator, gamma: float | None = None) -> np.ndarray:
    """``num_candidates`` Gaussian perturbations of ``x_best``, clipped to the unit cube.

    Each coordinate is perturbed with probability ``perturb_prob``; a candidate
    with no coordinate selected gets one chosen uniformly at random.
    """
    x = np.asarray(x_best, dtype=float)
    g = state.gamma if gamma is None else gamma
    n, m = state.num_candidates, x.shape[0]
    mask = rng.random((n, m)) < state.perturb_prob
    empty = np.flatnonzero(~mask.any(axis=1))
    if len(empty):
        mask[empty, rng.integers(m, size=len(empty))] = True
    v = rng.standard_normal((n, m)) * mask
    return np.clip(x + g * v, 0.0, 1.0)


def select_next(
    candidates,
    model_f1: RbfModel,
    model_f2: RbfModel,
    divisions: int = DEFAULT_DIVISIONS,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Screen candidates through both surrogates and pick one from the predicted front.

    The pick uses the same hypercube roulette as leader selection.
    """
    cands = np.atleast_2d(np.asarray(candidates, dtype=float))
    if len(cands) == 0:
        raise ValueError("no candidates to select from")
    if len(cands) == 1:
        return cands[0]
    pred = np.column_stack([predict(model_f1, cands), predict(model_f2, cands)])
    front = pareto_front(pred)
    grid = grid_from_objectives(pred[front], divisions)
    return cands[front[roulette_index(grid, rng)]]


def adapt_gamma(state: SrsState, improved: bool) -> SrsState:
    """Double gamma after ``success_tol`` straight improvements, halve after ``fail_tol`` failures."""
    if improved:
        succ, fail = state.consec_success + 1, 0
        gamma = state.gamma
        if succ >= state.success_tol:
            gamma, succ = min(2.0 * gamma, state.gamma_max), 0
    else:
        succ, fail = 0, state.consec_fail + 1
        gamma = state.gamma
        if fail >= state.fail_tol:
            gamma, fail = max(0.5 * gamma, state.gamma_min), 0
    return replace(state, gamma=gamma, consec_success=succ, consec_fail=fail)
