"""Cubic RBF interpolation with a linear polynomial tail.

The interpolant is

    s(x) = sum_i w_i * ||x - x_i||^3 + b.x + a

with ``(w, b, a)`` obtained from the saddle-point system

    [[Phi, P], [P^T, 0]] [w; c] = [y; 0],   c = (b, a),

where ``Phi_ij = ||x_i - x_j||^3`` and the rows of ``P`` are ``(x_i, 1)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist

DEDUP_TOL = 1e-10
RIDGE = 1e-8


class SurrogateFitError(RuntimeError):
    """The interpolation system could not be solved, even with the ridge fallback."""


def cubic(r):
    return r**3


@dataclass(frozen=True)
class Dataset:
    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        vals = np.asarray(self.values, dtype=float).ravel()
        if pts.shape[0] != vals.shape[0]:
            raise ValueError(f"{pts.shape[0]} points but {vals.shape[0]} values")
        if not (np.isfinite(pts).all() and np.isfinite(vals).all()):
            raise ValueError("dataset contains NaN or infinite entries")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.shape[0]

    def append(self, point, value) -> "Dataset":
        return Dataset(np.vstack([self.points, np.atleast_2d(point)]), np.append(self.values, value))

    def dedup(self, tol: float = DEDUP_TOL) -> "Dataset":
        """Drop points within ``tol`` (inf-norm) of a later point, keeping the later one."""
        n = len(self)
        keep = np.ones(n, dtype=bool)
        if n > 1:
            d = cdist(self.points, self.points, metric="chebyshev")
            for i in range(n - 1):
                if (d[i, i + 1 :] < tol).any():
                    keep[i] = False
        if keep.all():
            return self
        return Dataset(self.points[keep], self.values[keep])


@dataclass(frozen=True)
class RbfModel:
    centers: np.ndarray
    weights: np.ndarray
    tail_slope: np.ndarray  # b
    tail_const: float  # a
    kernel: str = "cubic"
    ridge: float = field(default=0.0, compare=False)

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    def __call__(self, x) -> np.ndarray | float:
        return predict(self, x)

    def tail_residual(self) -> np.ndarray:
        """P^T w, which is zero for an exact solve."""
        return np.append(self.centers.T @ self.weights, self.weights.sum())


def _saddle_matrix(points: np.ndarray, ridge: float = 0.0) -> np.ndarray:
    n, m = points.shape
    phi = cubic(cdist(points, points))
    if ridge:
        phi = phi + ridge * np.eye(n)
    p = np.hstack([points, np.ones((n, 1))])
    a = np.zeros((n + m + 1, n + m + 1))
    a[:n, :n] = phi
    a[:n, n:] = p
    a[n:, :n] = p.T
    return a


def _solve(a: np.ndarray, rhs: np.ndarray, strict: bool = True) -> np.ndarray | None:
    # strict: an ill-conditioning warning counts as a failed solve
    with warnings.catch_warnings():
        warnings.simplefilter("error" if strict else "ignore", scipy.linalg.LinAlgWarning)
        try:
            sol = scipy.linalg.solve(a, rhs, assume_a="sym")
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning, ValueError):
            return None
    if not np.isfinite(sol).all():
        return None
    if not strict and np.abs(a @ sol - rhs).max() > 1e-6 * (1.0 + np.abs(rhs).max()):
        return None
    return sol


def fit(data: Dataset) -> RbfModel:
    """Fit the interpolant to ``data`` (deduplicated first).

    A failed solve is retried once with a 1e-8 ridge on the kernel block.
    """
    data = data.dedup()
    pts, y = data.points, data.values
    n, m = pts.shape
    if n < 2:
        raise SurrogateFitError(f"need at least 2 distinct points to fit, got {n}")
    rhs = np.concatenate([y, np.zeros(m + 1)])
    ridge = 0.0
    sol = _solve(_saddle_matrix(pts), rhs)
    if sol is None:
        ridge = RIDGE
        sol = _solve(_saddle_matrix(pts, ridge), rhs, strict=False)
    if sol is None:
        raise SurrogateFitError(f"singular interpolation system ({n} points in {m} dimensions)")
    return RbfModel(
        centers=pts.copy(),
        weights=sol[:n],
        tail_slope=sol[n : n + m],
        tail_const=float(sol[n + m]),
        ridge=ridge,
    )


def predict(model: RbfModel, x) -> np.ndarray | float:
    """Evaluate the interpolant at one point (returns float) or at rows of a matrix."""
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    xs = x.reshape(1, -1) if single else x
    if xs.shape[1] != model.dim:
        raise ValueError(f"model has dimension {model.dim}, got points of dimension {xs.shape[1]}")
    out = cubic(cdist(xs, model.centers)) @ model.weights + xs @ model.tail_slope + model.tail_const
    return float(out[0]) if single else out


def update(model: RbfModel, new_point, new_value: float, data: Dataset) -> RbfModel:
    """Refit on ``data`` plus the new observation.

    ``model`` is only used for a dimension check; the result is a full refit.
    """
    new_point = np.asarray(new_point, dtype=float)
    if new_point.shape != (model.dim,):
        raise ValueError(f"model has dimension {model.dim}, got point of shape {new_point.shape}")
    return fit(data.append(new_point, new_value))
