"""Typed, bounded search spaces and the unit-cube mapping used by the optimizer."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np


class Kind(str, Enum):
    CONTINUOUS = "continuous"
    INTEGER = "integer"
    BINARY = "binary"


@dataclass(frozen=True)
class ParamSpec:
    """One hyperparameter: name, kind, native bounds and the tabulated default.

    ``default`` may be ``None`` (a "Random" default) and is allowed to sit
    outside ``[lower, upper]``; it is stored as given and never used by the
    search.
    """

    name: str
    kind: Kind
    lower: float
    upper: float
    default: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not self.name.isidentifier():
            raise ValueError(f"parameter name {self.name!r} is not an identifier")
        if self.kind is Kind.BINARY:
            if (self.lower, self.upper) != (0, 1):
                raise ValueError(f"{self.name}: binary parameters have bounds [0, 1]")
        else:
            if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
                raise ValueError(f"{self.name}: bounds must be finite")
            if not self.lower < self.upper:
                raise ValueError(f"{self.name}: lower must be < upper")
        if self.kind is Kind.INTEGER:
            if self.lower != int(self.lower) or self.upper != int(self.upper):
                raise ValueError(f"{self.name}: integer parameters need integral bounds")

    @property
    def width(self) -> float:
        return float(self.upper) - float(self.lower)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "lower": self.lower,
            "upper": self.upper,
            "default": self.default,
        }


@dataclass(frozen=True)
class SearchSpace:
    params: tuple[ParamSpec, ...]

    def __init__(self, params: Iterable[ParamSpec]):
        params = tuple(params)
        if not params:
            raise ValueError("a search space needs at least one parameter")
        names = [p.name for p in params]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate parameter names in {names}")
        object.__setattr__(self, "params", params)

    @property
    def dim(self) -> int:
        return len(self.params)

    @property
    def names(self) -> list[str]:
        return [p.name for p in self.params]

    @property
    def lower(self) -> np.ndarray:
        return np.array([p.lower for p in self.params], dtype=float)

    @property
    def upper(self) -> np.ndarray:
        return np.array([p.upper for p in self.params], dtype=float)

    def __len__(self) -> int:
        return self.dim

    def to_dicts(self) -> list[dict]:
        return [p.to_dict() for p in self.params]

    @classmethod
    def from_dicts(cls, rows: Sequence[dict]) -> "SearchSpace":
        return cls(
            ParamSpec(
                name=r["name"],
                kind=Kind(r["kind"]),
                lower=r.get("lower", 0),
                upper=r.get("upper", 1),
                default=r.get("default"),
            )
            for r in rows
        )

    def normalize(self, x_native: Sequence[float]) -> np.ndarray:
        return normalize(x_native, self)

    def denormalize(self, u: Sequence[float]) -> list[float | int]:
        return denormalize(u, self)

    def as_dict(self, x_native: Sequence[float | int]) -> dict[str, float | int]:
        return dict(zip(self.names, x_native))


def normalize(x_native: Sequence[float], space: SearchSpace) -> np.ndarray:
    x = np.asarray(x_native, dtype=float)
    if x.shape != (space.dim,):
        raise ValueError(f"expected a vector of length {space.dim}, got shape {x.shape}")
    lo, hi = space.lower, space.upper
    bad = (x < lo) | (x > hi) | ~np.isfinite(x)
    if bad.any():
        names = [space.names[i] for i in np.flatnonzero(bad)]
        raise ValueError(f"out-of-bounds values for {names}")
    return (x - lo) / (hi - lo)


def denormalize(u: Sequence[float], space: SearchSpace) -> list[float | int]:
    """Map a unit-cube point to native values.

    Integers are rounded half-up and clamped, binaries thresholded at 0.5.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (space.dim,):
        raise ValueError(f"expected a vector of length {space.dim}, got shape {u.shape}")
    if ((u < 0.0) | (u > 1.0) | ~np.isfinite(u)).any():
        raise ValueError("unit-cube coordinates must lie in [0, 1]")
    out: list[float | int] = []
    for p, ui in zip(space.params, u):
        if p.kind is Kind.BINARY:
            out.append(1 if ui >= 0.5 else 0)
        elif p.kind is Kind.INTEGER:
            v = math.floor(p.lower + ui * p.width + 0.5)
            out.append(int(min(max(v, p.lower), p.upper)))
        else:
            out.append(float(p.lower + ui * p.width))
    return out


def _p(name, kind, lower, upper, default):
    return ParamSpec(name, Kind(kind), lower, upper, default)


_SEED = _p("seed", "integer", 0, 10_000_000, None)

_BUILTIN = {
    "ga": (
        _SEED,
        _p("ga_pop_size", "integer", 50, 500, 150),
        _p("ga_elitism", "binary", 0, 1, 1),
        _p("ga_mutation_rate", "continuous", 0.2, 0.99, 0.02),
        _p("ga_crossover_rate", "continuous", 0.2, 0.99, 0.80),
    ),
    "sa": (
        _SEED,
        _p("tstep", "continuous", -2.0, 2.0, 2.0),
        _p("qstep", "continuous", -5.0, 5.0, 2.0),
        _p("dstep", "continuous", -5.0, 5.0, 2.0),
        _p("rtrf", "continuous", 0.0001, 0.99, 0.80),
        _p("trnrf", "continuous", 0.0001, 0.99, 1.0),
        _p("quarf", "continuous", 0.0001, 0.99, 1.0),
        _p("dihrf", "continuous", 0.0001, 0.99, 1.0),
        _p("accs", "integer", 100, 30000, 30000),
        _p("rejs", "integer", 100, 30000, 30000),
        _p("linear_schedule", "binary", 0, 1, 1),
    ),
    "ls": (
        _SEED,
        _p("sw_max_its", "integer", 100, 1000, 300),
        _p("sw_max_succ", "integer", 2, 10, 4),
        _p("sw_max_fail", "integer", 2, 10, 4),
    ),
}

BUILTIN_SPACES = ("ga", "sa", "ls", "hb")


def builtin_space(algorithm: str) -> SearchSpace:
    """Return one of the AutoDock search spaces: ``ga``, ``sa``, ``ls`` or ``hb``.

    ``hb`` (GA combined with local search) is the GA parameters followed by
    the LS parameters, with the shared ``seed`` kept once.
    """
    algorithm = algorithm.lower()
    if algorithm == "hb":
        params = list(_BUILTIN["ga"])
        params += [p for p in _BUILTIN["ls"] if p.name not in {q.name for q in params}]
        return SearchSpace(params)
    if algorithm not in _BUILTIN:
        raise ValueError(f"unknown builtin space {algorithm!r}; choose from {BUILTIN_SPACES}")
    return SearchSpace(_BUILTIN[algorithm])


def unit_space(dim: int, prefix: str = "x") -> SearchSpace:
    """Continuous ``[0, 1]^dim`` space, the canonical domain of zdt1."""
    return SearchSpace(_p(f"{prefix}{i + 1}", "continuous", 0.0, 1.0, None) for i in range(dim))
