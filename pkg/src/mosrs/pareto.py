"""Pareto dominance, the nondominated archive, and hypercube leader selection.

Both objectives are minimized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

CELL_FITNESS = 10.0
DEFAULT_DIVISIONS = 10


class ObjectivePair(NamedTuple):
    f1: float
    f2: float


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True if ``a`` is no worse than ``b`` in both objectives and strictly better in one."""
    return a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1])


def pareto_front(ys: Sequence[Sequence[float]]) -> list[int]:
    """Indices (ascending) of the entries of ``ys`` not dominated by any other entry.

    Exact duplicates do not dominate each other, so all copies are kept.
    """
    y = np.asarray(ys, dtype=float)
    if y.ndim != 2 or y.shape[0] == 0 or y.shape[1] != 2:
        raise ValueError("pareto_front needs a nonempty list of objective pairs")
    # sweep in (f1, f2) order: an entry survives iff its f2 is below the best f2
    # seen among entries with strictly smaller f1, or ties the current minimum
    order = np.lexsort((y[:, 1], y[:, 0]))
    keep = []
    best_f2 = math.inf
    i = 0
    n = len(order)
    while i < n:
        # group equal f1 values; within a group only the minimal f2 can survive
        j = i
        f1 = y[order[i], 0]
        while j < n and y[order[j], 0] == f1:
            j += 1
        group = order[i:j]
        gmin = y[group[0], 1]
        if gmin < best_f2:
            keep.extend(int(k) for k in group if y[k, 1] == gmin)
            best_f2 = gmin
        i = j
    return sorted(keep)


@dataclass(frozen=True)
class ArchiveEntry:
    point: np.ndarray
    objectives: ObjectivePair
    eval_index: int


@dataclass
class ParetoArchive:
    """Unbounded set of mutually nondominated, truly evaluated points."""

    entries: list[ArchiveEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([e.objectives for e in self.entries], dtype=float).reshape(-1, 2)

    def insert(self, point, objectives: Sequence[float], eval_index: int) -> bool:
        """Add a candidate unless an archived entry dominates it.

        Entries dominated by the candidate are removed. Returns whether the
        candidate entered the archive.
        """
        obj = ObjectivePair(float(objectives[0]), float(objectives[1]))
        if not (math.isfinite(obj.f1) and math.isfinite(obj.f2)):
            raise ValueError(f"non-finite objectives {obj}")
        if any(dominates(e.objectives, obj) for e in self.entries):
            return False
        self.entries = [e for e in self.entries if not dominates(obj, e.objectives)]
        self.entries.append(ArchiveEntry(np.asarray(point, dtype=float).copy(), obj, int(eval_index)))
        return True

    def sorted_entries(self) -> list[ArchiveEntry]:
        """Entries ordered by f1, then f2, then evaluation index."""
        return sorted(self.entries, key=lambda e: (e.objectives.f1, e.objectives.f2, e.eval_index))


def insert(archive: ParetoArchive, point, objectives, eval_index: int = -1) -> ParetoArchive:
    """Functional form of :meth:`ParetoArchive.insert`; returns a new archive."""
    new = ParetoArchive(list(archive.entries))
    new.insert(point, objectives, eval_index)
    return new


@dataclass(frozen=True)
class Grid:
    divisions: int
    lower: np.ndarray
    upper: np.ndarray
    cells: tuple[tuple[int, int], ...]  # cell of each archive entry, in archive order
    occupancy: dict[tuple[int, int], int]


def _cell_indices(values: np.ndarray, lo: float, hi: float, divisions: int) -> np.ndarray:
    if hi <= lo:
        return np.zeros(len(values), dtype=int)
    idx = np.floor((values - lo) / (hi - lo) * divisions).astype(int)
    return np.clip(idx, 0, divisions - 1)


def grid_from_objectives(objectives: np.ndarray, divisions: int = DEFAULT_DIVISIONS) -> Grid:
    if divisions < 1:
        raise ValueError("divisions must be positive")
    y = np.asarray(objectives, dtype=float).reshape(-1, 2)
    if len(y) == 0:
        raise ValueError("cannot build a grid over an empty set")
    lo, hi = y.min(axis=0), y.max(axis=0)
    ix = _cell_indices(y[:, 0], lo[0], hi[0], divisions)
    iy = _cell_indices(y[:, 1], lo[1], hi[1], divisions)
    cells = tuple(zip(ix.tolist(), iy.tolist()))
    occupancy: dict[tuple[int, int], int] = {}
    for c in cells:
        occupancy[c] = occupancy.get(c, 0) + 1
    return Grid(divisions, lo, hi, cells, occupancy)


def build_grid(archive: ParetoArchive, divisions: int = DEFAULT_DIVISIONS) -> Grid:
    """Split the bounding box of the archived objectives into ``divisions`` x ``divisions`` cells.

    Points on the upper edge go to the last cell; an axis with zero extent
    collapses to a single cell.
    """
    return grid_from_objectives(archive.objectives, divisions)


def roulette_index(grid: Grid, rng: np.random.Generator) -> int:
    """Pick a cell with probability proportional to 10/occupancy, then a member uniformly.

    Returns the position of the chosen member in the sequence the grid was built from.
    """
    cells = sorted(grid.occupancy)
    fitness = np.array([CELL_FITNESS / grid.occupancy[c] for c in cells])
    cum = np.cumsum(fitness)
    k = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    cell = cells[min(k, len(cells) - 1)]
    members = [i for i, c in enumerate(grid.cells) if c == cell]
    return members[int(rng.integers(len(members)))]


def select_leader(archive: ParetoArchive, grid: Grid, rng: np.random.Generator) -> ArchiveEntry:
    if len(archive) == 0:
        raise ValueError("cannot select a leader from an empty archive")
    return archive.entries[roulette_index(grid, rng)]


def hypervolume_2d(objectives, reference: Sequence[float]) -> float:
    """Area dominated by ``objectives`` and bounded by ``reference`` (minimization).

    Points not strictly better than the reference in both objectives add nothing.
    """
    y = np.asarray(objectives, dtype=float).reshape(-1, 2)
    r1, r2 = float(reference[0]), float(reference[1])
    y = y[(y[:, 0] < r1) & (y[:, 1] < r2)]
    if len(y) == 0:
        return 0.0
    y = y[np.lexsort((y[:, 1], y[:, 0]))]
    area = 0.0
    best_f2 = r2
    for f1, f2 in y:
        if f2 < best_f2:
            area += (r1 - f1) * (best_f2 - f2)
            best_f2 = f2
    return float(area)
