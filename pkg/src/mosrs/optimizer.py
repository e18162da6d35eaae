"""The MO-SRS loop: LHS start, then one surrogate-screened true evaluation per iteration."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Mapping

import numpy as np

from . import evaluator as ev
from .pareto import DEFAULT_DIVISIONS, ObjectivePair, ParetoArchive, build_grid, hypervolume_2d, select_leader
from .proposal import (
    FAIL_TOL,
    GAMMA_INIT,
    GAMMA_MAX,
    GAMMA_MIN,
    SUCCESS_TOL,
    SrsState,
    adapt_gamma,
    default_num_candidates,
    default_perturb_prob,
    generate_candidates,
    select_next,
)
from .sampling import default_initial_size, lhs
from .space import SearchSpace
from .surrogate import Dataset, SurrogateFitError, fit

log = logging.getLogger(__name__)

OK = "ok"
INITIAL = "initial"
LOOP = "loop"


@dataclass(frozen=True)
class RunConfig:
    """Run settings. ``None`` fields are filled from the space dimension by :meth:`resolve`."""

    budget: int = 100
    n0: int | None = None
    num_candidates: int | None = None
    divisions: int = DEFAULT_DIVISIONS
    seed: int = 0
    gamma_init: float = GAMMA_INIT
    gamma_min: float = GAMMA_MIN
    gamma_max: float = GAMMA_MAX
    success_tol: int = SUCCESS_TOL
    fail_tol: int = FAIL_TOL
    perturb_prob: float | None = None
    max_failures: int | None = None  # abort once more evaluations than this have failed

    def resolve(self, m: int) -> "RunConfig":
        cfg = replace(
            self,
            n0=default_initial_size(m, self.budget) if self.n0 is None else self.n0,
            num_candidates=default_num_candidates(m) if self.num_candidates is None else self.num_candidates,
            perturb_prob=default_perturb_prob(m) if self.perturb_prob is None else self.perturb_prob,
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.budget < 2:
            raise ValueError("budget must be at least 2")
        if self.n0 is not None and not 1 <= self.n0 < self.budget:
            raise ValueError(f"need 1 <= n0 < budget, got n0={self.n0}, budget={self.budget}")
        if self.num_candidates is not None and self.num_candidates < 1:
            raise ValueError("num_candidates must be positive")
        if self.divisions < 1:
            raise ValueError("divisions must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.max_failures is not None and self.max_failures < 0:
            raise ValueError("max_failures must be nonnegative")
        self.initial_state()  # gamma and threshold checks

    def initial_state(self) -> SrsState:
        return SrsState(
            gamma=self.gamma_init,
            num_candidates=self.num_candidates or 1,
            perturb_prob=self.perturb_prob or 1.0,
            gamma_min=self.gamma_min,
            gamma_max=self.gamma_max,
            success_tol=self.success_tol,
            fail_tol=self.fail_tol,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Mapping) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown run config fields: {sorted(unknown)}")
        return cls(**d)


@dataclass
class Evaluation:
    index: int
    tag: str
    unit: np.ndarray
    native: list
    objectives: ObjectivePair | None
    status: str = OK
    gamma: float | None = None
    leader: int | None = None
    archive_size: int = 0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == OK

    def to_record(self, names) -> dict:
        """JSON-ready form, one line of ``history.jsonl``."""
        f1, f2 = self.objectives if self.objectives is not None else (None, None)
        rec = {
            "index": self.index,
            "tag": self.tag,
            "status": self.status,
            "params": dict(zip(names, self.native)),
            "unit": [float(u) for u in self.unit],
            "f1": f1,
            "f2": f2,
            "gamma": self.gamma,
            "leader": self.leader,
            "archive_size": self.archive_size,
        }
        if self.detail:
            rec["detail"] = self.detail
        return rec

    @classmethod
    def from_record(cls, rec: Mapping, names) -> "Evaluation":
        objs = None if rec["f1"] is None else ObjectivePair(float(rec["f1"]), float(rec["f2"]))
        return cls(
            index=int(rec["index"]),
            tag=rec["tag"],
            unit=np.asarray(rec["unit"], dtype=float),
            native=[rec["params"][k] for k in names],
            objectives=objs,
            status=rec["status"],
            gamma=rec.get("gamma"),
            leader=rec.get("leader"),
            archive_size=int(rec.get("archive_size", 0)),
            detail=rec.get("detail", ""),
        )


@dataclass(frozen=True)
class IterationTrace:
    iteration: int
    leader: int | None  # eval index of x_best, None while the archive is empty
    gamma: float
    archive_size: int


@dataclass
class RunResult:
    space: SearchSpace
    config: RunConfig  # resolved
    design: np.ndarray
    history: list[Evaluation] = field(default_factory=list)
    archive: ParetoArchive = field(default_factory=ParetoArchive)
    trace: list[IterationTrace] = field(default_factory=list)
    state: SrsState | None = None
    rng_state: dict | None = None

    @property
    def complete(self) -> bool:
        return len(self.history) >= self.config.budget

    @property
    def n_failed(self) -> int:
        return sum(not e.ok for e in self.history)

    def history_records(self) -> list[dict]:
        return [e.to_record(self.space.names) for e in self.history]

    def hypervolume_trace(self, reference=None) -> list[float]:
        """Archive hypervolume after each evaluation.

        The default reference point is the componentwise max of all observed
        objectives plus one.
        """
        ok = [e for e in self.history if e.ok]
        if not ok:
            return [0.0] * len(self.history)
        if reference is None:
            reference = np.array([e.objectives for e in ok]).max(axis=0) + 1.0
        archive = ParetoArchive()
        out = []
        for e in self.history:
            if e.ok:
                archive.insert(e.unit, e.objectives, e.index)
            out.append(hypervolume_2d(archive.objectives, reference) if len(archive) else 0.0)
        return out

    def to_checkpoint(self) -> dict:
        """Everything :func:`resume` needs, as plain JSON types."""
        return {
            "space": self.space.to_dicts(),
            "config": self.config.to_dict(),
            "design": self.design.tolist(),
            "history": self.history_records(),
            "trace": [asdict(t) for t in self.trace],
            "state": asdict(self.state) if self.state else None,
            "rng_state": self.rng_state,
        }

    @classmethod
    def from_checkpoint(cls, d: Mapping) -> "RunResult":
        space = SearchSpace.from_dicts(d["space"])
        res = cls(
            space=space,
            config=RunConfig.from_dict(d["config"]),
            design=np.asarray(d["design"], dtype=float).reshape(-1, space.dim),
            history=[Evaluation.from_record(r, space.names) for r in d["history"]],
            trace=[IterationTrace(**t) for t in d["trace"]],
            state=SrsState(**d["state"]) if d.get("state") else None,
            rng_state=d.get("rng_state"),
        )
        for e in res.history:
            if e.ok:
                res.archive.insert(e.unit, e.objectives, e.index)
        return res


class RunAborted(RuntimeError):
    """The run stopped early; ``result`` holds the partial history.

    ``origin`` is ``"evaluator"`` or ``"surrogate"``.
    """

    def __init__(self, message: str, result: RunResult, origin: str):
        super().__init__(message)
        self.result = result
        self.origin = origin


Callback = Callable[[Evaluation], None]


def run(space: SearchSpace, evaluator: ev.Evaluator, config: RunConfig | None = None, callback: Callback | None = None) -> RunResult:
    """Optimize ``evaluator`` over ``space`` with exactly ``config.budget`` true evaluations."""
    cfg = (config or RunConfig()).resolve(space.dim)
    rng = np.random.default_rng(cfg.seed)
    design = lhs(cfg.n0, space.dim, rng)
    result = RunResult(space=space, config=cfg, design=design, state=cfg.initial_state())
    return _drive(result, evaluator, rng, callback)


def resume(
    partial: RunResult,
    space: SearchSpace,
    evaluator: ev.Evaluator,
    config: RunConfig | None = None,
    callback: Callback | None = None,
) -> RunResult:
    """Continue ``partial`` up to ``config.budget`` evaluations.

    Every setting except the budget must match the recorded run. The history
    of ``partial`` is kept as-is and extended.
    """
    if space.to_dicts() != partial.space.to_dicts():
        raise ValueError("search space differs from the recorded run")
    config = config or replace(partial.config)
    if config.n0 is None:
        config = replace(config, n0=partial.config.n0)
    cfg = config.resolve(space.dim)
    mismatched = [
        k for k, v in cfg.to_dict().items() if k != "budget" and v != getattr(partial.config, k)
    ]
    if mismatched:
        raise ValueError(f"config differs from the recorded run in {mismatched}")
    if partial.rng_state is None or partial.state is None:
        raise ValueError("partial run carries no RNG/step-size checkpoint")
    if len(partial.history) >= cfg.budget:
        return partial
    rng = np.random.default_rng()
    rng.bit_generator.state = partial.rng_state
    result = RunResult(
        space=partial.space,
        config=cfg,
        design=partial.design,
        history=list(partial.history),
        archive=ParetoArchive(list(partial.archive.entries)),
        trace=list(partial.trace),
        state=partial.state,
        rng_state=partial.rng_state,
    )
    return _drive(result, evaluator, rng, callback)


def _evaluate(result: RunResult, evaluator, unit: np.ndarray, tag: str, gamma, leader) -> tuple[Evaluation, bool]:
    """Truly evaluate one unit point, append it to the history and archive it.

    Returns the record and whether it entered the archive.
    """
    space = result.space
    native = space.denormalize(unit)
    index = len(result.history)
    try:
        objs = ev.check_objectives(evaluator(space.as_dict(native)))
    except ev.EvaluationError as exc:
        log.warning("evaluation %d failed (%s): %s", index, exc.kind, exc.detail)
        entry = Evaluation(index, tag, unit, native, None, exc.kind, gamma, leader, len(result.archive), exc.detail)
        improved = False
    except Exception as exc:
        raise RunAborted(f"evaluator raised at evaluation {index}: {exc!r}", result, "evaluator") from exc
    else:
        improved = result.archive.insert(unit, objs, index)
        entry = Evaluation(index, tag, unit, native, objs, OK, gamma, leader, len(result.archive))
    result.history.append(entry)
    return entry, improved


def _check_failures(result: RunResult) -> None:
    limit = result.config.max_failures
    if limit is not None and result.n_failed > limit:
        raise RunAborted(f"{result.n_failed} failed evaluations exceed max_failures={limit}", result, "evaluator")


def _drive(result: RunResult, evaluator, rng: np.random.Generator, callback: Callback | None) -> RunResult:
    cfg, space = result.config, result.space
    m = space.dim

    # initial design, possibly partly done already
    while len(result.history) < min(cfg.n0, cfg.budget):
        e, _ = _evaluate(result, evaluator, result.design[len(result.history)], INITIAL, None, None)
        result.rng_state = rng.bit_generator.state
        if callback:
            callback(e)
        _check_failures(result)

    while len(result.history) < cfg.budget:
        state = result.state
        # leader from the archive via the hypercube roulette
        if len(result.archive):
            grid = build_grid(result.archive, cfg.divisions)
            leader = select_leader(result.archive, grid, rng)
            x_best, leader_index = leader.point, leader.eval_index
        else:
            x_best, leader_index = rng.random(m), None

        ok = [e for e in result.history if e.ok]
        points = np.array([e.unit for e in ok]).reshape(-1, m)
        data_f1 = Dataset(points, [e.objectives.f1 for e in ok])
        data_f2 = Dataset(points, [e.objectives.f2 for e in ok])
        candidates = generate_candidates(x_best, state, rng)
        if len(data_f1.dedup()) >= 2:
            try:
                model_f1, model_f2 = fit(data_f1), fit(data_f2)
            except SurrogateFitError as exc:
                raise RunAborted(f"surrogate fit failed at evaluation {len(result.history)}: {exc}", result, "surrogate") from exc
            x_next = select_next(candidates, model_f1, model_f2, cfg.divisions, rng)
        else:
            # too little data for a surrogate yet
            x_next = candidates[int(rng.integers(len(candidates)))]

        e, improved = _evaluate(result, evaluator, x_next, LOOP, state.gamma, leader_index)
        result.trace.append(IterationTrace(len(result.trace), leader_index, state.gamma, len(result.archive)))
        result.state = adapt_gamma(state, improved)
        result.rng_state = rng.bit_generator.state
        if callback:
            callback(e)
        _check_failures(result)
    return result


def random_search(space: SearchSpace, evaluator: ev.Evaluator, budget: int, seed: int = 0) -> ParetoArchive:
    """Baseline: ``budget`` uniform random points, archived the same way as the optimizer."""
    rng = np.random.default_rng(seed)
    archive = ParetoArchive()
    for i, u in enumerate(rng.random((budget, space.dim))):
        try:
            objs = ev.check_objectives(evaluator(space.as_dict(space.denormalize(u))))
        except ev.EvaluationError:
            continue
        archive.insert(u, objs, i)
    return archive


def front_hypervolume(archive: ParetoArchive, reference) -> float:
    return hypervolume_2d(archive.objectives, reference) if len(archive) else 0.0

