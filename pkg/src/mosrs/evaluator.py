"""Two-objective evaluators: analytic benchmarks, a mock docking objective, and external processes.

An evaluator is any callable taking a ``{name: native value}`` mapping and
returning ``(f1, f2)``. Recoverable failures raise :class:`EvaluationError`;
the optimizer records those and keeps going.

External protocol
-----------------
The child receives one line of UTF-8 JSON ``{"params": {...}}`` on stdin and
must exit with status 0 after printing ``{"objectives": [f1, f2]}`` as the last
non-empty line of stdout.
"""

from __future__ import annotations

import json
import math
import os
import shlex
import signal
import subprocess
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .pareto import ObjectivePair
from .space import SearchSpace, builtin_space

DEFAULT_TIMEOUT = 600.0

# failure kinds, as recorded in the run history
NONZERO_EXIT = "nonzero_exit"
MALFORMED = "malformed"
NONFINITE = "nonfinite"
TIMEOUT = "timeout"
LAUNCH_ERROR = "launch_error"
FAILURE_KINDS = (NONZERO_EXIT, MALFORMED, NONFINITE, TIMEOUT, LAUNCH_ERROR)


class EvaluationError(RuntimeError):
    def __init__(self, kind: str, detail: str = ""):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind
        self.detail = detail


Evaluator = Callable[[Mapping[str, float]], Sequence[float]]


def check_objectives(values) -> ObjectivePair:
    try:
        f1, f2 = (float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise EvaluationError(MALFORMED, f"expected two numbers, got {values!r}") from exc
    if not (math.isfinite(f1) and math.isfinite(f2)):
        raise EvaluationError(NONFINITE, f"objectives ({f1}, {f2})")
    return ObjectivePair(f1, f2)


def zdt1(x) -> ObjectivePair:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] < 2:
        raise ValueError("zdt1 needs at least two variables")
    if ((x < 0) | (x > 1)).any():
        raise ValueError("zdt1 is defined on [0, 1]^m")
    x1 = float(x[0])
    g = 1.0 + 9.0 * float(x[1:].sum()) / (x.shape[0] - 1)
    return ObjectivePair(x1, g * (1.0 - math.sqrt(x1 / g)))


def schaffer_n1(x) -> ObjectivePair:
    x = np.asarray(x, dtype=float).ravel()
    if x.shape != (1,):
        raise ValueError("schaffer_n1 is one-dimensional")
    if not math.isfinite(x[0]):
        raise ValueError("schaffer_n1 needs a finite input")
    v = float(x[0])
    return ObjectivePair(v * v, (v - 2.0) ** 2)


def mock_docking(x_native, space: SearchSpace | None = None) -> ObjectivePair:
    """Smooth energy-vs-RMSD trade-off over the normalized coordinates ``u`` of ``space``.

    With ``u0`` the first coordinate (``seed`` in the builtin spaces), ``a = u1``
    the trade-off coordinate (``u0`` when m = 1) and ``u2..`` the rest::

        g  = 1 + 2 * mean((u_i - 0.3)^2, i >= 2) + 0.05 * (1 - cos(2 pi u0))
        f1 = -18 + 6 * (1 - a) + 4 * (g - 1)     # energy-like, kcal/mol
        f2 = 0.1 + 4 * g * a^2                   # RMSD-like, Angstrom

    The front is ``g = 1``: ``u_i = 0.3`` for i >= 2 and ``u0`` in {0, 1}.
    ``space`` defaults to the GA space.
    """
    space = space or builtin_space("ga")
    u = space.normalize(x_native)
    m = u.shape[0]
    if m == 1:
        a, g = float(u[0]), 1.0
    else:
        a = float(u[1])
        rest = u[2:]
        g = 1.0 + 0.05 * (1.0 - math.cos(2.0 * math.pi * u[0]))
        if rest.size:
            g += 2.0 * float(np.mean((rest - 0.3) ** 2))
    return ObjectivePair(-18.0 + 6.0 * (1.0 - a) + 4.0 * (g - 1.0), 0.1 + 4.0 * g * a * a)


BUILTINS = ("zdt1", "schaffer_n1", "mock_docking")


def evaluate_builtin(name: str, x_native, space: SearchSpace | None = None) -> ObjectivePair:
    if name == "zdt1":
        return zdt1(x_native)
    if name == "schaffer_n1":
        return schaffer_n1(x_native)
    if name == "mock_docking":
        return mock_docking(x_native, space)
    raise ValueError(f"unknown builtin evaluator {name!r}; choose from {BUILTINS}")


@dataclass(frozen=True)
class EvaluatorSpec:
    kind: str  # "builtin" or "external"
    name: str | None = None
    command: tuple[str, ...] = ()
    timeout: float = DEFAULT_TIMEOUT
    workdir: str | None = None
    env: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("builtin", "external"):
            raise ValueError(f"evaluator kind must be 'builtin' or 'external', got {self.kind!r}")
        if isinstance(self.command, str):
            object.__setattr__(self, "command", tuple(shlex.split(self.command)))
        else:
            object.__setattr__(self, "command", tuple(self.command))
        if self.kind == "builtin" and self.name not in BUILTINS:
            raise ValueError(f"unknown builtin evaluator {self.name!r}; choose from {BUILTINS}")
        if self.kind == "external" and not self.command:
            raise ValueError("external evaluators need a nonempty command")
        if not self.timeout > 0:
            raise ValueError("timeout must be positive")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "timeout": self.timeout}
        if self.kind == "builtin":
            d["name"] = self.name
        else:
            d["command"] = list(self.command)
            if self.workdir:
                d["workdir"] = self.workdir
            if self.env:
                d["env"] = dict(self.env)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "EvaluatorSpec":
        return cls(
            kind=d.get("kind", "builtin"),
            name=d.get("name"),
            command=d.get("command", ()),
            timeout=float(d.get("timeout", DEFAULT_TIMEOUT)),
            workdir=d.get("workdir"),
            env=dict(d.get("env", {})),
        )


def _json_value(v):
    if isinstance(v, (np.integer, int)):
        return int(v)
    return float(v)


def _kill_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(proc.pid, signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        proc.kill()
    proc.communicate()


def evaluate_external(spec: EvaluatorSpec, x_native, param_names: Sequence[str]) -> ObjectivePair:
    """Run the external command once and parse its objectives.

    Raises :class:`EvaluationError` with one of :data:`FAILURE_KINDS`.
    """
    if len(x_native) != len(param_names):
        raise ValueError(f"{len(x_native)} values for {len(param_names)} parameter names")
    request = json.dumps({"params": {k: _json_value(v) for k, v in zip(param_names, x_native)}}) + "\n"
    env = {**os.environ, **spec.env} if spec.env else None
    try:
        proc = subprocess.Popen(
            list(spec.command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            cwd=spec.workdir,
            env=env,
            start_new_session=True,  # lets a timeout take down wrapper scripts and their children
        )
    except OSError as exc:
        raise EvaluationError(LAUNCH_ERROR, str(exc)) from exc
    try:
        stdout, stderr = proc.communicate(request.encode("utf-8"), timeout=spec.timeout)
    except subprocess.TimeoutExpired:
        _kill_group(proc)
        raise EvaluationError(TIMEOUT, f"no result within {spec.timeout:g} s") from None
    if proc.returncode != 0:
        tail = stderr.decode("utf-8", "replace").strip()[-200:]
        raise EvaluationError(NONZERO_EXIT, f"exit status {proc.returncode}: {tail}")
    lines = [ln for ln in stdout.decode("utf-8", "replace").splitlines() if ln.strip()]
    if not lines:
        raise EvaluationError(MALFORMED, "empty stdout")
    try:
        # NaN/Infinity literals are accepted here so they classify as nonfinite
        reply = json.loads(lines[-1])
        values = reply["objectives"]
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise EvaluationError(MALFORMED, f"cannot parse {lines[-1][:200]!r}") from exc
    if not isinstance(values, list) or len(values) != 2 or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
    ):
        raise EvaluationError(MALFORMED, f"objectives must be two numbers, got {values!r}")
    return check_objectives(values)


def make_evaluator(spec: EvaluatorSpec, space: SearchSpace) -> Evaluator:
    """Bind an evaluator spec to a space, giving a ``params -> (f1, f2)`` callable."""
    names = space.names
    if spec.kind == "external":
        def call(params: Mapping[str, float]) -> ObjectivePair:
            return evaluate_external(spec, [params[k] for k in names], names)
    else:
        def call(params: Mapping[str, float]) -> ObjectivePair:
            return evaluate_builtin(spec.name, [params[k] for k in names], space)
    return call
