"""Command-line front end: ``mosrs run | front | sample``.

Exit status: 0 on success, 2 for an invalid manifest or arguments, 3 when an
evaluator failure aborts a run, 1 for anything else.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .evaluator import EvaluatorSpec, make_evaluator
from .optimizer import RunAborted, RunConfig, RunResult, run
from .pareto import hypervolume_2d, pareto_front
from .sampling import lhs
from .space import BUILTIN_SPACES, SearchSpace, builtin_space, unit_space

log = logging.getLogger("mosrs")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_EVALUATOR = 3


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class RunManifest:
    space: SearchSpace
    evaluator: EvaluatorSpec
    config: RunConfig
    out: Path
    repeats: int = 1

    def to_dict(self) -> dict:
        return {
            "space": {"params": self.space.to_dicts()},
            "evaluator": self.evaluator.to_dict(),
            "run": self.config.to_dict(),
            "output": {"dir": str(self.out), "repeats": self.repeats},
        }


def parse_space(d: Mapping) -> SearchSpace:
    """``{"builtin": "ga"}``, ``{"unit": 10}`` or ``{"params": [{name, kind, lower, upper, default}, ...]}``."""
    keys = {"builtin", "unit", "params"} & set(d)
    if len(keys) != 1:
        raise ManifestError("[space] needs exactly one of 'builtin', 'unit' or 'params'")
    if "builtin" in d:
        if d["builtin"] not in BUILTIN_SPACES:
            raise ManifestError(f"unknown builtin space {d['builtin']!r}; choose from {BUILTIN_SPACES}")
        return builtin_space(d["builtin"])
    if "unit" in d:
        return unit_space(int(d["unit"]))
    return SearchSpace.from_dicts(d["params"])


def load_manifest(path: str | Path, base: Path | None = None) -> RunManifest:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ManifestError(f"{path}: {exc}") from exc
    return manifest_from_dict(raw, base or path.parent)


def manifest_from_dict(raw: Mapping, base: Path = Path(".")) -> RunManifest:
    unknown = set(raw) - {"space", "evaluator", "run", "output"}
    if unknown:
        raise ManifestError(f"unknown manifest sections: {sorted(unknown)}")
    try:
        space = parse_space(raw.get("space", {}))
        evaluator = EvaluatorSpec.from_dict(raw.get("evaluator", {}))
        config = RunConfig.from_dict(raw.get("run", {}))
        config.resolve(space.dim)
        output = raw.get("output", {})
        out = Path(output.get("dir", "mosrs-out"))
        repeats = int(output.get("repeats", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(str(exc)) from exc
    if evaluator.kind == "builtin" and evaluator.name == "zdt1" and space.dim < 2:
        raise ManifestError("zdt1 needs at least two parameters")
    if evaluator.kind == "builtin" and evaluator.name == "schaffer_n1" and space.dim != 1:
        raise ManifestError("schaffer_n1 needs exactly one parameter")
    if repeats < 1:
        raise ManifestError("repeats must be positive")
    if not out.is_absolute():
        out = base / out
    return RunManifest(space, evaluator, config, out, repeats)


# ---------------------------------------------------------------------------
# output files


def write_history(path: Path, records: Sequence[dict]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def read_history(path: Path) -> list[dict]:
    with path.open(encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def front_records(records: Sequence[dict]) -> list[dict]:
    """Nondominated successful evaluations, sorted by f1, f2, then index."""
    ok = [r for r in records if r["status"] == "ok"]
    if not ok:
        return []
    front = [ok[i] for i in pareto_front([(r["f1"], r["f2"]) for r in ok])]
    return sorted(front, key=lambda r: (r["f1"], r["f2"], r["index"]))


def write_archive_csv(path: Path, front: Sequence[dict], names: Sequence[str]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["eval_index", *names, "f1", "f2"])
        for r in front:
            w.writerow([r["index"], *(r["params"][k] for k in names), repr(r["f1"]), repr(r["f2"])])


def write_front_dat(path: Path, front: Sequence[dict]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("# f1 f2\n")
        for r in front:
            fh.write(f"{r['f1']!r} {r['f2']!r}\n")


def summarize(result: RunResult, records: Sequence[dict]) -> dict:
    front = front_records(records)

    def entry(r):
        return {"eval_index": r["index"], "params": r["params"], "f1": r["f1"], "f2": r["f2"]}

    summary = {
        "seed": result.config.seed,
        "budget": result.config.budget,
        "n_evaluations": len(result.history),
        "n_failed": result.n_failed,
        "complete": result.complete,
        "archive_size": len(front),
        "best_f1": None,
        "best_f2": None,
        "hypervolume": None,
        "hypervolume_reference": None,
    }
    if front:
        summary["best_f1"] = entry(min(front, key=lambda r: (r["f1"], r["f2"], r["index"])))
        summary["best_f2"] = entry(min(front, key=lambda r: (r["f2"], r["f1"], r["index"])))
        ok = np.array([(r["f1"], r["f2"]) for r in records if r["status"] == "ok"])
        ref = ok.max(axis=0) + 1.0
        summary["hypervolume"] = hypervolume_2d([(r["f1"], r["f2"]) for r in front], ref)
        summary["hypervolume_reference"] = ref.tolist()
    return summary


def write_run(out: Path, result: RunResult, manifest: RunManifest | None = None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    records = result.history_records()
    names = result.space.names
    write_history(out / "history.jsonl", records)
    front = front_records(records)
    write_archive_csv(out / "archive.csv", front, names)
    write_front_dat(out / "front.dat", front)
    (out / "summary.json").write_text(json.dumps(summarize(result, records), indent=2) + "\n", encoding="utf-8")
    (out / "checkpoint.json").write_text(json.dumps(result.to_checkpoint()) + "\n", encoding="utf-8")
    if manifest is not None:
        resolved = manifest.to_dict()
        resolved["run"] = result.config.to_dict()
        (out / "manifest.resolved.json").write_text(json.dumps(resolved, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def cmd_run(args) -> int:
    try:
        manifest = load_manifest(args.manifest)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.budget is not None:
            overrides["budget"] = args.budget
        config = replace(manifest.config, **overrides)
        config.resolve(manifest.space.dim)
        out = Path(args.out) if args.out else manifest.out
        repeats = args.repeats if args.repeats is not None else manifest.repeats
        if repeats < 1:
            raise ManifestError("--repeats must be positive")
        manifest = replace(manifest, config=config, out=out, repeats=repeats)
    except (ManifestError, ValueError) as exc:
        print(f"mosrs: invalid manifest: {exc}", file=sys.stderr)
        return EXIT_INVALID

    evaluator = make_evaluator(manifest.evaluator, manifest.space)
    status = EXIT_OK
    for i in range(manifest.repeats):
        cfg = replace(manifest.config, seed=manifest.config.seed + i)
        out = manifest.out if manifest.repeats == 1 else manifest.out / f"repeat_{i:02d}_seed_{cfg.seed}"
        log.info("run %d/%d seed=%d -> %s", i + 1, manifest.repeats, cfg.seed, out)
        try:
            result = run(manifest.space, evaluator, cfg)
        except RunAborted as exc:
            write_run(out, exc.result, replace(manifest, config=cfg))
            print(f"mosrs: run aborted ({exc.origin}): {exc}", file=sys.stderr)
            return EXIT_EVALUATOR if exc.origin == "evaluator" else EXIT_INTERNAL
        write_run(out, result, replace(manifest, config=cfg))
    return status


def cmd_front(args) -> int:
    path = Path(args.history)
    try:
        records = read_history(path)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"mosrs: cannot read history: {exc}", file=sys.stderr)
        return EXIT_INVALID
    front = front_records(records)
    if not front:
        print("mosrs: history has no successful evaluations", file=sys.stderr)
        return EXIT_INVALID
    out = Path(args.out) if args.out else path.parent
    out.mkdir(parents=True, exist_ok=True)
    names = list(records[0]["params"])
    write_archive_csv(out / "archive.csv", front, names)
    write_front_dat(out / "front.dat", front)
    return EXIT_OK


def cmd_sample(args) -> int:
    try:
        if args.manifest:
            space = load_manifest(args.manifest).space
        elif args.space in BUILTIN_SPACES:
            space = builtin_space(args.space)
        elif args.space and args.space.startswith("unit"):
            space = unit_space(int(args.space[4:] or 1))
        else:
            raise ManifestError(f"unknown space {args.space!r}")
        if args.n0 < 1:
            raise ManifestError("--n0 must be positive")
    except (ManifestError, ValueError) as exc:
        print(f"mosrs: invalid space: {exc}", file=sys.stderr)
        return EXIT_INVALID
    design = lhs(args.n0, space.dim, np.random.default_rng(args.seed))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(space.names)
        for u in design:
            w.writerow([repr(v) if isinstance(v, float) else v for v in space.denormalize(u)])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mosrs", description="Two-objective surrogate-assisted hyperparameter tuning.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the optimizer from a TOML manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", help="output directory (overrides [output].dir)")
    p.add_argument("--seed", type=int)
    p.add_argument("--repeats", type=int, help="independent runs with seeds seed, seed+1, ...")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("front", help="recompute the Pareto front from a history.jsonl")
    p.add_argument("history")
    p.add_argument("--out", help="output directory (default: next to the history)")
    p.set_defaults(func=cmd_front)

    p = sub.add_parser("sample", help="write a Latin hypercube design as CSV")
    p.add_argument("--space", default="ga", help="ga, sa, ls, hb or unitN")
    p.add_argument("--manifest", help="take the space from a manifest instead")
    p.add_argument("--n0", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="design.csv")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"mosrs: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
