"""Tune each AutoDock search space against the mock docking objective.

For every space the run is repeated with seeds seed..seed+repeats-1 and the
archive entries with the lowest energy (f1) and lowest RMSD (f2) are averaged
over the repeats.

    python scripts/mock_docking_repeats.py --repeats 10
"""

import argparse

import numpy as np

from mosrs import evaluator as ev
from mosrs.optimizer import RunConfig, run
from mosrs.space import builtin_space


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--spaces", nargs="+", default=["sa", "ga", "ls", "hb"])
    ap.add_argument("--budget", type=int, default=100)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'space':<6} {'pick':<8} {'energy':>9} {'rmsd':>8} {'front':>6}")
    for name in args.spaces:
        space = builtin_space(name)

        def f(params):
            return ev.mock_docking([params[k] for k in space.names], space)

        best_f1, best_f2, sizes = [], [], []
        for i in range(args.repeats):
            res = run(space, f, RunConfig(budget=args.budget, seed=args.seed + i))
            objs = res.archive.objectives
            best_f1.append(objs[np.argmin(objs[:, 0])])
            best_f2.append(objs[np.argmin(objs[:, 1])])
            sizes.append(len(objs))
        for label, rows in (("best_f1", best_f1), ("best_f2", best_f2)):
            e, r = np.mean(rows, axis=0)
            print(f"{name:<6} {label:<8} {e:>9.4f} {r:>8.4f} {np.mean(sizes):>6.1f}")


if __name__ == "__main__":
    main()
