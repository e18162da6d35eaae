"""Example external evaluator speaking the mosrs stdin/stdout protocol.

Reads one JSON line {"params": {...}} and prints {"objectives": [f1, f2]}.
Here the objectives are zdt1 over the parameters in name order; a docking
adapter would instead write its parameter file, run the docking program,
and report binding energy and RMSD.
"""

import json
import math
import sys


def main():
    params = json.loads(sys.stdin.readline())["params"]
    x = list(params.values())
    g = 1 + 9 * sum(x[1:]) / (len(x) - 1)
    print(json.dumps({"objectives": [x[0], g * (1 - math.sqrt(x[0] / g))]}))


if __name__ == "__main__":
    main()
