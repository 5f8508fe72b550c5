"""Print charged rounds against n for both routes on planted-cut graphs.

Run with ``python3 demos/round_sweep.py``. Writes ``round_sweep.csv`` next to
the working directory for plotting.
"""

from __future__ import annotations

import csv
import warnings

from congestcut.config import Config
from congestcut.oracle import planted_cut
from congestcut.pipeline import rounds_sweep

SIZES = [128, 256, 512]


def main() -> None:
    rows = []
    for route in ("msgc", "direct"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out = rounds_sweep(SIZES, lambda n: planted_cut(n, 8, seed=1), Config(force_path=route))
        for r in out:
            r["route"] = route
            rows.append(r)
            print(f"{route:<7} n={r['n']:<5} m={r['m']:<7} lambda={r['lambda']:<3} rounds={r['rounds']:.3g}")
    with open("round_sweep.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["route", "n", "m", "lambda", "rounds", "path"])
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()
