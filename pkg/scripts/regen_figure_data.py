#!/usr/bin/env python3
"""Regenerate the element-elasticity scatter data.

Writes, for each configured monoid, the bundled description file and a
CSV of (element, elasticity, marker, approx) rows suitable for a
scatter plot of elasticity against element value.  Output is exact and
deterministic: rerunning produces byte-identical files.
"""

import argparse
import contextlib
from pathlib import Path

from puiseux import cli

# (catalog name, truncation depth, value bound for the sweep)
DATASETS = (
    ("primarydense", 8, "5"),
    ("bfplot", 6, "13"),
)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="figure-data",
                    help="directory for the CSV files (default %(default)s)")
    args = ap.parse_args(argv)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, depth, bound in DATASETS:
        spec_path = outdir / f"{name}.json"
        code = cli.main(["catalog", "--name", name, "--depth", str(depth),
                         "--out", str(spec_path)])
        if code:
            return code
        csv_path = outdir / f"{name}-depth{depth}-bound{bound}.csv"
        with open(csv_path, "w", encoding="utf-8") as fh:
            with contextlib.redirect_stdout(fh):
                code = cli.main(["plot", "--spec", str(spec_path),
                                 "--depth", str(depth), "--bound", bound,
                                 "--decimal"])
        if code:
            return code
        rows = csv_path.read_text(encoding="utf-8").count("\n") - 1
        print(f"wrote {csv_path} ({rows} rows)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
