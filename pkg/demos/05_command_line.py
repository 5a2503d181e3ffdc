"""
Batch runs from a config file
=============================

The ``conley`` command reads a flat ``key = value`` config, runs the
pipeline and writes report.json, morse.dot, PGM renders and cells.csv.
This script drives it in-process on the shipped north-south config.
"""

import json
import tempfile
from pathlib import Path

from conley.cli import main

config = Path(__file__).resolve().parent.parent / "configs" / "north_south.cfg"
print(config.read_text())

with tempfile.TemporaryDirectory() as out:
    status = main(["analyze", str(config), "--out-dir", out])
    print("exit status:", status)
    report = json.loads((Path(out) / "report.json").read_text())
    print("rungs:", [(round(r["eps"], 5), r["lhs_cardinality"], r["rhs_cardinality"]) for r in report["rungs"]])
    print("routes equal:", report["routes_equal"])
    print((Path(out) / "morse.dot").read_text().splitlines()[:4])

    # redraw the Conley relation from the saved report
    main(["render", str(Path(out) / "report.json"), "--format", "pgm", "-o", str(Path(out) / "again.pgm")])

# only the identity checks, then the brute-force comparison
main(["identities", str(config)])
main(["oracle-check", "--sizes", "2,3,8", "--trials", "2000", "--seed", "42"])
