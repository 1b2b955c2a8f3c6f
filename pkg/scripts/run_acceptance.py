"""Run every acceptance criterion outside pytest and exit nonzero if any fails."""

from __future__ import annotations

import pathlib
import runpy
import sys

tests = pathlib.Path(__file__).resolve().parent.parent / "tests"
sys.path.insert(0, str(tests))
ns = runpy.run_path(str(tests / "test_acceptance.py"), run_name="__main__")
sys.exit(0 if all("PASS" in line for line in ns["RESULTS"].values()) else 1)
