#!/usr/bin/env python3
"""Run the acceptance suite and print one line per criterion.

Thin wrapper over pytest so the criteria stay in version-controlled tests;
exits nonzero if any criterion fails.
"""

import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    code = subprocess.call(
        [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"),
         "-v", "-s"] + sys.argv[1:])
    sys.exit(code)
