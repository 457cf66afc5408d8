#!/usr/bin/env python3
"""Run the acceptance gate and print one line per criterion.

Equivalent to ``pytest -s tests/test_acceptance.py``; this wrapper exists
so the gate can be driven without remembering pytest flags.
"""

import subprocess
import sys
from pathlib import Path


def main() -> int:
    root = Path(__file__).resolve().parent.parent
    return subprocess.call(
        [sys.executable, "-m", "pytest", "-s", "-v", str(root / "tests" / "test_acceptance.py")]
    )


if __name__ == "__main__":
    sys.exit(main())
