"""Run the acceptance suite and print only its PASS/FAIL lines.

Usage: python scripts/run_acceptance.py
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-s", "-q", "-p", "no:cacheprovider"],
        capture_output=True,
        text=True,
        cwd=ROOT,
    )
    lines = [ln for ln in proc.stdout.splitlines() if ln.startswith(("[PASS]", "[FAIL]"))]
    print("\n".join(lines))
    print(proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr)
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
