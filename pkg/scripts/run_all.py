"""Run every shipped config through the CLI and summarize exit codes.

    python3 scripts/run_all.py [--output-root results]
"""

import argparse
import os
import sys
import time
from pathlib import Path

from qxent.cli import OUTPUT_ENV, main

ROOT = Path(__file__).resolve().parents[1]


def run(output_root: Path) -> int:
    worst = 0
    for cfg in sorted((ROOT / "configs").glob("*.json")):
        os.environ[OUTPUT_ENV] = str(output_root / cfg.stem)
        t0 = time.perf_counter()
        code = main(["run", str(cfg)])
        print(f"== {cfg.name}: exit {code} in {time.perf_counter() - t0:.1f} s\n")
        worst = max(worst, code)
    os.environ.pop(OUTPUT_ENV, None)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--output-root", type=Path, default=ROOT / "results")
    sys.exit(run(ap.parse_args().output_root))
