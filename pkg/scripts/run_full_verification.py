#!/usr/bin/env python3
"""Run every suite at the full index range in both modes and write reports.

This is the long-form sweep behind the acceptance criteria: generic mode
proves the identities as polynomial statements up to total index 7, concrete
mode re-checks them on a seeded rational instance.  Reports land in the
directory given as the first argument (default: ./reports).
"""

from __future__ import annotations

import json
import pathlib
import sys
import time

from pfafflab.cli import SuiteConfig, run_suite


def main() -> int:
    out_dir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "reports")
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    overall = 0
    for mode in ("generic", "concrete"):
        path = out_dir / f"full-{mode}-seed{seed}.json"
        config = SuiteConfig(suites=("all",), mode=mode, max_total_index=7,
                             max_order=3, seed=seed, report_path=str(path))
        start = time.monotonic()
        code, reports = run_suite(config)
        elapsed = time.monotonic() - start
        counts: dict = {}
        for r in reports:
            counts[r.status] = counts.get(r.status, 0) + 1
        print(f"{mode:9s} {len(reports):5d} checks in {elapsed:6.1f}s  "
              + ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
              + f"  -> {path}")
        overall = max(overall, code)
        if code:
            for r in reports:
                if r.status == "fail":
                    print("  FAIL", r.suite, json.dumps(r.params, sort_keys=True))
    return overall


if __name__ == "__main__":
    sys.exit(main())
