#!/usr/bin/env python3
"""
Reproduce the worked examples
- Runs every case in src/worked_cases.py (or the ones named on the command line)
- Writes a JSON report to reports/worked_examples.json
- Appends a summary block to logs/pvar_runs.log
"""

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "src"))

from log_setup import append_run_log  # noqa: E402
from settings import get_settings  # noqa: E402
from worked_cases import CASES, run_cases  # noqa: E402


def main():
    parser = argparse.ArgumentParser(description="Recompute the worked examples")
    parser.add_argument("cases", nargs="*", help=f"subset of cases to run ({', '.join(CASES)})")
    parser.add_argument("--out", default=None, help="report path (default reports/worked_examples.json)")
    args = parser.parse_args()
    unknown = [c for c in args.cases if c not in CASES]
    if unknown:
        parser.error(f"unknown case(s): {', '.join(unknown)}")

    results = run_cases(args.cases or None)
    passed = sum(r["status"] == "pass" for r in results)

    out = Path(args.out) if args.out else get_settings().reports_dir / "worked_examples.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    report = {
        "generated": datetime.now(timezone.utc).isoformat(),
        "passed": passed,
        "total": len(results),
        "cases": results,
    }
    with open(out, "w") as f:
        json.dump(report, f, indent=2, default=str)

    print(f"\n{'=' * 60}")
    print("WORKED EXAMPLES")
    print(f"{'=' * 60}")
    for r in results:
        mark = "✅" if r["status"] == "pass" else "❌"
        print(f"{mark} {r['name']}: {r['status']}")
    print(f"\n{passed}/{len(results)} passed. Report: {out}")

    append_run_log({"script": "reproduce_examples", "passed": passed, "total": len(results)})
    sys.exit(0 if passed == len(results) else 1)


if __name__ == "__main__":
    main()
