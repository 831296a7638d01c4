#!/usr/bin/env python3
"""
scripts/validate_samples.py
Validate a regression sample file (header x,y[,j][,z]) before fitting.
Exits 0 on success; 1 if issues found; 2 on usage error; 3 if the file is missing.
"""
import sys
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "src"))

from errors import ValidationError  # noqa: E402
from ingest import ingest_csv  # noqa: E402


def check_samples(csv_path):
    """Return a list of issue strings; empty when the file can be fitted."""
    try:
        samples = ingest_csv(csv_path)
    except ValidationError as e:
        return [f"{type(e).__name__}: {e}"]

    issues = []
    if len(samples) < 2:
        issues.append(f"only {len(samples)} distinct x value(s); a line fit needs two")
    if samples.z is not None and all(v == 0 for v in samples.z.values):
        issues.append("z column is identically zero")
    return issues


def main():
    if len(sys.argv) != 2:
        print("Usage: python scripts/validate_samples.py <samples.csv>")
        sys.exit(2)

    csv_path = Path(sys.argv[1])
    if not csv_path.exists():
        print(f"Sample file not found: {csv_path}")
        sys.exit(3)

    issues = check_samples(csv_path)
    if not issues:
        print("Sample validation: OK, no issues found.")
        sys.exit(0)

    print(f"Sample validation: FOUND {len(issues)} issue(s):\n")
    for issue in issues:
        print(f"  - {issue}")
    sys.exit(1)


if __name__ == "__main__":
    main()
