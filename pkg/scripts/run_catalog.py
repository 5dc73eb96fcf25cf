#!/usr/bin/env python3
"""Run every packaged worked example and print a result table."""

import argparse
import json
import sys
import time

from qmdkit import catalog


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", action="store_true",
                        help="emit the full reports as JSON")
    parser.add_argument("names", nargs="*", default=None)
    args = parser.parse_args()

    names = args.names or catalog.list_examples()
    reports = []
    all_ok = True
    for name in names:
        t0 = time.perf_counter()
        report = catalog.run_example(name)
        elapsed = time.perf_counter() - t0
        reports.append(report)
        all_ok &= report.passed
        status = "pass" if report.passed else "FAIL"
        print(f"{status:4s}  {name:24s} {len(report.checks):2d} checks "
              f"{elapsed * 1e3:7.1f} ms")
        for check in report.checks:
            if not check.passed:
                print(f"      - {check.name}: expected {check.expected!r} "
                      f"got {check.actual!r}")
    if args.json:
        json.dump([r.to_json() for r in reports], sys.stdout, indent=2,
                  sort_keys=True)
        print()
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
