#!/usr/bin/env python3
"""Run the full catalog verification battery and print a summary table.

Equivalent to `thickloci verify all` but with a per-report breakdown."""

import argparse
import sys

from thickloci.catalog import CATALOG_NAMES
from thickloci.verify import reports_for


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ring", choices=CATALOG_NAMES, help="restrict to one catalog ring")
    parser.add_argument("--verbose", action="store_true", help="print every individual check")
    args = parser.parse_args()

    names = [args.ring] if args.ring else list(CATALOG_NAMES)
    failures = 0
    for name in names:
        for report in reports_for(name):
            status = "PASS" if report.passed else "FAIL"
            print(f"{status}  {report.ring_name:<9} {report.kind:<14} {len(report.entries)} checks")
            if args.verbose or not report.passed:
                for e in report.entries:
                    mark = "ok " if e["pass"] else "BAD"
                    print(f"      {mark} {e['check']}")
            if not report.passed:
                failures += 1
    print()
    print("all reports passed" if failures == 0 else f"{failures} report(s) failed")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
