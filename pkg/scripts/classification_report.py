#!/usr/bin/env python3
"""Replay the classification witnesses and print the row-by-row outcome.

Exits nonzero when a row fails (one listed algebra admits no realization;
see the row note and the decisions ledger of this build).
"""

import sys

from nilg2.families import TheoremWitnessError, verify_theorem


def main() -> int:
    try:
        table = verify_theorem()
        rows = table.rows
        status = 0
    except TheoremWitnessError as exc:
        rows = exc.table.rows
        status = 1
    for row in rows:
        mark = "ok  " if row.passed else "FAIL"
        binding = (
            " ".join(f"{k}={v}" for k, v in sorted(row.binding.items()))
            if row.binding else "-"
        )
        print(f"[{mark}] {row.entry:22s} via {row.family:6s} at {binding}")
        print(f"       {row.note}")
    return status


if __name__ == "__main__":
    sys.exit(main())
