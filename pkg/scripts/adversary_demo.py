#!/usr/bin/env python3
"""Run the continuity adversary against a few candidate bound computers."""

import json

from baire import bdn
from baire.acceptance import _strategy_candidates


def main() -> None:
    for alpha in _strategy_candidates():
        report = bdn.adversary_refute(alpha, fuel=20000)
        print(f"{alpha.label}: {report.verdict}")
        print(f"  {report.reason}")
        if report.a is not None:
            print(f"  first value k = {report.k}, rebuilt past segment a = {report.a}")
        for i, t in enumerate(report.transcripts):
            print(f"  eval {i + 1}: {json.dumps(t.to_json())}")
        print()


if __name__ == "__main__":
    main()
