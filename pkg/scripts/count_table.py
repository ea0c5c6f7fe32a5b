"""Closed form against brute force for every quantity the oracles can reach.

    python scripts/count_table.py --qs 2 3 4 --jobs 4
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

from desconf.enumeration import DEFAULT_LIMITS, Quantity, ScaleLimit, run_oracle


@dataclass
class TableConfig:
    qs: list[int] = field(default_factory=lambda: [2, 3, 4])
    quantities: list[Quantity] = field(default_factory=lambda: list(Quantity))
    jobs: int = 1


def rows(cfg: TableConfig):
    for quantity in cfg.quantities:
        for q in cfg.qs:
            try:
                r = run_oracle(quantity, q, jobs=cfg.jobs, limits=DEFAULT_LIMITS)
            except ScaleLimit:
                continue
            yield quantity.value, q, r.closed_form, r.brute_force, r.agree, round(r.elapsed_ms / 1000, 2)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qs", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    out = csv.writer(sys.stdout, delimiter="\t")
    out.writerow(["quantity", "q", "closed_form", "brute_force", "agree", "seconds"])
    for row in rows(TableConfig(qs=args.qs, jobs=args.jobs)):
        out.writerow(row)
        sys.stdout.flush()


if __name__ == "__main__":
    main()
