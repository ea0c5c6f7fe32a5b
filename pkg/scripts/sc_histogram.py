"""Histogram of self-conjugate point counts over all configurations of PG(2, q)."""

import argparse
import json
from dataclasses import dataclass

from desconf.enumeration import ScaleLimits, global_census
from desconf.field import make_field
from desconf.suites import sc_bound


@dataclass
class HistogramConfig:
    q: int = 4
    jobs: int = 1
    spatial: bool = False


def run(cfg: HistogramConfig) -> dict:
    limits = ScaleLimits(planar_global=max(cfg.q, 4), spatial_global=max(cfg.q, 2))
    census = global_census(cfg.q, spatial=cfg.spatial, jobs=cfg.jobs, limits=limits)
    doc = census.to_json()
    doc.update(q=cfg.q, spatial=cfg.spatial, bound=sc_bound(make_field(cfg.q).characteristic))
    return doc


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=4)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--spatial", action="store_true")
    args = ap.parse_args()
    print(json.dumps(run(HistogramConfig(args.q, args.jobs, args.spatial)), indent=2))


if __name__ == "__main__":
    main()
