"""Greedy packing count against the closed-form statistical distance.

Emits (m, count, count/sqrt(m), distance, relative error) rows; the ratio
should settle on the distance as m grows.

    python scripts/packing_curve.py --p1 0.1 --p2 0.9
"""

import math
from dataclasses import dataclass

from _common import parse_config, write_csv

from aitlab.distinguish import packing_count, stat_distance


@dataclass
class Config:
    p1: float = 0.1
    p2: float = 0.9
    ms: tuple = (10, 100, 1_000, 10_000, 40_000, 100_000, 400_000, 1_000_000)


def main():
    cfg, out = parse_config(Config, __doc__)
    target = stat_distance(cfg.p1, cfg.p2)
    rows = []
    for m in cfg.ms:
        c = packing_count(cfg.p1, cfg.p2, m)
        ratio = c / math.sqrt(m)
        rows.append([m, c, f"{ratio:.6f}", f"{target:.6f}", f"{abs(ratio - target) / target:.6f}"])
    write_csv(["m", "packing_count", "count_over_sqrt_m", "distance", "rel_error"], rows, out)


if __name__ == "__main__":
    main()
