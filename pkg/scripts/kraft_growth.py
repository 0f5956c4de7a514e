"""Kraft sum of halting toy-machine programs as the length bound grows.

    python scripts/kraft_growth.py --max-len 24
"""

import time
from dataclasses import dataclass

from _common import parse_config, write_csv

from aitlab.toymachine.enumeration import program_census


@dataclass
class Config:
    max_len: int = 22
    budget: int = 100_000


def main():
    cfg, out = parse_config(Config, __doc__)
    rows = []
    prev = None
    for L in range(2, cfg.max_len + 1, 2):
        start = time.perf_counter()
        census = program_census(L, cfg.budget)
        s = census.kraft_sum()
        rows.append([L, len(census.programs), s.numerator, s.denominator, float(s),
                     "" if prev is None else float(s - prev),
                     f"{time.perf_counter() - start:.3f}"])
        prev = s
    write_csv(["max_len", "programs", "num", "den", "kraft_sum", "increment", "seconds"],
              rows, out)


if __name__ == "__main__":
    main()
