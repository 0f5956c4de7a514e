"""Coding-theorem gap K(x) + log2 P(x) over short strings at two bounds.

For each resolved string up to ``max_string_len`` bits prints the shortest
printer length, the printer mass at both bounds and the gap; the summary
row gives the maximum gap per bound. Incompressibility counts follow with
``--census``.

    python scripts/coding_gap_census.py --bounds 16 18
"""

from dataclasses import dataclass

from _common import parse_config, write_csv

from aitlab.toymachine.complexity import (all_strings, incompressibility_census, k_exact,
                                          log2_fraction)


@dataclass
class Config:
    max_string_len: int = 6
    bounds: tuple = (16, 18)
    budget: int = 100_000
    census: int = 0  # nonzero: print the incompressibility table instead


def census_rows(budget):
    for L in (8, 10, 12):
        c = incompressibility_census(L, step_budget=budget)
        for k, count in sorted(c.counts.items()):
            yield [L, k, count, 2 ** (L - k), c.partial]


def main():
    cfg, out = parse_config(Config, __doc__)
    if cfg.census:
        write_csv(["L", "k", "count", "bound", "partial"], census_rows(cfg.budget), out)
        return
    rows = []
    best = {b: (0.0, None) for b in cfg.bounds}
    for length in range(cfg.max_string_len + 1):
        for x in all_strings(length):
            row = [x or "(empty)"]
            for b in cfg.bounds:
                rec = k_exact(x, b, cfg.budget)
                if rec.resolved:
                    gap = rec.k_upper + log2_fraction(rec.pu_lower)
                    row += [rec.k_upper, -log2_fraction(rec.pu_lower), f"{gap:.6f}"]
                    if gap > best[b][0]:
                        best[b] = (gap, x)
                else:
                    row += ["", "", ""]
            rows.append(row)
    for b in cfg.bounds:
        rows.append([f"max_gap@{b}", best[b][1], "", f"{best[b][0]:.6f}"])
    header = ["x"] + [f"{c}@{b}" for b in cfg.bounds for c in ("K", "minus_log2_P", "gap")]
    write_csv(header, rows, out)


if __name__ == "__main__":
    main()
