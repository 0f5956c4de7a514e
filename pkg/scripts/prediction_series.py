"""Prediction error series S_n of the bounded universal predictor.

Prints S_n for each bound side by side, then a summary of the total and of
how often the tail (n >= ``tail_from``) increases from one step to the next.

    python scripts/prediction_series.py --measure zeros --bounds 18 20 22
"""

from dataclasses import dataclass

from _common import parse_config, write_csv

from aitlab.toymachine.predictor import Measure, prediction_error_series


@dataclass
class Config:
    measure: str = "zeros"
    horizon: int = 32
    bounds: tuple = (18, 20, 22)
    budget: int = 100_000
    tail_from: int = 8


def main():
    cfg, out = parse_config(Config, __doc__)
    mu = Measure.parse(cfg.measure)
    series = {b: prediction_error_series(mu, cfg.horizon, b, cfg.budget) for b in cfg.bounds}
    rows = []
    for n in range(1, cfg.horizon + 1):
        rows.append([n] + [f"{s.s[n - 1]:.6f}" if n <= len(s.s) else "" for s in series.values()])
    rows.append(["sum"] + [f"{s.total:.6f}" for s in series.values()])
    inversions = []
    for s in series.values():
        tail = s.s[cfg.tail_from - 1:]
        inversions.append(sum(1 for a, b in zip(tail, tail[1:]) if b > a))
    rows.append([f"tail_inversions_n>={cfg.tail_from}"] + inversions)
    write_csv(["n"] + [f"S_n@{b}" for b in cfg.bounds], rows, out)


if __name__ == "__main__":
    main()
