"""Per-bit description length of Bernoulli(gamma) tables against H(gamma).

Two upper estimates of the conditional complexity of a 2^n-bit table are
compared with the entropy: the enumerative code (which of the C(2^n, k)
tables with k ones) and an off-the-shelf compressor (lzma). The enumerative
rate approaches H(gamma) as n grows; lzma is a looser, model-free proxy.

    python scripts/entropy_trend.py --gammas 0.1 0.25 0.5
"""

import lzma
import math
from dataclasses import dataclass

import numpy as np
from _common import parse_config, write_csv

from aitlab.truthtable import binary_entropy


@dataclass
class Config:
    gammas: tuple = (0.05, 0.1, 0.25, 0.5)
    n_values: tuple = (8, 10, 12, 14, 16, 18, 20)
    seed: int = 0


def log2_binomial(N, k):
    return (math.lgamma(N + 1) - math.lgamma(k + 1) - math.lgamma(N - k + 1)) / math.log(2)


def main():
    cfg, out = parse_config(Config, __doc__)
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for gamma in cfg.gammas:
        h = binary_entropy(gamma)
        for n in cfg.n_values:
            N = 1 << n
            bits = rng.random(N) < gamma
            k = int(bits.sum())
            # index among tables with k ones, plus the count k itself
            enumerative = (log2_binomial(N, k) + math.log2(N + 1)) / N
            packed = np.packbits(bits).tobytes()
            compressed = 8 * len(lzma.compress(packed, preset=9)) / N
            rows.append([gamma, n, k, f"{h:.6f}", f"{enumerative:.6f}", f"{compressed:.6f}"])
    write_csv(["gamma", "n", "k", "entropy", "enumerative_rate", "lzma_rate"], rows, out)


if __name__ == "__main__":
    main()
