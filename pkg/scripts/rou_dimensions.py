"""Dimension tables at a root of unity: admissible F_h (Lambda-bar) and
admissible Hall-Littlewood P_lambda (S) against the wheel-passing subspace."""
import argparse
from dataclasses import dataclass, field

from shufflealg.rootofunity import lambda_dimension_row, s_dimension_row


@dataclass
class Config:
    ts: list = field(default_factory=lambda: [2, 3])
    lambda_gradings: list = field(default_factory=lambda: [(2, 2), (3, 3)])
    max_degree: int = 6
    s_nmax: int = 4


def main(cfg):
    for t in cfg.ts:
        for g in cfg.lambda_gradings:
            for D in range(cfg.max_degree + 1):
                print("Lambda", lambda_dimension_row(t, g, D).line(), flush=True)
        for n in range(1, cfg.s_nmax + 1):
            for D in range(cfg.max_degree + 1):
                print("S     ", s_dimension_row(t, n, D).line(), flush=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--t", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--max-degree", type=int, default=6)
    ap.add_argument("--s-nmax", type=int, default=4)
    a = ap.parse_args()
    main(Config(ts=a.t, max_degree=a.max_degree, s_nmax=a.s_nmax))
