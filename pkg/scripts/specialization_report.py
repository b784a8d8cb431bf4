"""Per-grading specialization report: vanishing below deg(h), closed form
at deg(h) with the printed and the corrected tables, and the Lambda step map."""
import argparse
import time
from dataclasses import dataclass

from shufflealg.presentations import DATA
from shufflealg.specialization import check_rho, check_specialization


@dataclass
class Config:
    max_vars: int = 5
    rho_samples: int = 10
    seed: int = 0


def summarize(tag, res):
    bad = [r for r in res if not r.ok]
    print(f"{tag:<40} {len(res) - len(bad):4d}/{len(res):<4d} pass")
    for r in bad[:5]:
        print("    " + r.line())


def main(cfg):
    for d in DATA.values():
        t0 = time.time()
        summarize(f"{d.id} printed tables", check_specialization(d, cfg.max_vars, literal=True))
        summarize(f"{d.id} corrected tables", check_specialization(d, cfg.max_vars))
        print(f"    ({time.time() - t0:.1f}s)")
    summarize("rho step, signed", check_rho(cfg.rho_samples, cfg.seed, cfg.max_vars, signed=True))
    summarize("rho step, unsigned", check_rho(cfg.rho_samples, cfg.seed, cfg.max_vars, signed=False))


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-vars", type=int, default=5)
    ap.add_argument("--rho-samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    main(Config(a.max_vars, a.rho_samples, a.seed))
