"""Relation and bracket-lemma residuals for all three presentations.

    python scripts/run_relations.py --window -1..1
"""
import argparse
import time
from collections import Counter
from dataclasses import dataclass

from shufflealg.cli import parse_window
from shufflealg.presentations import DATA, check_comm_lemmas, check_relations


@dataclass
class Config:
    window: tuple = (-1, 1)
    comm_window: tuple = (-2, 2)
    verbose: bool = False


def run(cfg):
    for d in DATA.values():
        t0 = time.time()
        res = check_relations(d, cfg.window)
        tally = Counter((r.suite, r.status) for r in res)
        print(f"{d.id} window={cfg.window} ({time.time() - t0:.1f}s)")
        for (suite, st), n in sorted(tally.items()):
            print(f"  {suite:<14} {st} x{n}")
        if cfg.verbose:
            for r in res:
                if not r.ok:
                    print("  " + r.line())
    res = check_comm_lemmas(cfg.comm_window)
    print(f"sl21 bracket lemmas window={cfg.comm_window}")
    for (suite, st), n in sorted(Counter((r.suite, r.status) for r in res).items()):
        print(f"  {suite:<16} {st} x{n}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--window", default="-1..1")
    ap.add_argument("--comm-window", default="-2..2")
    ap.add_argument("-v", "--verbose", action="store_true")
    ns, _ = ap.parse_known_args()
    run(Config(parse_window(ns.window), parse_window(ns.comm_window), ns.verbose))
