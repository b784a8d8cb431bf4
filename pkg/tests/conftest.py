import random

import pytest
from gmpy2 import mpq

from shufflealg.coeffield import power_v
from shufflealg.families import group_indices, make_elem
from shufflealg.laurent import LaurentPoly
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(lo=-6, hi=6, maxden=5):
    return st.builds(lambda a, b: mpq(a, b), st.integers(lo, hi), st.integers(1, maxden))


def nonzero_rationals():
    return rationals().filter(lambda q: q != 0)


@pytest.fixture
def rng():
    return random.Random(12345)


def random_point(rng, n, avoid=()):
    """Distinct rationals away from a few special values."""
    pts = []
    bad = set(avoid) | {0, 1, -1}
    while len(pts) < n:
        x = mpq(rng.randint(-40, 40), rng.randint(1, 9))
        if x not in bad and x not in pts:
            pts.append(x)
    return pts


def random_elem(family, grading, rng, terms=2):
    n = sum(grading)
    modes = ["asym" if g.symmetry == "skew" else "sym" for g in family.groups]
    groups = group_indices(grading)
    for _ in range(20):
        f = LaurentPoly.zero(n)
        for _ in range(terms):
            e = [rng.randint(-1, 2) for _ in range(n)]
            f = f + LaurentPoly.monomial(n, e, power_v(rng.randint(-1, 1), rng.randint(-1, 1) if family.name != "LAMBDA" and family.name != "S" else 0) * rng.choice([1, -2, 3]))
        f = f.group_symmetrize(groups, modes)
        if not f.is_zero():
            return make_elem(family, grading, f)
    raise RuntimeError("could not build a nonzero element")


def small_grading(family, rng, maxvars):
    g = family.ngroups
    while True:
        gr = tuple(rng.randint(0, 2) for _ in range(g))
        if 1 <= sum(gr) <= maxvars:
            return gr
