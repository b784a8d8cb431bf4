import itertools
import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from shufflealg.coeffield import ParamScalar, power_v
from shufflealg.families import LAMBDA, OMEGA, FamilyMismatch, monomial_elem, shuffle, shuffle_all
from shufflealg.laurent import LaurentPoly
from shufflealg.pbw import (
    GradingMismatch, HFunction, NotInSpan, decompose_product, enumerate_h,
    independence_rank, pbw_decompose, pbw_image, recompose,
)
from shufflealg.presentations import D21_FERM, D21_ONEFERM, SL21_ODD, generator_image, root_vector_image

from oracles import brute_product, value
from conftest import random_point

DATA = [SL21_ODD, D21_FERM, D21_ONEFERM]
SMALL_GRADINGS = {
    "SL21_ODD": [(1, 1), (2, 1), (1, 2), (2, 2)],
    "D21_FERM": [(1, 1, 0), (1, 1, 1), (0, 1, 1)],
    "D21_ONEFERM": [(1, 1, 1), (1, 2, 1), (2, 1, 0)],
}


def brute_count(datum, grading, window):
    """Multisets of (root, mode) summing to the grading, odd roots at most once."""
    modes = range(window[0], window[1] + 1)
    pairs = [(r, k) for r in datum.roots for k in modes]
    total = sum(grading)
    seen = 0
    for size in range(total + 1):
        for combo in itertools.combinations_with_replacement(range(len(pairs)), size):
            vec = [0] * datum.rank
            for c in combo:
                for i, x in enumerate(pairs[c][0].vec):
                    vec[i] += x
            if tuple(vec) != tuple(grading):
                continue
            if any(pairs[c][0].parity and combo.count(c) > 1 for c in set(combo)):
                continue
            seen += 1
    return seen


def test_enumerate_examples():
    hs = enumerate_h(SL21_ODD, (1, 1), (0, 0))
    assert sorted(str(h) for h in hs) == ["a1(0) a2(0)", "g(0)"]
    assert [str(h) for h in enumerate_h(SL21_ODD, (1, 0), (0, 2))] == ["a1(0)", "a1(1)", "a1(2)"]
    assert len(enumerate_h(SL21_ODD, (0, 0), (0, 1))) == 1


@pytest.mark.parametrize("datum,grading,window", [
    (SL21_ODD, (1, 1), (0, 1)), (SL21_ODD, (2, 2), (0, 1)), (SL21_ODD, (3, 1), (-1, 1)),
    (D21_FERM, (1, 1, 1), (0, 0)), (D21_FERM, (1, 2, 1), (0, 1)),
    (D21_ONEFERM, (1, 2, 1), (0, 1)), (D21_ONEFERM, (2, 1, 0), (0, 2)),
])
def test_enumerate_matches_brute_force(datum, grading, window):
    hs = enumerate_h(datum, grading, window)
    assert len(hs) == brute_count(datum, grading, window)
    assert len(set(hs)) == len(hs)
    for h in hs:
        assert h.grading() == tuple(grading)
        assert all(m == 1 for (b, _), m in h.support if datum.root(b).parity)


def test_hfunction_rejects_repeated_odd_root():
    with pytest.raises(ValueError):
        HFunction.from_factors(SL21_ODD, [("a1", 0), ("a1", 0)])
    h = HFunction.from_factors(SL21_ODD, [("a2", 1), ("g", 0), ("a1", 0), ("g", 0)])
    assert h.factors() == [("a1", 0), ("g", 0), ("g", 0), ("a2", 1)]
    assert h.degree() == (1, 2, 1) and h.grading() == (3, 3)


def test_image_examples():
    h = HFunction.from_factors(SL21_ODD, [("g", 0)])
    assert pbw_image(h) == root_vector_image(SL21_ODD, "g", 0)
    pq = pbw_image(HFunction.from_factors(SL21_ODD, [("a1", 0), ("a2", 0)]))
    x, y = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)
    assert pq.num == x + y * power_v(-1)


def test_image_triple_against_oracle():
    h = HFunction.from_factors(SL21_ODD, [("a1", 0), ("g", 1), ("a2", 2)])
    F = pbw_image(h)
    p0, r1, q2 = (root_vector_image(SL21_ODD, b, k) for b, k in h.factors())
    rng = random.Random(5)
    v0 = mpq(8, 3)
    for _ in range(2):
        pt = random_point(rng, 4)
        # (p0 * r1) * q2 with the inner product also by brute force
        inner = shuffle(p0, r1)
        # x = pt[:2], y = pt[2:]
        assert value(inner, [pt[0], pt[1], pt[2]], v0, 1) == brute_product(p0, r1, [pt[0], pt[1], pt[2]], v0, 1)
        assert value(F, pt, v0, 1) == brute_product(inner, q2, pt, v0, 1)


def test_rank_examples():
    F = root_vector_image(SL21_ODD, "g", 0)
    assert independence_rank([F]) == 1
    assert independence_rank([F, F.scale(2)]) == 1
    assert independence_rank([F, F.scale(power_v(1)) + root_vector_image(SL21_ODD, "g", 1)]) == 2
    with pytest.raises(GradingMismatch):
        independence_rank([F, generator_image(SL21_ODD, 1, 0)])


@pytest.mark.parametrize("datum,grading,window", [
    (SL21_ODD, (1, 1), (0, 1)), (SL21_ODD, (2, 2), (0, 1)), (SL21_ODD, (2, 1), (0, 2)),
    (D21_FERM, (1, 1, 1), (0, 1)), (D21_FERM, (2, 1, 1), (0, 1)),
    (D21_ONEFERM, (1, 2, 1), (0, 1)), (D21_ONEFERM, (2, 1, 1), (0, 1)),
])
def test_full_rank(datum, grading, window):
    hs = enumerate_h(datum, grading, window)
    assert independence_rank([pbw_image(h) for h in hs]) == len(hs)


def test_decompose_examples():
    hs = enumerate_h(SL21_ODD, (2, 1), (0, 1))
    h0, h1, h2 = hs[0], hs[1], hs[-1]
    assert pbw_decompose(SL21_ODD, pbw_image(h0), (0, 1)) == {h0: ParamScalar(1)}
    F = pbw_image(h1).scale(power_v(1)) + pbw_image(h2)
    assert pbw_decompose(SL21_ODD, F, (0, 1)) == {h1: power_v(1), h2: ParamScalar(1)}


def test_wrong_order_product_matches_comm_lemma():
    # q_0 p_1 = v [p_1, q_0]_{v^-1} - v p_1 q_0 = v r_1 - v p_1 q_0
    F, coeffs = decompose_product(SL21_ODD, [("a2", 0), ("a1", 1)], (0, 1))
    want = {HFunction.from_factors(SL21_ODD, [("g", 1)]): power_v(1),
            HFunction.from_factors(SL21_ODD, [("a1", 1), ("a2", 0)]): -power_v(1)}
    assert coeffs == want
    assert recompose(SL21_ODD, coeffs, (1, 1)) == F


def test_not_in_span_and_errors():
    F = shuffle(generator_image(SL21_ODD, 2, 0), generator_image(SL21_ODD, 1, 3))
    with pytest.raises(NotInSpan):
        pbw_decompose(SL21_ODD, F, (0, 1))
    assert pbw_decompose(SL21_ODD, F, (0, 1), widen=2)
    with pytest.raises(FamilyMismatch):
        pbw_decompose(D21_FERM, F, (0, 1))


@settings(max_examples=8)
@given(st.sampled_from(DATA), st.integers(0, 2**32))
def test_random_generator_triples_decompose(datum, seed):
    rng = random.Random(seed)
    simple = [r.name for r in datum.roots if r.split is None]
    factors = [(rng.choice(simple), rng.randint(0, 1)) for _ in range(3)]
    F, coeffs = decompose_product(datum, factors, (0, 1))
    assert recompose(datum, coeffs, F.grading) == F


@settings(max_examples=10)
@given(st.sampled_from(DATA), st.integers(0, 2**32))
def test_decompose_inverts_image(datum, seed):
    rng = random.Random(seed)
    grading = rng.choice(SMALL_GRADINGS[datum.id])
    hs = enumerate_h(datum, grading, (0, 1))
    pick = rng.sample(hs, min(3, len(hs)))
    coeffs = {h: power_v(rng.randint(-2, 2)) * rng.choice([1, -2, mpq(1, 3)]) for h in pick}
    F = recompose(datum, coeffs, grading)
    assert pbw_decompose(datum, F, (0, 1)) == coeffs
