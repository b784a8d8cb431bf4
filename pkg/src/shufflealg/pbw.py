"""Ordered PBW monomials, their shuffle images, rank and decomposition."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .families import ShuffleElem, shuffle_all, zero, FamilyMismatch
from .presentations import RootDatum, root_vector_image, window_range
from ._linalg import ModPoint, mod_echelon, exact_rank, solve_square


class GradingMismatch(ValueError):
    pass


class NotInSpan(ArithmeticError):
    pass


@dataclass(frozen=True)
class HFunction:
    """Finite-support multiplicity function h(beta, k) -> positive int.

    ``support`` is a tuple of ((beta, k), mult) sorted in the fixed order on
    roots x modes (root order of the datum, then ascending mode).
    """
    datum: RootDatum
    support: tuple

    def __post_init__(self):
        for (beta, k), m in self.support:
            root = self.datum.root(beta)
            if m <= 0:
                raise ValueError(f"non-positive multiplicity at {(beta, k)}")
            if root.parity and m > 1:
                raise ValueError(f"odd root {beta} repeated at mode {k}")

    @classmethod
    def from_factors(cls, datum, factors):
        counts = {}
        for f in factors:
            counts[tuple(f)] = counts.get(tuple(f), 0) + 1
        key = lambda bk: (datum.root_index(bk[0]), bk[1])
        return cls(datum, tuple(sorted(counts.items(), key=lambda it: key(it[0]))))

    def factors(self):
        """(beta, k) factors of E_h in product order, with repetition."""
        out = []
        for bk, m in self.support:
            out += [bk] * m
        return out

    def partition(self, beta):
        return tuple(k for b, k in self.factors() if b == beta)

    def degree(self):
        """Degree vector: number of factors per root, in root order."""
        d = [0] * len(self.datum.roots)
        for (beta, _), m in self.support:
            d[self.datum.root_index(beta)] += m
        return tuple(d)

    def grading(self):
        return degree_grading(self.datum, self.degree())

    def __str__(self):
        if not self.support:
            return "1"
        return " ".join(f"{b}({k})" + (f"^{m}" if m > 1 else "") for (b, k), m in self.support)

    def __hash__(self):
        return hash((self.datum.id, self.support))

    def __eq__(self, other):
        return (isinstance(other, HFunction) and self.datum.id == other.datum.id
                and self.support == other.support)


def degree_grading(datum, d):
    g = [0] * datum.rank
    for n, root in zip(d, datum.roots):
        for i, c in enumerate(root.vec):
            g[i] += n * c
    return tuple(g)


def degree_vectors(datum, grading):
    """All d in N^{Psi+} with sum d_beta * beta = grading, ascending lex."""
    grading = tuple(grading)
    roots = datum.roots
    out = []

    def rec(i, rest, acc):
        if i == len(roots):
            if not any(rest):
                out.append(tuple(acc))
            return
        vec = roots[i].vec
        cap = min((r // c for r, c in zip(rest, vec) if c), default=0)
        for n in range(cap + 1):
            rec(i + 1, tuple(r - n * c for r, c in zip(rest, vec)), acc + [n])

    rec(0, grading, [])
    return sorted(out)


def enumerate_h(datum, grading, window):
    """All ordered monomials of the given grading with modes in the window.

    Order: ascending lex on degree vectors, then lex on the per-root mode
    tuples (written ascending)."""
    modes = list(window_range(window))
    out = []
    for d in degree_vectors(datum, grading):
        choices = []
        for n, root in zip(d, datum.roots):
            gen = itertools.combinations if root.parity else itertools.combinations_with_replacement
            choices.append([(root.name, ks) for ks in gen(modes, n)])
        for combo in itertools.product(*choices):
            factors = [(name, k) for name, ks in combo for k in ks]
            out.append(HFunction.from_factors(datum, factors))
    return out


_IMAGE_CACHE = {}


def pbw_image(h, order=None):
    """Shuffle image of E_h: ordered product of root-vector images."""
    key = (h.datum.id, h.support, order)
    out = _IMAGE_CACHE.get(key)
    if out is None:
        facs = [root_vector_image(h.datum, b, k, order) for b, k in h.factors()]
        out = shuffle_all(facs, h.datum.family, order)
        _IMAGE_CACHE[key] = out
    return out


def clear_image_cache():
    _IMAGE_CACHE.clear()


def _check_common(elems):
    fam, gr = elems[0].family, tuple(elems[0].grading)
    for e in elems[1:]:
        if e.family is not fam:
            raise FamilyMismatch("elements from different families")
        if tuple(e.grading) != gr:
            raise GradingMismatch(f"grading {tuple(e.grading)} vs {gr}")


def independence_rank(elems, seed=0, tries=3):
    """Rank of the numerators over the coefficient field.

    Full rank is certified by one modular evaluation; otherwise the rank is
    recomputed by exact elimination."""
    elems = list(elems)
    if not elems:
        return 0
    _check_common(elems)
    order = elems[0].order
    rng = random.Random(seed)
    best = 0
    for _ in range(tries):
        pt = ModPoint(order, rng)
        kept, _ = mod_echelon([pt.row(e.num) for e in elems], pt.p)
        best = max(best, len(kept))
        if best == len(elems) or order is not None:
            break
    if best == len(elems):
        return best
    rows = [{xe: c for xe, c in e.num.terms().items()} for e in elems]
    return exact_rank(rows)


def solve_span(target, elems, seed=0):
    """Coefficients c with target = sum c_i elems[i], or None if not in span.

    Pivots come from a modular evaluation; the square subsystem is solved
    exactly and the full residual is checked exactly."""
    elems = list(elems)
    if target.is_zero():
        return [0] * len(elems)
    if not elems:
        return None
    _check_common(elems + [target])
    order = target.order
    pt = ModPoint(order, random.Random(seed))
    rows = [pt.row(e.num) for e in elems]
    kept, pivots = mod_echelon(rows, pt.p)
    if len(kept) == len(elems):
        kept2, _ = mod_echelon(rows + [pt.row(target.num)], pt.p)
        if len(kept2) > len(kept):
            return None
    # square system on the pivot monomials
    basis_terms = [elems[i].num.terms() for i in kept]
    tterms = target.num.terms()
    zero_c = _field_zero(order)
    A = [[bt.get(col, zero_c) for bt in basis_terms] for col in pivots]
    b = [tterms.get(col, zero_c) for col in pivots]
    sol = solve_square(A, b)
    coeffs = [0] * len(elems)
    for i, c in zip(kept, sol):
        coeffs[i] = c
    res = target
    for c, e in zip(coeffs, elems):
        if c:
            res = res - e.scale(c)
    if not res.is_zero():
        return None
    return coeffs


def _field_zero(order):
    if order is None:
        from .coeffield import ParamScalar
        return ParamScalar(0)
    from .coeffield import CycloScalar
    return CycloScalar.const(order, 0)


def pbw_decompose(datum, F, window, widen=0, order=None):
    """Coefficients {h: c_h} with F = sum c_h E_h over h in the window.

    With ``widen`` > 0 a failure is retried once on the window enlarged by
    that amount on both sides."""
    if F.family is not datum.family:
        raise FamilyMismatch(f"{F.family.name} element vs {datum.id}")
    if len(F.grading) != datum.rank:
        raise GradingMismatch(f"grading {F.grading} for {datum.id}")
    order = F.order if order is None else order
    hs = enumerate_h(datum, F.grading, window)
    imgs = [pbw_image(h, order) for h in hs]
    coeffs = solve_span(F, imgs) if imgs else (None if not F.is_zero() else [])
    if coeffs is None:
        if widen:
            lo, hi = window
            return pbw_decompose(datum, F, (lo - widen, hi + widen), 0, order)
        raise NotInSpan(f"element not in span of {len(hs)} ordered monomials on window {tuple(window)}")
    return {h: c for h, c in zip(hs, coeffs) if c}


def decompose_product(datum, factors, window, order=None):
    """Decompose an arbitrary product of root vectors given as (beta, k)."""
    elems = [root_vector_image(datum, b, k, order) for b, k in factors]
    F = shuffle_all(elems, datum.family, order)
    lo = min([window[0]] + [k for _, k in factors])
    hi = max([window[1]] + [k for _, k in factors])
    return F, pbw_decompose(datum, F, (lo, hi), widen=len(factors), order=order)


def recompose(datum, coeffs, grading, order=None):
    out = zero(datum.family, grading, order)
    for h, c in coeffs.items():
        out = out + pbw_image(h, order).scale(c)
    return out
