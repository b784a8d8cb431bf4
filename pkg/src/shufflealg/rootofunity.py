"""Root-of-unity mode.

Two scalar fields are in play and are never mixed: the symmetric algebra S
works with v a primitive t-th root of unity, the (x, y) algebra Lambda with
v a primitive 2t-th root.  RouContext carries the order explicitly.
"""
from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass

from gmpy2 import mpq

from ._poly import Poly
from .coeffield import CycloScalar
from .families import LAMBDA, S, ShuffleElem, make_elem, monomial_elem, shuffle_all, vpow, zero
from .laurent import LaurentPoly, antisymmetrize
from .pbw import HFunction, NotInSpan, enumerate_h, solve_span
from .presentations import SL21_ODD, CheckResult
from ._linalg import ModPoint, mod_echelon, exact_rank


@dataclass(frozen=True)
class RouContext:
    t: int
    family: str = "LAMBDA"   # "LAMBDA" -> order 2t, "S" -> order t

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be positive")
        if self.family not in ("LAMBDA", "S"):
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def order(self):
        return 2 * self.t if self.family == "LAMBDA" else self.t

    def v(self, a=1):
        return CycloScalar.zeta_power(self.order, a)


# ---------------------------------------------------------------------------
# partitions

def multiplicities(lam):
    return Counter(lam)


def admissible(lam, t):
    return all(m <= t - 1 for m in Counter(lam).values())


def admissible_h(h, t):
    """Multiplicity bound on the gamma modes of h."""
    return admissible(h.partition("g"), t)


def partitions_into(total, parts, lo=0):
    """Weakly increasing tuples of `parts` integers >= lo summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(lo, total // parts + 1):
        for rest in partitions_into(total - first, parts - 1, first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Hall-Littlewood polynomials in S

def _s_kernel_numerator(lam):
    n = len(lam)
    f = Poly.monomial(n, list(lam))
    V = Poly.const(n, 1)
    for i, j in itertools.combinations(range(n), 2):
        xi = [0] * n
        xi[i] = 1
        xj = [0] * n
        xj[j] = 1
        f = f * (Poly.monomial(n, xi) - Poly.monomial(n, xj, 1, 1, 0))
        V = V * (Poly.monomial(n, xi) - Poly.monomial(n, xj))
    return f, V


def hall_littlewood(lam, n=None, order=None):
    """P_lam = Sym(x^lam prod_{i<j} (x_i - v x_j)/(x_i - x_j)) as an element of S
    (Sym normalized by 1/n!)."""
    lam = tuple(lam)
    if n is not None and n != len(lam):
        raise ValueError(f"partition length {len(lam)} != {n}")
    n = len(lam)
    f, V = _s_kernel_numerator(lam)
    P = antisymmetrize(f).divide_exact(V).scale(mpq(1, math.factorial(n)))
    return make_elem(S, (n,), LaurentPoly(P, order=order) if order else LaurentPoly(P), check=False)


def hl_shuffle_product(lam, order=None):
    return shuffle_all([monomial_elem(S, 0, k, order) for k in lam], S, order)


# ---------------------------------------------------------------------------
# Lambda-bar generators and F_h

def gamma_elem(k, order=None, numerator=None):
    """x^k / (x - y) in Lambda_{1,1} (or a given (x, y) numerator)."""
    num = numerator if numerator is not None else LaurentPoly.monomial(2, [k, 0], 1, order)
    return ShuffleElem(LAMBDA, (1, 1), num)


def _factor_elem(beta, k, order):
    if beta == "a1":
        return monomial_elem(LAMBDA, 0, k, order)
    if beta == "a2":
        return monomial_elem(LAMBDA, 1, k, order)
    return gamma_elem(k, order)


def f_h(h, order):
    """F_h: ordered product with x^k/(x-y) in place of the root vector r_k."""
    return shuffle_all([_factor_elem(b, k, order) for b, k in h.factors()], LAMBDA, order)


def gamma_power(k, m, order):
    return shuffle_all([gamma_elem(k, order)] * m, LAMBDA, order)


def gamma_nilpotency(k, m, t):
    """(is the m-fold power of x^k/(x-y) zero at order 2t, expected m >= t)."""
    z = gamma_power(k, m, 2 * t).is_zero()
    return z, (m >= t)


# ---------------------------------------------------------------------------
# wheel conditions

def lambda_chain(t):
    """(x_i, y_i) -> v-power coefficients of t0 on the 2t-cycle
    x1/y1 = y1/x2 = ... = y_t/x1 = -v^{-1}."""
    xs = [(1, 2 * i) for i in range(t)]
    ys = [(-1, 2 * i + 1) for i in range(t)]
    return xs, ys


def restrict_lambda(F, t):
    n, m = F.grading
    if min(n, m) < t:
        return None
    xs, ys = lambda_chain(t)
    rest = [i for i in range(t, n)] + [n + j for j in range(t, m)]
    plan = [None] * (n + m)
    for i, (s, a) in enumerate(xs):
        plan[i] = (0, vpow(a, 0, F.order) * s)
    for j, (s, a) in enumerate(ys):
        plan[n + j] = (0, vpow(a, 0, F.order) * s)
    for r, i in enumerate(rest):
        plan[i] = (r + 1, 1)
    return F.num.substitute(plan, len(rest) + 1)


def restrict_s(F, t):
    n = F.arity
    if n < t:
        return None
    plan = [(0, vpow(i, 0, F.order)) for i in range(t)] + [(r + 1, 1) for r in range(n - t)]
    return F.num.substitute(plan, n - t + 1)


def wheel_check_rou(F, t):
    fam = F.family.name
    inst = f"{fam}{tuple(F.grading)}:t={t}"
    g = restrict_lambda(F, t) if fam == "LAMBDA" else restrict_s(F, t)
    if g is None:
        return CheckResult("PASS", "wheel.rou", inst, "vacuous")
    if g.is_zero():
        return CheckResult("PASS", "wheel.rou", inst)
    return CheckResult("FAIL", "wheel.rou", inst, f"restriction has {len(g)} terms")


# ---------------------------------------------------------------------------
# symmetric factor and elementary expansions

def vandermonde_xy(n, m, order=None):
    V = LaurentPoly.one(n + m, order)
    for block in (range(n), range(n, n + m)):
        for i, j in itertools.combinations(block, 2):
            V = V * (LaurentPoly.var(n + m, i, 1, order) - LaurentPoly.var(n + m, j, 1, order))
    return V


def symmetric_factor(F):
    """g with numerator = V(x) V(y) g."""
    n, m = F.grading
    return F.num.divide_exact(vandermonde_xy(n, m, F.order))


def elementary(n, m, i, which, order=None):
    """i-th elementary symmetric polynomial of the x block (which=0) or y block."""
    idx = range(n) if which == 0 else range(n, n + m)
    out = LaurentPoly.zero(n + m, order)
    for sub in itertools.combinations(idx, i):
        e = [0] * (n + m)
        for s in sub:
            e[s] = 1
        out = out + LaurentPoly.monomial(n + m, e, 1, order)
    return out


def elementary_expansion(g, n, m):
    """Write a polynomial symmetric in x and in y separately as
    sum c * prod chi_i^a_i * prod psi_j^b_j; returns {(a, b): c}."""
    order = g.order
    chis = [elementary(n, m, i, 0, order) for i in range(1, n + 1)]
    psis = [elementary(n, m, j, 1, order) for j in range(1, m + 1)]
    out = {}
    rest = g
    while not rest.is_zero():
        terms = rest.terms()
        lead = max(terms)
        c = terms[lead]
        al, be = lead[:n], lead[n:]
        if any(e < 0 for e in lead) or list(al) != sorted(al, reverse=True) or list(be) != sorted(be, reverse=True):
            raise ValueError("not a bisymmetric polynomial")
        a = tuple(al[i] - (al[i + 1] if i + 1 < n else 0) for i in range(n))
        b = tuple(be[j] - (be[j + 1] if j + 1 < m else 0) for j in range(m))
        prod = LaurentPoly.const(n + m, c, order)
        for p, e in zip(chis + psis, a + b):
            if e:
                prod = prod * p ** e
        out[(a, b)] = c
        rest = rest - prod
    return out


def _unit_key(size, i):
    e = [0] * size
    e[i - 1] = 1
    return tuple(e)


def toy_generators(t):
    """The three families of degree-one products at order 2t, each with its
    certified symmetric-factor structure.  Returns a list of dicts with
    keys name, elem, expansion, ok, detail."""
    order = 2 * t
    x1 = gamma_elem(0, order, LaurentPoly.monomial(2, [1, 0], 1, order))
    y1 = gamma_elem(0, order, LaurentPoly.monomial(2, [0, 1], 1, order))
    one = gamma_elem(0, order)
    xy = gamma_elem(0, order, LaurentPoly.monomial(2, [1, 0], 1, order) + LaurentPoly.monomial(2, [0, 1], 1, order))
    zero_t = (0,) * t
    out = []

    def record(name, elem, check):
        if elem.is_zero():
            out.append(dict(name=name, elem=elem, expansion={}, ok=False, detail="product is zero"))
            return
        exp = elementary_expansion(symmetric_factor(elem), t, t)
        ok, detail = check(exp)
        out.append(dict(name=name, elem=elem, expansion=exp, ok=ok, detail=detail))

    for r in range(1, t):
        def chk(exp, r=r, which=0):
            key = (_unit_key(t, r), zero_t) if which == 0 else (zero_t, _unit_key(t, r))
            ok = set(exp) == {key}
            return ok, f"c={exp.get(key)}" if ok else f"expansion keys {sorted(exp)}"
        record(f"chi_{r}", shuffle_all([x1] * r + [one] * (t - r), LAMBDA, order), chk)
        record(f"psi_{r}", shuffle_all([one] * (t - r) + [y1] * r, LAMBDA, order),
               lambda exp, r=r: chk(exp, r, 1))

    if t >= 2:
        def chk_top(exp):
            kc, kp = (_unit_key(t, t), zero_t), (zero_t, _unit_key(t, t))
            c, d = exp.get(kc), exp.get(kp)
            if c is None or c.is_zero():
                return False, "no chi_t term"
            if d is None or d != c * (-1) ** t:
                return False, f"psi_t coefficient {d} vs chi_t {c}"
            lower = all(any(a[:t - 1]) or any(b[:t - 1]) for (a, b) in exp if (a, b) not in (kc, kp))
            return lower, f"c={c}, L terms={len(exp) - 2}" if lower else "remainder outside the lower ideal"
        record("chi_t+psi_t", shuffle_all([xy] * (t - 2) + [x1, y1], LAMBDA, order), chk_top)
        # the display above cancels to zero at t = 3; this product does not
        record("chi_t+psi_t.alt", shuffle_all([x1] * (t - 1) + [y1], LAMBDA, order), chk_top)
    return out


# ---------------------------------------------------------------------------
# dimensions

def _mono_sym(n, lam, order, offset=0, size=None):
    """Monomial symmetric polynomial m_lam on variables offset..offset+n-1."""
    size = size or n
    out = LaurentPoly.zero(size, order)
    for perm in set(itertools.permutations(lam + (0,) * (n - len(lam)))):
        e = [0] * size
        e[offset:offset + n] = perm
        out = out + LaurentPoly.monomial(size, e, 1, order)
    return out


def _parts_at_most(total, n):
    """Partitions of total with at most n parts (as decreasing tuples)."""
    return [tuple(sorted((p for p in lam if p), reverse=True)) for lam in partitions_into(total, n)]


def _constraint_rank(polys, restrict):
    """Exact rank of the linear map g -> restrict(g) on the given basis."""
    rows = []
    cols = {}
    for g in polys:
        r = restrict(g)
        rows.append(r.terms() if r is not None else {})
    # rank of the matrix whose rows are the images = rank of the map
    return exact_rank(rows)


def s_wheel_dimension(t, n, degree):
    order = t
    basis = [_mono_sym(n, lam, order) for lam in _parts_at_most(degree, n)]
    elems = [ShuffleElem(S, (n,), b) for b in basis]
    rk = _constraint_rank(elems, lambda F: restrict_s(F, t))
    return len(basis) - rk


def s_admissible_span(t, n, degree):
    lams = [lam for lam in partitions_into(degree, n) if admissible(lam, t)]
    P = [hall_littlewood(lam, n, t) for lam in lams]
    return lams, P


def cyclo_rank(elems, seed=0):
    """Exact rank of elements over Q(zeta)."""
    elems = [e for e in elems if not e.is_zero()]
    if not elems:
        return 0
    pt = ModPoint(elems[0].order, random.Random(seed))
    kept, _ = mod_echelon([pt.row(e.num) for e in elems], pt.p)
    if len(kept) == len(elems):
        return len(kept)
    return exact_rank([e.num.terms() for e in elems])


def lambda_wheel_dimension(t, grading, degree):
    """dim of {F in Lambda-bar_{n,m}: numerator V(x)V(y)g, g polynomial of
    degree `degree`, F satisfies the wheel condition}."""
    n, m = grading
    order = 2 * t
    V = vandermonde_xy(n, m, order)
    basis = []
    for dx in range(degree + 1):
        for lx in _parts_at_most(dx, n):
            gx = _mono_sym(n, lx, order, 0, n + m)
            for ly in _parts_at_most(degree - dx, m):
                basis.append(ShuffleElem(LAMBDA, (n, m), V * gx * _mono_sym(m, ly, order, n, n + m)))
    rk = _constraint_rank(basis, lambda F: restrict_lambda(F, t))
    return len(basis) - rk, len(basis)


def mode_sum_for(grading, degree, d_gamma):
    n, m = grading
    return degree + n * (n - 1) // 2 + m * (m - 1) // 2 - n * m + d_gamma


def admissible_hs(t, grading, degree):
    """Admissible h with non-negative modes whose F_h has a polynomial
    symmetric factor of the given degree."""
    n, m = grading
    out = []
    hi = max(0, mode_sum_for(grading, degree, min(n, m)))
    for h in enumerate_h(SL21_ODD, grading, (0, hi)):
        dg = h.degree()[1]
        if sum(k for _, k in h.factors()) == mode_sum_for(grading, degree, dg) and admissible_h(h, t):
            out.append(h)
    return out


@dataclass
class DimensionRow:
    t: int
    grading: tuple
    degree: int
    n_admissible: int
    span_dim: int
    wheel_dim: int
    wheel_fail: int

    @property
    def equal(self):
        return self.n_admissible == self.span_dim == self.wheel_dim and not self.wheel_fail

    def line(self):
        st = "EQUAL" if self.equal else "MISMATCH"
        return (f"t={self.t}\tgrading={','.join(map(str, self.grading))}\tdegree={self.degree}"
                f"\tadmissible={self.n_admissible}\tspan={self.span_dim}\twheel={self.wheel_dim}\t{st}")


def lambda_dimension_row(t, grading, degree):
    hs = admissible_hs(t, grading, degree)
    imgs = [f_h(h, 2 * t) for h in hs]
    fails = sum(1 for F in imgs if not wheel_check_rou(F, t).ok)
    wd, _ = lambda_wheel_dimension(t, grading, degree)
    return DimensionRow(t, tuple(grading), degree, len(hs), cyclo_rank(imgs), wd, fails)


def s_dimension_row(t, n, degree):
    lams, P = s_admissible_span(t, n, degree)
    fails = sum(1 for F in P if not wheel_check_rou(F, t).ok)
    return DimensionRow(t, (n,), degree, len(lams), cyclo_rank(P), s_wheel_dimension(t, n, degree), fails)


# ---------------------------------------------------------------------------
# membership in the subalgebra generated by degree one

def lambda_zeta_membership(F, t, degree_bound=None):
    """{h: c} with F = sum c F_h over admissible h, or raise NotInSpan.

    Each homogeneous piece of F is matched against admissible F_h of the
    same homogeneous degree with modes in [lo, degree_bound]."""
    n, m = F.grading
    order = 2 * t
    if F.order != order:
        raise ValueError(f"element over order {F.order}, expected {order}")
    if F.is_zero():
        return {}
    D = 2 * (n + m) if degree_bound is None else degree_bound
    terms = F.num.terms()
    lo = min(0, min(min(e) for e in terms))
    pieces = {}
    for e, c in terms.items():
        pieces.setdefault(sum(e), {})[e] = c
    result = {}
    for deg, tm in sorted(pieces.items()):
        piece = ShuffleElem(LAMBDA, (n, m), LaurentPoly.from_terms(n + m, tm, order))
        cands = []
        for h in enumerate_h(SL21_ODD, (n, m), (lo, D)):
            if not admissible_h(h, t):
                continue
            if sum(k for _, k in h.factors()) - h.degree()[1] + n * m == deg:
                cands.append(h)
        imgs = [f_h(h, order) for h in cands]
        coeffs = solve_span(piece, imgs) if imgs else None
        if coeffs is None:
            raise NotInSpan(f"homogeneous degree {deg} piece not in span of {len(cands)} admissible F_h "
                            f"(modes in [{lo}, {D}])")
        for h, c in zip(cands, coeffs):
            if c:
                result[h] = c
    return result
