"""Exact linear algebra on shuffle-element numerators.

Rank certificates work modulo a large prime at a random point: a nonzero
minor of the reduced matrix is the image of a nonzero minor over Q(v, u)
(or Q(zeta_N)), so full rank mod p certifies full rank exactly.  Anything
short of full rank falls back to elimination over the exact field.
"""
from __future__ import annotations

import random
from functools import lru_cache

import gmpy2

from ._poly import unpack

PRIME = (1 << 61) - 1


@lru_cache(maxsize=None)
def _cyclo_prime(order):
    """A prime p = 1 mod order near 2^61 and a primitive order-th root mod p."""
    m = ((1 << 61) // order) + 1
    while True:
        p = m * order + 1
        if gmpy2.is_prime(p):
            break
        m += 1
    primes = [q for q in range(2, order + 1) if gmpy2.is_prime(q) and order % q == 0]
    g = 2
    while True:
        w = pow(g, (p - 1) // order, p)
        if all(pow(w, order // q, p) != 1 for q in primes):
            return p, w
        g += 1


class ModPoint:
    """Evaluation homomorphism Z[v^±, u^±] (with Q coefficients) -> F_p."""

    def __init__(self, order=None, rng=None):
        rng = rng or random.Random(0)
        if order is None:
            self.p = PRIME
            self.v = rng.randrange(2, self.p - 1)
            self.u = rng.randrange(2, self.p - 1)
        else:
            self.p, self.v = _cyclo_prime(order)
            self.u = 1
        self._vp = {}
        self._up = {}

    def coeff(self, c):
        p = self.p
        if isinstance(c, int):
            return c % p
        den = int(c.denominator) % p
        if den == 0:
            raise ZeroDivisionError("coefficient denominator vanishes mod p")
        return int(c.numerator) * pow(den, -1, p) % p

    def _pow(self, cache, base, e):
        r = cache.get(e)
        if r is None:
            r = cache[e] = pow(base, e, self.p)
        return r

    def poly0(self, poly):
        """Value of an arity-0 Poly."""
        p = self.p
        s = 0
        for k, c in poly.terms.items():
            a, b = unpack(0, k)
            s += self.coeff(c) * self._pow(self._vp, self.v, a) * self._pow(self._up, self.u, b)
        return s % p

    def row(self, lp):
        """Numerator coefficients of a LaurentPoly as {x-exps: int mod p}."""
        out = {}
        for xe, c in lp.poly.split_x().items():
            val = self.poly0(c)
            if val:
                out[xe] = val
        return out


def mod_echelon(rows, p):
    """Greedy row basis of sparse rows mod p.

    Returns (indices of rows kept, pivot columns).  Rows are processed in
    order, so the kept set is the lexicographically first basis.
    """
    basis = []   # (pivot col, reduced row)
    kept, pivots = [], []
    for idx, row in enumerate(rows):
        r = dict(row)
        for col, brow in basis:
            c = r.get(col)
            if c:
                for k, val in brow.items():
                    nv = (r.get(k, 0) - c * val) % p
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        if not r:
            continue
        col = min(r)
        inv = pow(r[col], -1, p)
        r = {k: val * inv % p for k, val in r.items()}
        basis.append((col, r))
        kept.append(idx)
        pivots.append(col)
    return kept, pivots


def _size(c):
    num = getattr(c, "num", None)
    if num is not None:
        return len(num.terms) + len(c.den.terms)
    return sum(1 for a in c.coeffs if a)


def exact_rank(rows):
    """Rank of sparse rows {col: field element} by elimination with
    smallest-entry pivoting."""
    rows = [dict((k, c) for k, c in r.items() if c) for r in rows]
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        best = None
        for i, r in enumerate(rows):
            for col, c in r.items():
                s = _size(c)
                if best is None or s < best[0]:
                    best = (s, i, col)
        _, i, col = best
        prow = rows.pop(i)
        piv = prow[col]
        rank += 1
        new = []
        for r in rows:
            c = r.get(col)
            if c:
                f = c / piv
                r = dict(r)
                for k, val in prow.items():
                    nv = r.get(k, 0) - f * val if k in r else -(f * val)
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
            if r:
                new.append(r)
        rows = new
    return rank


def solve_square(A, b):
    """Solve A x = b exactly for nonsingular dense A over a field."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        best = None
        for r in range(c, n):
            if M[r][c]:
                s = _size(M[r][c])
                if best is None or s < best[0]:
                    best = (s, r)
        if best is None:
            raise ZeroDivisionError("singular system")
        r = best[1]
        M[c], M[r] = M[r], M[c]
        piv = M[c][c]
        inv = 1 / piv
        M[c] = [x * inv if x else x for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y if y else x for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]
