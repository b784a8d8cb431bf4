"""Packed sparse Laurent polynomials over Q.

A `Poly` of arity n lives in Q[x_0^{+-1}, ..., x_{n-1}^{+-1}, v^{+-1}, u^{+-1}].
Every monomial is packed into one Python int: each exponent is biased by
``BIAS`` and stored in a ``WIDTH``-bit field, x_0 in the most significant
field and u in the least significant one.  Multiplying monomials is then a
single integer addition, and integer order on keys is the lexicographic
order on exponent vectors (x_0 > ... > x_{n-1} > v > u).

This module is the arithmetic kernel; the field-level semantics live in
`coeffield` and `laurent`.
"""
from __future__ import annotations

import heapq
from functools import lru_cache

from gmpy2 import mpq

WIDTH = 16
BIAS = 1 << (WIDTH - 1)
MASK = (1 << WIDTH) - 1


class NotDivisible(ArithmeticError):
    """Raised when an exact division has a nonzero remainder."""


@lru_cache(maxsize=None)
def layout(n):
    """(shifts, bias word) for arity n; fields are x_0..x_{n-1}, v, u."""
    shifts = tuple(WIDTH * (n + 1 - i) for i in range(n + 2))
    biasword = sum(BIAS << s for s in shifts)
    return shifts, biasword


def pack(n, exps):
    shifts, _ = layout(n)
    return sum((e + BIAS) << s for e, s in zip(exps, shifts))


def unpack(n, key):
    shifts, _ = layout(n)
    return [((key >> s) & MASK) - BIAS for s in shifts]


def _norm(c):
    # keep integers as int, everything else as mpq
    if isinstance(c, int):
        return c
    c = mpq(c)
    return int(c.numerator) if c.denominator == 1 else c


class Poly:
    """Immutable-by-convention sparse Laurent polynomial with packed keys."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = terms if terms is not None else {}

    # -- construction -------------------------------------------------
    @classmethod
    def const(cls, n, c):
        c = _norm(c)
        if not c:
            return cls(n)
        return cls(n, {layout(n)[1]: c})

    @classmethod
    def monomial(cls, n, xexps=None, c=1, a=0, b=0):
        xexps = list(xexps) if xexps is not None else [0] * n
        c = _norm(c)
        if not c:
            return cls(n)
        return cls(n, {pack(n, xexps + [a, b]): c})

    @classmethod
    def var(cls, n, i, power=1):
        e = [0] * n
        e[i] = power
        return cls.monomial(n, e)

    @classmethod
    def from_items(cls, n, items):
        """Build from iterable of (exponent list of length n+2, coeff)."""
        out = {}
        for exps, c in items:
            k = pack(n, exps)
            out[k] = out.get(k, 0) + c
        return cls(n, {k: _norm(c) for k, c in out.items() if c})

    # -- basic queries ------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """Yield (exponent list [x..., a, b], coeff)."""
        n = self.n
        for k, c in self.terms.items():
            yield unpack(n, k), c

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly(n={self.n}, {len(self.terms)} terms)"

    def constant_value(self):
        """Rational value if self is a constant (no x, v, u), else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1:
            (k, c), = self.terms.items()
            if k == layout(self.n)[1]:
                return c
        return None

    # -- ring operations ----------------------------------------------
    def _check(self, other):
        if self.n != other.n:
            raise ValueError(f"arity mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        if len(self.terms) < len(other.terms):
            self, other = other, self
        out = dict(self.terms)
        get = out.get
        for k, c in other.terms.items():
            s = get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Poly(self.n, out)

    def __neg__(self):
        return Poly(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        get = out.get
        for k, c in other.terms.items():
            s = get(k, 0) - c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Poly(self.n, out)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly(self.n)
        if len(a) < len(b):
            a, b = b, a
        bw = layout(self.n)[1]
        out = {}
        get = out.get
        blist = list(b.items())
        for k1, c1 in a.items():
            base = k1 - bw
            for k2, c2 in blist:
                k = base + k2
                out[k] = get(k, 0) + c1 * c2
        return Poly(self.n, {k: _norm(c) for k, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c):
        c = _norm(c)
        if not c:
            return Poly(self.n)
        if c == 1:
            return self
        return Poly(self.n, {k: _norm(v * c) for k, v in self.terms.items()})

    def shift(self, xexps=None, a=0, b=0):
        """Multiply by the monomial x^xexps v^a u^b."""
        n = self.n
        xexps = list(xexps) if xexps is not None else [0] * n
        d = pack(n, xexps + [a, b]) - layout(n)[1]
        return Poly(n, {k + d: c for k, c in self.terms.items()})

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- variable maps ------------------------------------------------
    def remap(self, n_new, positions):
        """Send x_i to x_{positions[i]} in arity n_new (v, u unchanged)."""
        n = self.n
        shifts, _ = layout(n)
        nshifts, _ = layout(n_new)
        used = set(positions)
        base = sum(BIAS << nshifts[j] for j in range(n_new) if j not in used)
        pairs = [(shifts[i], nshifts[positions[i]]) for i in range(n)]
        pairs.append((shifts[n], nshifts[n_new]))
        pairs.append((shifts[n + 1], nshifts[n_new + 1]))
        out = {}
        for k, c in self.terms.items():
            nk = base
            for s, t in pairs:
                nk += ((k >> s) & MASK) << t
            out[nk] = c
        return Poly(n_new, out)

    def substitute(self, n_new, plan):
        """Monomial substitution x_i -> coeff_i * v^a_i * u^b_i * w_{t_i}.

        ``plan[i] = (t_i, coeff_i, a_i, b_i)``; ``t_i`` may be None to send
        x_i to the constant coeff_i * v^a_i * u^b_i.  ``coeff_i`` must be a
        nonzero rational.
        """
        n = self.n
        shifts, _ = layout(n)
        nshifts, nbias = layout(n_new)
        sv, su = 1 << nshifts[n_new], 1 << nshifts[n_new + 1]
        # the packed key is linear in the exponents: accumulate deltas
        fields = []
        for i in range(n):
            t, ci, ai, bi = plan[i]
            d = ai * sv + bi * su + (1 << nshifts[t] if t is not None else 0)
            fields.append((shifts[i], d, None if ci == 1 else mpq(ci), {}))
        fields.append((shifts[n], sv, None, None))
        fields.append((shifts[n + 1], su, None, None))
        out = {}
        get = out.get
        for k, c in self.terms.items():
            nk = nbias
            coeff = c
            for s, d, ci, cache in fields:
                ei = ((k >> s) & MASK) - BIAS
                if ei:
                    nk += ei * d
                    if ci is not None:
                        p = cache.get(ei)
                        if p is None:
                            p = cache[ei] = _norm(ci ** ei)
                        coeff = coeff * p
            out[nk] = get(nk, 0) + coeff
        return Poly(n_new, {k: _norm(c) for k, c in out.items() if c})

    # -- evaluation ---------------------------------------------------
    def evaluate(self, point, v0=1, u0=1):
        """Exact value at x = point, v = v0, u = u0 (rationals)."""
        n = self.n
        vals = [mpq(p) for p in point] + [mpq(v0), mpq(u0)]
        caches = [dict() for _ in range(n + 2)]
        total = mpq(0)
        for k, c in self.terms.items():
            term = mpq(c)
            for i, e in enumerate(unpack(n, k)):
                if e:
                    p = caches[i].get(e)
                    if p is None:
                        if vals[i] == 0 and e < 0:
                            raise ZeroDivisionError("pole at evaluation point")
                        p = vals[i] ** e
                        caches[i][e] = p
                    term *= p
            total += term
        return total

    # -- structure ----------------------------------------------------
    def min_exponents(self):
        n = self.n
        mins = None
        for k in self.terms:
            e = unpack(n, k)
            mins = e if mins is None else [min(a, b) for a, b in zip(mins, e)]
        return mins if mins is not None else [0] * (n + 2)

    def max_exponents(self):
        n = self.n
        maxs = None
        for k in self.terms:
            e = unpack(n, k)
            maxs = e if maxs is None else [max(a, b) for a, b in zip(maxs, e)]
        return maxs if maxs is not None else [0] * (n + 2)

    def x_degrees(self):
        """Set of total x-degrees occurring."""
        n = self.n
        return {sum(unpack(n, k)[:n]) for k in self.terms}

    def split_x(self):
        """Group terms by x-exponent: {x-exps tuple: arity-0 Poly in v, u}."""
        n = self.n
        groups = {}
        for k, c in self.terms.items():
            e = unpack(n, k)
            key0 = pack(0, e[n:])
            groups.setdefault(tuple(e[:n]), {})[key0] = c
        return {xe: Poly(0, t) for xe, t in groups.items()}

    def reduce_cyclo(self, table):
        """Reduce v-exponents with ``table[a % N] = [(j, c_j)]`` meaning
        v^a = sum_j c_j v^j in the cyclotomic field of order N = len(table)."""
        n = self.n
        shifts, _ = layout(n)
        sv = shifts[n]
        order = len(table)
        out = {}
        get = out.get
        for k, c in self.terms.items():
            a = ((k >> sv) & MASK) - BIAS
            base = k - ((a + BIAS) << sv)
            for j, cj in table[a % order]:
                nk = base + ((j + BIAS) << sv)
                out[nk] = get(nk, 0) + c * cj
        return Poly(n, {k: _norm(c) for k, c in out.items() if c})

    # -- exact division -----------------------------------------------
    def divide_exact(self, g):
        """Return q with self = g * q in the Laurent ring, or raise NotDivisible."""
        self._check(g)
        if not g.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return Poly(self.n)
        n = self.n
        mf = self.min_exponents()
        mg = g.min_exponents()
        fp = self.shift([-e for e in mf[:n]], -mf[n], -mf[n + 1])
        gp = g.shift([-e for e in mg[:n]], -mg[n], -mg[n + 1])
        q = _poly_divide(fp, gp)
        d = [a - b for a, b in zip(mf, mg)]
        return q.shift(d[:n], d[n], d[n + 1])

    def divide_difference(self, a, b):
        """Exact quotient by (x_a - x_b), in time linear in the term count.

        Terms are grouped by all other exponents and by e_a + e_b; in each
        group the quotient coefficients are running sums over descending e_a."""
        shifts, _ = layout(self.n)
        sa, sb = shifts[a], shifts[b]
        groups = {}
        for k, c in self.terms.items():
            ea = ((k >> sa) & MASK) - BIAS
            eb = ((k >> sb) & MASK) - BIAS
            rest = k - ((ea + BIAS) << sa) - ((eb + BIAS) << sb)
            groups.setdefault((rest, ea + eb), []).append((ea, c))
        out = {}
        unit_a, unit_b = 1 << sa, 1 << sb
        for (rest, d), row in groups.items():
            row.sort(reverse=True)
            acc = 0
            base = rest + (BIAS << sa) + ((d + BIAS) << sb)
            prev = None
            for ea, c in row:
                if acc and prev is not None:
                    # x_a^{i-1} x_b^{d-i} for every i in (ea, prev]
                    for i in range(prev, ea, -1):
                        out[base + (i - 1) * unit_a - i * unit_b] = acc
                acc = acc + c
                prev = ea
            if acc:
                raise NotDivisible("nonzero remainder")
        return Poly(self.n, {k: _norm(c) for k, c in out.items() if c})


def _poly_divide(f, g):
    # f, g ordinary polynomials (all exponents >= 0); lex order = key order
    n = f.n
    shifts, bw = layout(n)
    lk = max(g.terms)
    lc = mpq(g.terms[lk])
    gl = unpack(n, lk)
    rest = [(k - bw, c) for k, c in g.terms.items() if k != lk]
    r = dict(f.terms)
    heap = [-k for k in r]
    heapq.heapify(heap)
    q = {}
    while heap:
        k = -heapq.heappop(heap)
        c = r.pop(k, 0)
        if not c:
            continue
        e = unpack(n, k)
        if any(a < b for a, b in zip(e, gl)):
            raise NotDivisible("nonzero remainder")
        qk = k - lk + bw
        qc = _norm(mpq(c) / lc)
        q[qk] = qc
        base = qk
        for gk, gc in rest:
            nk = base + gk
            old = r.get(nk)
            if old is None:
                r[nk] = -qc * gc
                heapq.heappush(heap, -nk)
            else:
                s = old - qc * gc
                if s:
                    r[nk] = s
                else:
                    del r[nk]
    return Poly(n, q)
