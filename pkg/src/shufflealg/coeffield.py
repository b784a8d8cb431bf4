"""Exact scalars: the generic field Q(v, u) and cyclotomic fields Q(zeta_N).

``u`` stands for ``v**theta`` with theta generic, so ``v**(a + b*theta)`` is
the monomial ``v**a * u**b``.  A `ParamScalar` is a reduced fraction of two
polynomials in (v, u); reduction uses a primitive PRS gcd over Z[u][v].
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq

from ._poly import Poly, NotDivisible, pack, unpack, layout, _norm


class DivisionByZero(ZeroDivisionError):
    pass


class PoleAtPoint(ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# univariate Z[u] helpers (dense lists, index = degree)

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _up_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _up_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _up_content(a):
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def _up_pp(a):
    g = _up_content(a)
    if g == 0:
        return []
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _up_divexact(a, b):
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        d = len(a) - 1 - db
        c, r = divmod(a[-1], lb)
        if r:
            raise NotDivisible("inexact integer division")
        q[d] = c
        for i, y in enumerate(b):
            a[i + d] -= c * y
        _trim(a)
    if a:
        raise NotDivisible("nonzero remainder")
    return _trim(q)


def _up_prem(a, b):
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while a and len(a) - 1 >= db:
        d = len(a) - 1 - db
        la = a[-1]
        a = [lb * x for x in a]
        for i, y in enumerate(b):
            a[i + d] -= la * y
        _trim(a)
    return a


def _up_gcd(a, b):
    if not a:
        return _up_pp(b) if b else []
    if not b:
        return _up_pp(a)
    c = math.gcd(_up_content(a), _up_content(b))
    a, b = _up_pp(a), _up_pp(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _up_prem(a, b)
        a, b = b, _up_pp(r)
    g = _up_pp(a)
    return [c * x for x in g]


# ---------------------------------------------------------------------------
# bivariate Z[u][v] helpers: list over v-degree of u-polys

def _bp_content(A):
    g = []
    for c in A:
        if c:
            g = _up_gcd(g, c)
            if len(g) == 1 and abs(g[0]) == 1:
                return [1]
    return g


def _bp_pp(A):
    c = _bp_content(A)
    if not c:
        return []
    return [_up_divexact(x, c) if x else [] for x in A]


def _bp_trim(A):
    while A and not A[-1]:
        A.pop()
    return A


def _bp_prem(A, B):
    A = [list(x) for x in A]
    db = len(B) - 1
    lb = B[-1]
    while A and len(A) - 1 >= db:
        d = len(A) - 1 - db
        la = A[-1]
        A = [_up_mul(lb, x) for x in A]
        for i, y in enumerate(B):
            A[i + d] = _up_sub(A[i + d], _up_mul(la, y))
        _bp_trim(A)
    return A


def _bp_gcd(A, B):
    cA, cB = _bp_content(A), _bp_content(B)
    c = _up_gcd(cA, cB)
    A, B = _bp_pp(A), _bp_pp(B)
    if len(A) < len(B):
        A, B = B, A
    while B:
        if len(B) == 1:
            A = [[1]]
            break
        R = _bp_prem(A, B)
        A, B = B, _bp_pp(R)
    G = _bp_pp(A) if len(A) > 1 else [[1]]
    return [_up_mul(c, x) for x in G]


def _to_bp(p):
    # Poly(0) with integer coeffs and nonnegative exponents -> bivariate list
    A = []
    for (a, b), c in p.items():
        while len(A) <= a:
            A.append([])
        row = A[a]
        while len(row) <= b:
            row.append(0)
        row[b] += int(c)
    return [_trim(r) for r in A]


def _from_bp(A):
    items = []
    for a, row in enumerate(A):
        for b, c in enumerate(row):
            if c:
                items.append(([a, b], c))
    return Poly.from_items(0, items)


def poly_gcd(p, q):
    """gcd in Z[v, u] of two arity-0 polys with integer coefficients and
    nonnegative exponents; normalized to positive leading coefficient."""
    if not p.terms:
        return q
    if not q.terms:
        return p
    g = _from_bp(_bp_gcd(_to_bp(p), _to_bp(q)))
    if g.terms and g.terms[max(g.terms)] < 0:
        g = -g
    return g


def _integer_primitive(p):
    """(content c, primitive integer poly P) with p = c * P, lc(P) > 0."""
    den = 1
    for c in p.terms.values():
        if not isinstance(c, int):
            den = den * c.denominator // math.gcd(den, int(c.denominator))
    num_g = 0
    scaled = {}
    for k, c in p.terms.items():
        s = int(c * den)
        scaled[k] = s
        num_g = math.gcd(num_g, s)
    if scaled[max(scaled)] < 0:
        num_g = -num_g
    return mpq(num_g, den), Poly(p.n, {k: s // num_g for k, s in scaled.items()})


# ---------------------------------------------------------------------------

_ONE0 = None


def _one0():
    global _ONE0
    if _ONE0 is None:
        _ONE0 = Poly.const(0, 1)
    return _ONE0


class ParamScalar:
    """Element of Q(v, u) in canonical reduced form num/den.

    ``den`` is a primitive integer polynomial with positive leading
    coefficient (lex, v > u) and no monomial factor; ``num`` is a Laurent
    polynomial with rational coefficients coprime to ``den``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _reduced=False):
        if isinstance(num, ParamScalar):
            self.num, self.den, self._hash = num.num, num.den, None
            return
        if not isinstance(num, Poly):
            num = Poly.const(0, _coerce_rational(num))
        if den is None:
            self.num, self.den = num, _one0()
        elif _reduced:
            self.num, self.den = num, den
        else:
            self.num, self.den = _reduce(num, den)
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def from_poly(cls, p):
        return cls(p)

    @classmethod
    def v_power(cls, a, b=0, c=1):
        return cls(Poly.monomial(0, [], c, a, b))

    # -- predicates ---------------------------------------------------
    def is_zero(self):
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_polynomial(self):
        return self.den.terms == _one0().terms

    def is_unit_monomial(self):
        """True if self = c * v^a * u^b with c a nonzero rational."""
        return self.is_polynomial() and len(self.num.terms) == 1

    def rational_value(self):
        """The value as a rational if self is a constant, else None."""
        if not self.is_polynomial():
            return None
        return self.num.constant_value()

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _as_scalar(other)
        if other is None:
            return NotImplemented
        if self.is_polynomial() and other.is_polynomial():
            return ParamScalar(self.num + other.num)
        if self.den.terms == other.den.terms:
            return ParamScalar(self.num + other.num, self.den)
        return ParamScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _as_scalar(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_scalar(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_scalar(other)
        if other is None:
            return NotImplemented
        if self.is_polynomial() and other.is_polynomial():
            return ParamScalar(self.num * other.num)
        return ParamScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.terms:
            raise DivisionByZero("inverse of zero")
        return ParamScalar(self.den, self.num)

    def __truediv__(self, other):
        other = _as_scalar(other)
        if other is None:
            return NotImplemented
        if not other.num.terms:
            raise DivisionByZero("division by zero scalar")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_scalar(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = ParamScalar(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        other = _as_scalar(other)
        if other is None:
            return NotImplemented
        return self.num.terms == other.num.terms and self.den.terms == other.den.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.terms.items()), frozenset(self.den.terms.items())))
        return self._hash

    # -- evaluation / io ----------------------------------------------
    def evaluate(self, v0, u0=1):
        d = self.den.evaluate([], v0, u0)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at v={v0}, u={u0}")
        return self.num.evaluate([], v0, u0) / d

    def to_text(self):
        return f"({poly_to_text(self.num)})/({poly_to_text(self.den)})"

    def __str__(self):
        if self.is_polynomial():
            return poly_to_text(self.num)
        return self.to_text()

    def __repr__(self):
        return f"ParamScalar({self})"


def _coerce_rational(x):
    if isinstance(x, (int, type(mpq(0)))):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational scalar")


def _as_scalar(x):
    if isinstance(x, ParamScalar):
        return x
    try:
        return ParamScalar(_coerce_rational(x))
    except TypeError:
        return None


def _reduce(num, den):
    if not den.terms:
        raise DivisionByZero("zero denominator")
    if not num.terms:
        return num, _one0()
    # strip monomial factor from den
    md = den.min_exponents()
    if md != [0, 0]:
        den = den.shift([], -md[0], -md[1])
        num = num.shift([], -md[0], -md[1])
    c, den = _integer_primitive(den)
    if c != 1:
        num = num.scale(1 / c)
    if len(den.terms) == 1:
        # den is now the constant 1
        return num, _one0()
    mn = num.min_exponents()
    numpoly = num.shift([], -mn[0], -mn[1])
    cn, nprim = _integer_primitive(numpoly)
    g = poly_gcd(nprim, den)
    if len(g.terms) > 1:
        num = num.divide_exact(g)
        den = den.divide_exact(g)
        # the gcd need not be primitive over Z; renormalize den
        c, den = _integer_primitive(den)
        if c != 1:
            num = num.scale(1 / c)
    return num, den


def power_v(a, b=0):
    """The monomial v^a u^b, i.e. v^(a + b*theta)."""
    return ParamScalar.v_power(a, b)


def quantum_number(a, b=0):
    """[a + b*theta]_v = (v^a u^b - v^-a u^-b) / (v - v^-1)."""
    num = Poly.monomial(0, [], 1, a, b) - Poly.monomial(0, [], 1, -a, -b)
    den = Poly.monomial(0, [], 1, 1, 0) - Poly.monomial(0, [], 1, -1, 0)
    return ParamScalar(num, den)


def eval_numeric(a, v0, u0=1):
    """Exact rational value of a ParamScalar at (v, u) = (v0, u0)."""
    return a.evaluate(v0, u0)


# ---------------------------------------------------------------------------
# text serialization

def _coeff_text(c):
    c = mpq(c)
    if c.denominator == 1:
        return str(int(c.numerator))
    return f"({int(c.numerator)}/{int(c.denominator)})"


def poly_to_text(p):
    """Arity-0 poly as 'c*v^a*u^b + ...' in descending lex order."""
    if not p.terms:
        return "0"
    parts = []
    for k in sorted(p.terms, reverse=True):
        a, b = unpack(0, k)
        parts.append(f"{_coeff_text(p.terms[k])}*v^{a}*u^{b}")
    return " + ".join(parts)


_TERM = re.compile(r"^\s*(\(?-?\d+(?:/\d+)?\)?)\s*\*\s*v\^(-?\d+)\s*\*\s*u\^(-?\d+)\s*$")


def poly_from_text(s):
    s = s.strip()
    if s == "0":
        return Poly(0)
    items = []
    for part in s.split(" + "):
        m = _TERM.match(part)
        if not m:
            raise ValueError(f"bad term {part!r}")
        c = m.group(1).strip("()")
        items.append(([int(m.group(2)), int(m.group(3))], mpq(c)))
    return Poly.from_items(0, items)


def parse_scalar(s):
    """Inverse of ParamScalar.to_text (also accepts a bare poly)."""
    s = s.strip()
    m = re.match(r"^\((.*)\)/\((.*)\)$", s)
    if m:
        return ParamScalar(poly_from_text(m.group(1)), poly_from_text(m.group(2)))
    return ParamScalar(poly_from_text(s))


# ---------------------------------------------------------------------------
# cyclotomic fields

def _ipoly_divmod_monic(a, b):
    # integer/rational list polys, b monic
    a = list(a)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 1)
    while len(a) - 1 >= db and any(a):
        d = len(a) - 1 - db
        c = a[-1]
        q[d] = c
        for i, y in enumerate(b):
            a[i + d] -= c * y
        a.pop()
    return q, a


@lru_cache(maxsize=None)
def cyclotomic_poly(N):
    """Integer coefficients of Phi_N, low degree first."""
    if N < 1:
        raise ValueError("order must be positive")
    p = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            p, r = _ipoly_divmod_monic(p, list(cyclotomic_poly(d)))
            assert not any(r)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _reduce_mod(coeffs, N):
    phi = cyclotomic_poly(N)
    deg = len(phi) - 1
    a = [mpq(c) for c in coeffs]
    while len(a) > deg:
        c = a.pop()
        if c:
            d = len(a) - deg
            for i in range(deg):
                a[d + i] -= c * phi[i]
    a += [mpq(0)] * (deg - len(a))
    return tuple(_norm(c) for c in a)


@lru_cache(maxsize=None)
def power_table(N):
    """table[e] = [(j, c_j)] with zeta^e = sum_j c_j zeta^j, 0 <= e < N."""
    out = []
    for e in range(N):
        r = _reduce_mod([0] * e + [1], N)
        out.append(tuple((j, c) for j, c in enumerate(r) if c))
    return tuple(out)


class CycloScalar:
    """Element of Q(zeta) with zeta a primitive root of unity of order N."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs):
        self.order = order
        self.coeffs = _reduce_mod(coeffs, order)

    @classmethod
    def zeta_power(cls, order, k):
        return cls(order, [0] * (k % order) + [1])

    @classmethod
    def const(cls, order, c):
        return cls(order, [c])

    @property
    def degree(self):
        return len(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def _coerce(self, other):
        if isinstance(other, CycloScalar):
            if other.order != self.order:
                raise ValueError("mixing cyclotomic fields of different orders")
            return other
        return CycloScalar(self.order, [_coerce_rational(other)])

    def __add__(self, other):
        o = self._coerce(other)
        return CycloScalar(self.order, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out = [mpq(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[i + j] += a * b
        return CycloScalar(self.order, out)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero in cyclotomic field")
        # extended Euclid in Q[z]: s*self + t*Phi = 1
        phi = [mpq(c) for c in cyclotomic_poly(self.order)]
        # invariant: s_i * self = r_i mod Phi; Phi irreducible so r ends constant
        r0, r1 = phi, _qtrim([mpq(c) for c in self.coeffs])
        s0, s1 = [], [mpq(1)]
        while len(r1) > 1:
            q, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qsub(s0, _qmul(q, s1))
        inv_c = 1 / r1[0]
        return CycloScalar(self.order, [c * inv_c for c in s1])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = CycloScalar(self.order, [1])
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, CycloScalar):
            return self.order == other.order and self.coeffs == other.coeffs
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = [f"{_coeff_text(c)}*z^{j}" for j, c in enumerate(self.coeffs) if c]
        return f"CycloScalar(order={self.order}: {' + '.join(terms) or '0'})"


def _qtrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _qmul(a, b):
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _qtrim(out)


def _qsub(a, b):
    n = max(len(a), len(b))
    return _qtrim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _qdivmod(a, b):
    a = list(a)
    db = len(b) - 1
    q = [mpq(0)] * max(len(a) - db, 1)
    lb = b[-1]
    while a and len(a) - 1 >= db:
        d = len(a) - 1 - db
        c = a[-1] / lb
        q[d] = c
        for i, y in enumerate(b):
            a[i + d] -= c * y
        _qtrim(a)
    return _qtrim(q), a


def cyclo_reduce(p, t):
    """Residue of the rational polynomial ``p`` (low degree first) modulo
    Phi_{2t}, as an element of Q(zeta_{2t})."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return CycloScalar(2 * t, p)
