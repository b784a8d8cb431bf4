"""Sparse multivariate Laurent polynomials over Q(v, u) or Q(zeta_N)."""
from __future__ import annotations

import itertools
import json
import math
from functools import lru_cache

from gmpy2 import mpq

from ._poly import Poly, NotDivisible, unpack, pack
from .coeffield import (
    ParamScalar, CycloScalar, poly_gcd, power_table, parse_scalar, _integer_primitive,
    _coerce_rational,
)


class ArityMismatch(ValueError):
    pass


class NonInvertibleCoefficient(ValueError):
    pass


__all__ = [
    "LaurentPoly", "ArityMismatch", "NonInvertibleCoefficient", "NotDivisible",
    "perm_sign", "group_symmetrize",
]


def perm_sign(p):
    """Sign of a permutation given as a tuple of images."""
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _perms_with_sign(n):
    return tuple((p, perm_sign(p)) for p in itertools.permutations(range(n)))


def _one0():
    return Poly.const(0, 1)


class LaurentPoly:
    """Laurent polynomial in ``arity`` variables.

    Stored as ``poly / den`` where ``poly`` has coefficients in Q[v, u]
    (Laurent) and ``den`` is a primitive polynomial in (v, u).  In cyclotomic
    mode (``order`` set) v is a primitive ``order``-th root of unity, u is
    unused and ``den`` is always 1.
    """

    __slots__ = ("poly", "den", "order")

    def __init__(self, poly, den=None, order=None):
        if den is not None and len(den.terms) == 1 and den.constant_value() == 1:
            den = None
        if order is not None:
            poly = poly.reduce_cyclo(power_table(order))
            if den is not None:
                raise ValueError("cyclotomic polynomials carry no denominator")
        self.poly = poly
        self.den = den
        self.order = order

    @property
    def arity(self):
        return self.poly.n

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n, order=None):
        return cls(Poly(n), order=order)

    @classmethod
    def one(cls, n, order=None):
        return cls(Poly.const(n, 1), order=order)

    @classmethod
    def var(cls, n, i, power=1, order=None):
        return cls(Poly.var(n, i, power), order=order)

    @classmethod
    def monomial(cls, n, exps, coeff=1, order=None):
        return cls.const(n, coeff, order) * cls(Poly.monomial(n, exps), order=order)

    @classmethod
    def const(cls, n, c, order=None):
        if isinstance(c, ParamScalar):
            if order is not None:
                raise ValueError("generic scalar in cyclotomic mode")
            return cls(c.num.remap(n, []), c.den)
        if isinstance(c, CycloScalar):
            if order is None or c.order != order:
                raise ValueError("cyclotomic scalar order mismatch")
            items = [([0] * n + [j, 0], cj) for j, cj in enumerate(c.coeffs) if cj]
            return cls(Poly.from_items(n, items), order=order)
        return cls(Poly.const(n, _coerce_rational(c)), order=order)

    @classmethod
    def from_terms(cls, n, terms, order=None):
        """Build from a mapping exponent-tuple -> scalar."""
        out = cls.zero(n, order)
        for e, c in terms.items():
            out = out + cls.const(n, c, order) * cls(Poly.monomial(n, e), order=order)
        return out

    # -- predicates ---------------------------------------------------
    def is_zero(self):
        return not self.poly.terms

    def __bool__(self):
        return bool(self.poly.terms)

    def __len__(self):
        return len(self.poly.terms)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            if self.arity != other.arity:
                return False
            return (self - other).is_zero()
        try:
            return (self - LaurentPoly.const(self.arity, other, self.order)).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if self.arity != other.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")
        if self.order != other.order:
            raise ValueError("mixing scalar fields")


    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(self.arity, other, self.order)
        self._check(other)
        if self.den is None and other.den is None:
            return self._wrap_same(self.poly + other.poly)
        d1 = self.den or _one0()
        d2 = other.den or _one0()
        if d1.terms == d2.terms:
            return _normalized(self.poly + other.poly, d1)
        n = self.arity
        return _normalized(self.poly * d2.remap(n, []) + other.poly * d1.remap(n, []), d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(-self.poly, self.den, None) if self.order is None else _cyclo(-self.poly, self.order)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(self.arity, other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(self.arity, other, self.order)
        self._check(other)
        p = self.poly * other.poly
        if self.order is not None:
            return _cyclo(p.reduce_cyclo(power_table(self.order)), self.order)
        if self.den is None and other.den is None:
            return LaurentPoly(p)
        return _normalized(p, (self.den or _one0()) * (other.den or _one0()))

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, LaurentPoly):
            return self.divide_exact(c)
        if not isinstance(c, (ParamScalar, CycloScalar)):
            c = _coerce_rational(c)
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / mpq(c))
        return self * c.inverse()

    def __pow__(self, e):
        out = LaurentPoly.one(self.arity, self.order)
        for _ in range(e):
            out = out * self
        return out

    # -- coefficient access -------------------------------------------
    def terms(self):
        """Mapping x-exponent tuple -> scalar coefficient."""
        out = {}
        for xe, cpoly in self.poly.split_x().items():
            if self.order is not None:
                out[xe] = _cyclo_from_poly0(cpoly, self.order)
            else:
                out[xe] = ParamScalar(cpoly, self.den) if self.den is not None else ParamScalar(cpoly)
        return out

    def unit_scalar(self):
        """If self is a nonzero scalar of the form c*v^a*u^b (no x), return it."""
        if self.den is not None or len(self.poly.terms) != 1:
            return None
        (k, c), = self.poly.terms.items()
        e = unpack(self.arity, k)
        if any(e[: self.arity]):
            return None
        if self.order is not None:
            return CycloScalar.zeta_power(self.order, e[self.arity]) * c
        return ParamScalar.v_power(e[-2], e[-1], c)

    def scalar_value(self):
        """The scalar if self has no x-dependence, else None."""
        t = self.terms()
        if not t:
            return ParamScalar(0) if self.order is None else CycloScalar.const(self.order, 0)
        if len(t) == 1 and not any(next(iter(t))):
            return next(iter(t.values()))
        return None

    def x_degrees(self):
        return self.poly.x_degrees()

    # -- maps ---------------------------------------------------------
    def remap(self, n_new, positions):
        return self._wrap_same(self.poly.remap(n_new, positions))

    def _wrap_same(self, poly):
        if self.order is not None:
            return _cyclo(poly, self.order)
        if self.den is not None:
            return LaurentPoly(poly, self.den)
        return LaurentPoly(poly)

    def substitute(self, plan, n_new=None):
        """Substitute x_i -> c_i * w_{t_i} with ``plan[i] = (t_i, c_i)``.

        Coefficients must be invertible scalars.  Monomial coefficients
        (rational times v^a u^b) take a fast exponent-remapping path.
        """
        if len(plan) != self.arity:
            raise ArityMismatch("plan must map every variable")
        if n_new is None:
            n_new = max((t for t, _ in plan if t is not None), default=-1) + 1
        fast = []
        for t, c in plan:
            mono = _as_monomial(c, self.order)
            if mono is None:
                break
            fast.append((t,) + mono)
        if len(fast) == len(plan):
            poly = self.poly.substitute(n_new, fast)
            if self.order is not None:
                # v-shifts leave the reduced range
                return LaurentPoly(poly, order=self.order)
            return self._wrap_same(poly)
        return self._substitute_slow(plan, n_new)

    def _substitute_slow(self, plan, n_new):
        scal = []
        for t, c in plan:
            if isinstance(c, (ParamScalar, CycloScalar)):
                if c.is_zero():
                    raise NonInvertibleCoefficient("zero coefficient in substitution")
                scal.append(c)
            else:
                c = _coerce_rational(c)
                if c == 0:
                    raise NonInvertibleCoefficient("zero coefficient in substitution")
                scal.append(c)
        out = LaurentPoly.zero(n_new, self.order)
        for xe, coeff in self.terms().items():
            mono = [0] * n_new
            factor = coeff
            for i, e in enumerate(xe):
                if e:
                    t, _ = plan[i]
                    if t is not None:
                        mono[t] += e
                    factor = factor * (scal[i] ** e)
            out = out + LaurentPoly.monomial(n_new, mono, factor, self.order)
        return out

    def group_symmetrize(self, groups, modes):
        return group_symmetrize(self, groups, modes)

    # -- division -----------------------------------------------------
    def divide_exact(self, g):
        """h with self == g * h, or raise NotDivisible."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.order is not None:
            return _cyclo_divide(self, g)
        # pull out the (v, u)-content of g so the remaining divisor is
        # primitive over Q[v, u]; then divide in Q[x, v, u]
        content = _x_content(g.poly)
        n = self.arity
        gprim = g.poly.divide_exact(content.remap(n, []))
        q = self.poly.divide_exact(gprim)
        # self = (P/d1), g = (content * gprim)/d2 -> h = q * d2 / (d1 * content)
        num = q
        if g.den is not None:
            num = num * g.den.remap(n, [])
        den = content * (self.den or _one0())
        return _normalized(num, den)

    # -- evaluation ---------------------------------------------------
    def evaluate(self, point, v0=None, u0=1):
        """Exact value at the rational point.

        Generic mode: returns a rational, v0 (and u0) required.  Cyclotomic
        mode: v is zeta, result is a CycloScalar.
        """
        if len(point) != self.arity:
            raise ArityMismatch("point length must equal arity")
        n = self.arity
        if self.order is not None:
            acc = {}
            pt = [mpq(p) for p in point]
            for k, c in self.poly.terms.items():
                e = unpack(n, k)
                val = mpq(c)
                for i in range(n):
                    if e[i]:
                        val *= pt[i] ** e[i]
                acc[e[n]] = acc.get(e[n], 0) + val
            coeffs = [0] * (max(acc) + 1 if acc else 1)
            for j, c in acc.items():
                coeffs[j] += c
            return CycloScalar(self.order, coeffs)
        val = self.poly.evaluate(point, v0, u0)
        if self.den is not None:
            d = self.den.evaluate([], v0, u0)
            if d == 0:
                raise ZeroDivisionError("scalar denominator vanishes at point")
            val = val / d
        return val

    # -- io -----------------------------------------------------------
    def to_json(self, names=None):
        names = names or [f"x{i + 1}" for i in range(self.arity)]
        terms = []
        for xe, c in sorted(self.terms().items()):
            terms.append({"exp": list(xe), "coeff": _scalar_text(c)})
        out = {"vars": list(names), "terms": terms}
        if self.order is not None:
            out["field"] = {"cyclotomic": self.order}
        return out

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        n = len(data["vars"])
        order = (data.get("field") or {}).get("cyclotomic")
        terms = {}
        for t in data["terms"]:
            c = t["coeff"]
            if order is not None:
                c = CycloScalar(order, [mpq(x) for x in c])
            else:
                c = parse_scalar(c)
            terms[tuple(t["exp"])] = c
        return cls.from_terms(n, terms, order)

    def __repr__(self):
        field = f", zeta_{self.order}" if self.order else ""
        return f"LaurentPoly(arity={self.arity}, {len(self.poly.terms)} terms{field})"


def _cyclo(poly, order):
    obj = LaurentPoly.__new__(LaurentPoly)
    obj.poly = poly
    obj.den = None
    obj.order = order
    return obj


def _cyclo_from_poly0(cpoly, order):
    coeffs = {}
    for (a, b), c in cpoly.items():
        coeffs[a] = coeffs.get(a, 0) + c
    dense = [0] * (max(coeffs) + 1)
    for a, c in coeffs.items():
        dense[a] = c
    return CycloScalar(order, dense)


def _scalar_text(c):
    if isinstance(c, CycloScalar):
        return [str(x) for x in c.coeffs]
    return str(c)


def _as_monomial(c, order):
    """(rational, a, b) if c = rational * v^a * u^b, else None."""
    if isinstance(c, ParamScalar):
        if c.is_unit_monomial():
            (k, coeff), = c.num.terms.items()
            a, b = unpack(0, k)
            return (coeff, a, b)
        return None
    if isinstance(c, CycloScalar):
        nz = [(j, x) for j, x in enumerate(c.coeffs) if x]
        if len(nz) == 1:
            return (nz[0][1], nz[0][0], 0)
        return None
    c = _coerce_rational(c)
    if c == 0:
        raise NonInvertibleCoefficient("zero coefficient in substitution")
    return (c, 0, 0)


def _x_content(poly):
    """gcd over Q[v, u] of the x-coefficients (primitive, arity 0)."""
    coeffs = sorted(poly.split_x().values(), key=lambda p: len(p.terms))
    if not coeffs or len(coeffs[0].terms) == 1:
        return Poly.const(0, 1)
    g = None
    for cpoly in coeffs:
        mn = cpoly.min_exponents()
        cp = cpoly.shift([], -mn[0], -mn[1])
        _, prim = _integer_primitive(cp)
        g = prim if g is None else poly_gcd(g, prim)
        if len(g.terms) == 1:
            return Poly.const(0, 1)
    return g


def _normalized(poly, den):
    """LaurentPoly(poly/den) with den primitive and coprime to the content."""
    if not poly.terms:
        return LaurentPoly(poly)
    md = den.min_exponents()
    n = poly.n
    if md != [0, 0]:
        den = den.shift([], -md[0], -md[1])
        poly = poly.shift([0] * n, -md[0], -md[1])
    c, den = _integer_primitive(den)
    if c != 1:
        poly = poly.scale(1 / c)
    if len(den.terms) == 1:
        return LaurentPoly(poly)
    content = _x_content(poly)
    g = poly_gcd(content, den)
    if len(g.terms) > 1:
        poly = poly.divide_exact(g.remap(n, []))
        den = den.divide_exact(g)
    return LaurentPoly(poly, den)


def _cyclo_divide(f, g):
    # exact division over Q(zeta)[x^+-1]: multivariate division with the
    # x-lex order, leading coefficients inverted in the field
    n = f.arity
    order = f.order
    gt = g.terms()
    lead = max(gt)
    linv = gt[lead].inverse()
    gl = LaurentPoly.from_terms(n, gt, order)
    r = f
    q = LaurentPoly.zero(n, order)
    mn_g = [min(e[i] for e in gt) for i in range(n)]
    ft = f.terms()
    if not ft:
        return q
    mn_f = [min(e[i] for e in ft) for i in range(n)]
    while not r.is_zero():
        rt = r.terms()
        lr = max(rt)
        shift = [a - b for a, b in zip(lr, lead)]
        # quotient exponents cannot go below mn_f - mn_g if g | f
        if any(s < a - b for s, a, b in zip(shift, mn_f, mn_g)):
            raise NotDivisible("nonzero remainder")
        term = LaurentPoly.monomial(n, shift, rt[lr] * linv, order)
        q = q + term
        r = r - term * gl
    return q


def group_symmetrize(f, groups, modes):
    """(1 / prod n_i!) * sum over prod S_{n_i} of sign * f(sigma x).

    ``groups`` is a partition of range(arity) into index lists, ``modes`` a
    parallel list of 'sym' / 'asym'.
    """
    n = f.arity
    flat = sorted(i for g in groups for i in g)
    if flat != list(range(n)):
        raise ValueError("groups must partition the variables")
    per_group = [_perms_with_sign(len(g)) for g in groups]
    acc = Poly(n)
    total = 1
    for g in groups:
        total *= math.factorial(len(g))
    for combo in itertools.product(*per_group):
        positions = list(range(n))
        sign = 1
        for g, mode, (p, s) in zip(groups, modes, combo):
            for i, j in enumerate(p):
                positions[g[i]] = g[j]
            if mode == "asym":
                sign *= s
        term = f.poly.remap(n, positions)
        acc = acc + term if sign == 1 else acc - term
    acc = acc.scale(mpq(1, total))
    if f.order is not None:
        return _cyclo(acc, f.order)
    return LaurentPoly(acc, f.den) if f.den is not None else LaurentPoly(acc)


def antisymmetrize(poly):
    """sum_sigma sign(sigma) sigma(poly) over all variables of an arity-k Poly.

    Each exponent vector is sorted to its orbit representative first, so the
    n! expansion runs once per distinct representative.
    """
    k = poly.n
    acc = {}
    for key, c in poly.terms.items():
        e = unpack(k, key)
        x = e[:k]
        if len(set(x)) < k:
            continue
        order = sorted(range(k), key=lambda i: -x[i])
        mu = (tuple(x[i] for i in order), e[k], e[k + 1])
        acc[mu] = acc.get(mu, 0) + (c if perm_sign(order) == 1 else -c)
    terms = {}
    perms = _perms_with_sign(k)
    for (mu, a, b), c in acc.items():
        if not c:
            continue
        for p, s in perms:
            exps = [0] * k
            for i in range(k):
                exps[p[i]] = mu[i]
            key = pack(k, exps + [a, b])
            terms[key] = terms.get(key, 0) + (c if s == 1 else -c)
    return Poly(k, {kk: c for kk, c in terms.items() if c})
