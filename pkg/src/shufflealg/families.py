"""Shuffle algebras: elements, products and the four kernel families.

An element of a family with grading (n_1, ..., n_g) is a numerator Laurent
polynomial in n_1 + ... + n_g variables, ordered group by group, divided by
the implicit pole product

    D = prod_{(i, j) pole, i < j} prod_{r, s} (x_{i,r} - x_{j,s}).

D is invariant under permutations inside each group, so the numerator
carries the group (skew-)symmetry of the element.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

from gmpy2 import mpq

from ._poly import Poly
from .coeffield import ParamScalar, PoleAtPoint, CycloScalar
from .laurent import LaurentPoly, ArityMismatch, perm_sign, _normalized


class SymmetryViolation(ValueError):
    pass


class FamilyMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# family descriptors

@dataclass(frozen=True)
class GroupSpec:
    name: str
    symmetry: str  # "sym" or "skew"

    def __post_init__(self):
        if self.symmetry not in ("sym", "skew"):
            raise ValueError(f"bad symmetry {self.symmetry!r}")


@dataclass(frozen=True)
class KernelEntry:
    """omega(z) = sign * (z - c) / (z - 1) with c = coeff * v^a * u^b, or 1."""
    sign: int = 1
    coeff: int = 1
    a: int = 0
    b: int = 0
    trivial: bool = False

    @property
    def c(self):
        return ParamScalar.v_power(self.a, self.b, self.coeff)

    def value(self, z, v0, u0=1):
        if self.trivial:
            return mpq(1)
        c = mpq(self.coeff) * mpq(v0) ** self.a * mpq(u0) ** self.b
        return self.sign * (z - c) / (z - 1)


TRIVIAL = KernelEntry(trivial=True)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    groups: tuple
    poles: frozenset
    kernel: tuple  # kernel[i][j] : KernelEntry

    def __post_init__(self):
        g = len(self.groups)
        for i in range(g):
            for j in range(g):
                if i != j and not self.kernel[i][j].trivial:
                    if frozenset((i, j)) not in self.poles:
                        raise ValueError(f"{self.name}: nontrivial kernel ({i},{j}) without a pole")

    @property
    def ngroups(self):
        return len(self.groups)

    def is_pole(self, i, j):
        return i != j and frozenset((i, j)) in self.poles

    def group_parity(self, i):
        return 1 if self.groups[i].symmetry == "skew" else 0

    def parity(self, grading):
        return sum(n * self.group_parity(i) for i, n in enumerate(grading)) % 2

    def __repr__(self):
        return f"FamilySpec({self.name})"


def _pairs(*ps):
    return frozenset(frozenset(p) for p in ps)


def _lambda_family():
    k = KernelEntry(1, -1, -1, 0)  # (z + v^-1) / (z - 1)
    return FamilySpec(
        "LAMBDA",
        (GroupSpec("x", "skew"), GroupSpec("y", "skew")),
        _pairs((0, 1)),
        ((TRIVIAL, k), (k, TRIVIAL)),
    )


def _omega_family():
    # exponents of v^{-a_ij} as (a, b) with a_12 = 1, a_13 = theta, a_23 = -1 - theta
    c = {(0, 1): (-1, 0), (0, 2): (0, -1), (1, 2): (1, 1)}
    rows = [[TRIVIAL] * 3 for _ in range(3)]
    for (i, j), (a, b) in c.items():
        rows[i][j] = KernelEntry(1, 1, a, b)
        rows[j][i] = KernelEntry(-1, 1, a, b)
    return FamilySpec(
        "OMEGA",
        tuple(GroupSpec(f"x{i + 1}", "skew") for i in range(3)),
        _pairs((0, 1), (0, 2), (1, 2)),
        tuple(tuple(r) for r in rows),
    )


# d_i * a_ij for the one-fermion Cartan matrix, as (a, b) = a + b*theta
OMEGA_PRIME_FORM = (
    ((2, 0), (-1, 0), (0, 0)),
    ((-1, 0), (0, 0), (0, -1)),
    ((0, 0), (0, -1), (0, 2)),
)


def _omega_prime_family():
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            a, b = OMEGA_PRIME_FORM[i][j]
            row.append(TRIVIAL if (a, b) == (0, 0) else KernelEntry(1, 1, -a, -b))
        rows.append(tuple(row))
    return FamilySpec(
        "OMEGA_PRIME",
        (GroupSpec("x1", "sym"), GroupSpec("x2", "skew"), GroupSpec("x3", "sym")),
        _pairs((0, 1), (1, 2)),
        tuple(rows),
    )


def _s_family():
    return FamilySpec("S", (GroupSpec("x", "sym"),), frozenset(), ((KernelEntry(1, 1, 1, 0),),))


LAMBDA = _lambda_family()
OMEGA = _omega_family()
OMEGA_PRIME = _omega_prime_family()
S = _s_family()
FAMILIES = {f.name: f for f in (LAMBDA, OMEGA, OMEGA_PRIME, S)}


# ---------------------------------------------------------------------------
# elements

def offsets(grading):
    out, acc = [], 0
    for n in grading:
        out.append(acc)
        acc += n
    return out


def group_indices(grading):
    offs = offsets(grading)
    return [list(range(o, o + n)) for o, n in zip(offs, grading)]


@dataclass(frozen=True, eq=False)
class ShuffleElem:
    family: FamilySpec
    grading: tuple
    num: LaurentPoly = field(repr=False)

    @property
    def arity(self):
        return sum(self.grading)

    @property
    def order(self):
        return self.num.order

    @property
    def parity(self):
        return self.family.parity(self.grading)

    def is_zero(self):
        return self.num.is_zero()

    def _same(self, other):
        if not isinstance(other, ShuffleElem) or other.family is not self.family:
            raise FamilyMismatch("elements of different families")
        if tuple(other.grading) != tuple(self.grading):
            raise ArityMismatch(f"grading {self.grading} vs {other.grading}")

    def __add__(self, other):
        if isinstance(other, ShuffleElem) and other.is_zero() and other.family is self.family:
            return self
        if self.is_zero() and isinstance(other, ShuffleElem) and other.family is self.family:
            return other
        self._same(other)
        return ShuffleElem(self.family, self.grading, self.num + other.num)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ShuffleElem(self.family, self.grading, -self.num)

    def scale(self, c):
        return ShuffleElem(self.family, self.grading, self.num * c)

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, ShuffleElem):
            return shuffle(self, other)
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, ShuffleElem):
            return NotImplemented
        if other.family is not self.family:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return tuple(self.grading) == tuple(other.grading) and self.num == other.num

    __hash__ = None

    def to_json(self):
        names = []
        for g, n in zip(self.family.groups, self.grading):
            names += [f"{g.name}_{r + 1}" for r in range(n)]
        return {"family": self.family.name, "grading": list(self.grading),
                "numerator": self.num.to_json(names)}

    @classmethod
    def from_json(cls, data):
        fam = FAMILIES[data["family"]]
        return make_elem(fam, data["grading"], LaurentPoly.from_json(data["numerator"]))


def make_elem(family, grading, numerator, check=True):
    grading = tuple(int(n) for n in grading)
    if len(grading) != family.ngroups or any(n < 0 for n in grading):
        raise ArityMismatch(f"grading {grading} does not fit {family.name}")
    if numerator.arity != sum(grading):
        raise ArityMismatch(f"numerator arity {numerator.arity} != {sum(grading)}")
    elem = ShuffleElem(family, grading, numerator)
    if check:
        bad = symmetry_defects(elem)
        if bad:
            raise SymmetryViolation(f"{family.name}: numerator not (skew-)symmetric in groups {bad}")
    return elem


def zero(family, grading, order=None):
    return ShuffleElem(family, tuple(grading), LaurentPoly.zero(sum(grading), order))


def unit(family, order=None):
    return ShuffleElem(family, (0,) * family.ngroups, LaurentPoly.one(0, order))


def monomial_elem(family, i, k, order=None):
    """Single variable of group i to the power k (degree-one element)."""
    grading = [0] * family.ngroups
    grading[i] = 1
    return ShuffleElem(family, tuple(grading), LaurentPoly.var(1, 0, k, order))


def symmetry_defects(elem):
    """Groups whose adjacent transpositions do not act by the declared sign."""
    bad = []
    n = elem.arity
    f = elem.num.poly
    for gi, idx in enumerate(group_indices(elem.grading)):
        sign = -1 if elem.family.groups[gi].symmetry == "skew" else 1
        for a, b in zip(idx, idx[1:]):
            pos = list(range(n))
            pos[a], pos[b] = b, a
            swapped = f.remap(n, pos)
            if (swapped - f if sign == 1 else swapped + f).terms:
                bad.append(gi)
                break
    return bad


# ---------------------------------------------------------------------------
# the product

def _lin(n, i, j, coeff=1, a=0, b=0, sign=1):
    """sign * (x_i - coeff v^a u^b x_j) as a Poly."""
    xi = [0] * n
    xi[i] = 1
    xj = [0] * n
    xj[j] = 1
    p = Poly.monomial(n, xi, sign) + Poly.monomial(n, xj, -sign * coeff, a, b)
    return p


def _vandermonde(n, idx):
    out = Poly.const(n, 1)
    for p, q in itertools.combinations(idx, 2):
        out = out * _lin(n, p, q)
    return out


@lru_cache(maxsize=None)
def _cosets(sizes):
    """For each group (k, l): list of (positions, sign) over k-subsets."""
    per_group = []
    for k, l in sizes:
        n = k + l
        reps = []
        for sub in itertools.combinations(range(n), k):
            rest = [i for i in range(n) if i not in sub]
            p = tuple(sub) + tuple(rest)
            reps.append((p, perm_sign(p)))
        per_group.append(reps)
    return tuple(per_group)


def _self_kernel(family, g):
    return not family.kernel[g][g].trivial


def shuffle(F, G):
    """F * G in the common family (exact)."""
    if F.family is not G.family:
        raise FamilyMismatch(f"{F.family.name} vs {G.family.name}")
    if F.order != G.order:
        raise FamilyMismatch("elements over different scalar fields")
    fam = F.family
    ng = fam.ngroups
    k, l = F.grading, G.grading
    tot = tuple(a + b for a, b in zip(k, l))
    N = sum(tot)
    order = F.order
    if F.is_zero() or G.is_zero():
        return zero(fam, tot, order)
    offs = offsets(tot)
    A = [[offs[g] + r for r in range(k[g])] for g in range(ng)]
    B = [[offs[g] + k[g] + s for s in range(l[g])] for g in range(ng)]
    posF = [i for g in range(ng) for i in A[g]]
    posG = [i for g in range(ng) for i in B[g]]

    T = F.num.poly.remap(N, posF) * G.num.poly.remap(N, posG)
    for gi in range(ng):
        for gj in range(ng):
            ker = fam.kernel[gi][gj]
            if gi == gj:
                if ker.trivial:
                    continue
                for r in A[gi]:
                    for s in B[gj]:
                        T = T * _lin(N, r, s, ker.coeff, ker.a, ker.b, ker.sign)
                continue
            if not fam.is_pole(gi, gj):
                continue
            for r in A[gi]:
                for s in B[gj]:
                    if ker.trivial:
                        # pole not consumed by a kernel: keep it in the numerator
                        if gi < gj:
                            T = T * _lin(N, r, s)
                        continue
                    sgn = ker.sign if gi < gj else -ker.sign
                    T = T * _lin(N, r, s, ker.coeff, ker.a, ker.b, sgn)
    selfk = [g for g in range(ng) if _self_kernel(fam, g) and tot[g] > 1]
    for g in selfk:
        T = T * _vandermonde(N, A[g]) * _vandermonde(N, B[g])

    # effective parity of each group after the Vandermonde trick
    skew = []
    for g in range(ng):
        s = fam.groups[g].symmetry == "skew"
        if g in selfk:
            s = not s
        skew.append(s)

    cos = _cosets(tuple(zip(k, l)))
    acc = {}
    get = acc.get
    for combo in itertools.product(*cos):
        positions = list(range(N))
        sign = 1
        for g, (p, sg) in enumerate(combo):
            # block variable i of group g moves to slot p[i]
            o = offs[g]
            for i, j in enumerate(p):
                positions[o + i] = o + j
            if skew[g]:
                sign *= sg
        term = T.remap(N, positions)
        if sign == 1:
            for key, c in term.terms.items():
                acc[key] = get(key, 0) + c
        else:
            for key, c in term.terms.items():
                acc[key] = get(key, 0) - c
    pref = mpq(1)
    for a, b in zip(k, l):
        pref *= mpq(math.factorial(a) * math.factorial(b), math.factorial(a + b))
    out = Poly(N, {key: c * pref for key, c in acc.items() if c})
    for g in selfk:
        # one linear factor at a time: far cheaper than the full product
        for p, q in itertools.combinations(range(offs[g], offs[g] + tot[g]), 2):
            out = out.divide_difference(p, q)
    if order is not None:
        return ShuffleElem(fam, tot, LaurentPoly(out, order=order))
    den = None
    if F.num.den is not None or G.num.den is not None:
        one = Poly.const(0, 1)
        den = (F.num.den or one) * (G.num.den or one)
        return ShuffleElem(fam, tot, _normalized(out, den))
    return ShuffleElem(fam, tot, LaurentPoly(out))


def shuffle_all(elems, family=None, order=None):
    """Left-to-right product of a sequence (unit if empty)."""
    elems = list(elems)
    if not elems:
        return unit(family, order)
    out = elems[0]
    for e in elems[1:]:
        out = shuffle(out, e)
    return out


# ---------------------------------------------------------------------------
# evaluation and the permutation-sum oracle

def pole_value(family, grading, point):
    idx = group_indices(grading)
    d = mpq(1)
    for i in range(family.ngroups):
        for j in range(i + 1, family.ngroups):
            if family.is_pole(i, j):
                for r in idx[i]:
                    for s in idx[j]:
                        d *= mpq(point[r]) - mpq(point[s])
    return d


def eval_elem(F, point, v0=None, u0=1):
    """Value of F at a rational point (rational, or CycloScalar at a root of unity)."""
    if len(point) != F.arity:
        raise ArityMismatch("point length must equal arity")
    d = pole_value(F.family, F.grading, point)
    if d == 0:
        raise PoleAtPoint("point lies on a pole hyperplane")
    val = F.num.evaluate(point, v0, u0)
    if isinstance(val, CycloScalar):
        return val * (1 / d)
    return val / d


def shuffle_oracle(F, G, point, v0, u0=1):
    """F * G at a point, by the full permutation sum (generic scalars only)."""
    fam = F.family
    ng = fam.ngroups
    k, l = F.grading, G.grading
    tot = tuple(a + b for a, b in zip(k, l))
    idx = group_indices(tot)
    point = [mpq(p) for p in point]
    total = mpq(0)
    perms = [list(itertools.permutations(range(n))) for n in tot]
    for combo in itertools.product(*perms):
        sign = 1
        # xs[g][i] = value of the i-th variable of group g after permuting
        xs = []
        for g, p in enumerate(combo):
            xs.append([point[idx[g][p[i]]] for i in range(tot[g])])
            if fam.groups[g].symmetry == "skew":
                sign *= perm_sign(p)
        fa = [x for g in range(ng) for x in xs[g][: k[g]]]
        gb = [x for g in range(ng) for x in xs[g][k[g]:]]
        val = eval_elem(F, fa, v0, u0) * eval_elem(G, gb, v0, u0)
        for gi in range(ng):
            for gj in range(ng):
                ker = fam.kernel[gi][gj]
                if ker.trivial:
                    continue
                for xr in xs[gi][: k[gi]]:
                    for ys in xs[gj][k[gj]:]:
                        val *= ker.value(xr / ys, v0, u0)
        total += sign * val
    denom = 1
    for n in tot:
        denom *= math.factorial(n)
    return total / denom


def vpow(a, b=0, order=None):
    """v^(a + b*theta) in the active scalar field."""
    if order is None:
        return ParamScalar.v_power(a, b)
    if b:
        raise ValueError("theta powers are not available at a root of unity")
    return CycloScalar.zeta_power(order, a)


def validate(F):
    """Symmetry status plus, for Omega / Omega', the wheel conditions."""
    from .presentations import CheckResult
    from .specialization import wheel_check
    bad = symmetry_defects(F)
    inst = f"{F.family.name}{tuple(F.grading)}"
    out = [CheckResult("FAIL" if bad else "PASS", "symmetry", inst,
                       f"groups {bad}" if bad else "")]
    out += wheel_check(F)
    return out
