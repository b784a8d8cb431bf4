"""Specialization maps phi_d, the Lambda step maps rho_k, expected images,
and wheel-condition checks at generic v."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .families import offsets, vpow, ShuffleElem
from ._poly import Poly
from .laurent import LaurentPoly, antisymmetrize
from .pbw import GradingMismatch, degree_grading, degree_vectors
from .presentations import SL21_ODD, D21_FERM, D21_ONEFERM, DATA


def datum_for(family):
    for d in DATA.values():
        if d.family is family:
            return d
    raise KeyError(family.name)


# ---------------------------------------------------------------------------
# slot coefficients: x -> sign * v^a * u^b * w

def _coeff_sl21(beta, i, j):
    return (1, 0, 0) if i == 0 else (-1, 1, 0)


def _coeff_d21f(beta, i, j):
    if i == 0:
        return (1, 0, 0)
    if i == 1:
        return (1, 1, 0)
    return (1, 0, 1) if beta in ("a13", "a123") else (1, 0, -1)


def _coeff_d212(beta, i, j):
    if i == 0:
        return (1, 0, 0)
    if i == 2:
        return (1, -1, -1)
    # the gamma root uses two slots of group 2
    return (1, -1, -2) if (beta == "g" and j == 1) else (1, -1, 0)


_COEFF = {"SL21_ODD": _coeff_sl21, "D21_FERM": _coeff_d21f, "D21_ONEFERM": _coeff_d212}


@dataclass(frozen=True)
class SpecPlan:
    datum_id: str
    d: tuple
    # slots[w] = (beta, s, ((group, slot, (sign, a, b)), ...))
    slots: tuple
    # subst[x] = (w index, (sign, a, b)) for x in the flattened variable order
    subst: tuple

    @property
    def arity(self):
        return len(self.slots)

    def w_index(self, beta, s):
        for idx, (b, ss, _) in enumerate(self.slots):
            if b == beta and ss == s:
                return idx
        raise KeyError((beta, s))

    def block(self, beta):
        """w indices of one root, copies ascending."""
        return [idx for idx, (b, _, _) in enumerate(self.slots) if b == beta]


def make_plan(datum, d):
    """Canonical split: within each group the variables go to roots in the
    fixed root order, copies ascending, slots of one copy consecutive."""
    d = tuple(d)
    if len(d) != len(datum.roots):
        raise GradingMismatch(f"degree vector {d} has wrong length for {datum.id}")
    grading = degree_grading(datum, d)
    offs = offsets(grading)
    used = [0] * datum.rank
    rule = _COEFF[datum.id]
    slots, subst = [], [None] * sum(grading)
    for root, n in zip(datum.roots, d):
        for s in range(n):
            w = len(slots)
            entries = []
            for i, c in enumerate(root.vec):
                for j in range(c):
                    pos = offs[i] + used[i]
                    used[i] += 1
                    co = rule(root.name, i, j)
                    entries.append((i, pos, co))
                    subst[pos] = (w, co)
            slots.append((root.name, s, tuple(entries)))
    return SpecPlan(datum.id, d, tuple(slots), tuple(subst))


def _scalar(co, order):
    sign, a, b = co
    return vpow(a, b, order) * sign


def phi_d(F, d, datum=None):
    """Numerator of F specialized along the canonical split of degree d."""
    datum = datum or datum_for(F.family)
    plan = make_plan(datum, d)
    if degree_grading(datum, plan.d) != tuple(F.grading):
        raise GradingMismatch(f"degree {plan.d} has grading {degree_grading(datum, plan.d)}, "
                              f"element has {tuple(F.grading)}")
    order = F.order
    sub = [(w, _scalar(co, order)) for w, co in plan.subst]
    return F.num.substitute(sub, plan.arity)


def lower_degrees(datum, d):
    """Degree vectors of the same grading strictly below d (lex order)."""
    d = tuple(d)
    return [e for e in degree_vectors(datum, degree_grading(datum, d)) if e < d]


# ---------------------------------------------------------------------------
# Lambda step map

def rho_step(g, d):
    """rho: V_d -> V_{d'} with d' = (d1-1, d2+1, d3-1); merges z_{1,d1} and
    z_{3,1} into z_{2,d2+1} and shifts the remaining z_3 down by one."""
    d1, d2, d3 = d
    if d1 < 1 or d3 < 1:
        raise ValueError(f"no step below {d}")
    if g.arity != d1 + d2 + d3:
        raise GradingMismatch(f"arity {g.arity} vs degree {d}")
    n1, n2 = d1 - 1, d2 + 1
    pos = []
    for i in range(d1 - 1):
        pos.append(i)
    pos.append(n1 + d2)                  # z_{1,d1}
    for j in range(d2):
        pos.append(n1 + j)
    pos.append(n1 + d2)                  # z_{3,1}
    for k in range(1, d3):
        pos.append(n1 + n2 + k - 1)
    return g.substitute([(t, 1) for t in pos], n1 + n2 + d3 - 1)


def rho_sign(d):
    """phi_{d'} = rho_sign(d) * rho_step(phi_d) under the canonical split: the
    two maps pair the merged x and y differently, a cycle of length d2+1."""
    return -1 if d[1] % 2 else 1


# ---------------------------------------------------------------------------
# expected images at the own degree
#
# factor specs: (a, b, mult) stands for (w_s - v^a u^b w_r)^mult

def _wlin(n, i, j, a, b, order):
    return LaurentPoly.var(n, i, order=order) - LaurentPoly.var(n, j, order=order) * vpow(a, b, order)


def _pair_block(n, I, J, facs, order):
    out = LaurentPoly.one(n, order)
    for s in I:
        for r in J:
            for a, b, m in facs:
                out = out * _wlin(n, s, r, a, b, order) ** m
    return out


def _self_block(n, I, facs, order):
    """facs entries (a, b, mult, 'ne' | 'lt'): product over s != r or s < r."""
    out = LaurentPoly.one(n, order)
    for a, b, m, kind in facs:
        for s in I:
            for r in I:
                if s == r or (kind == "lt" and s > r):
                    continue
                out = out * _wlin(n, s, r, a, b, order) ** m
    return out


def _embed(local, n, idx, order):
    """Place an arity-k Poly on the variables idx of arity n."""
    poly = local.remap(n, list(idx))
    return LaurentPoly(poly, order=order) if order is not None else LaurentPoly(poly)


@lru_cache(maxsize=None)
def _local_asym(exps):
    return antisymmetrize(Poly.monomial(len(exps), list(exps)))


@lru_cache(maxsize=None)
def _local_hl(exps, q):
    k = len(exps)
    m = LaurentPoly.monomial(k, list(exps))
    V = LaurentPoly.one(k)
    for s in range(k):
        for r in range(s + 1, k):
            m = m * _wlin(k, s, r, q[0], q[1], None)
            V = V * _wlin(k, s, r, 0, 0, None)
    return antisymmetrize(m.poly).divide_exact(V.poly)


def asym_monomial(n, idx, exps, order=None):
    """Antisymmetrization over the variables idx of prod w_idx[s]^exps[s]
    (unnormalized: sum over the symmetric group with signs)."""
    return _embed(_local_asym(tuple(exps)), n, idx, order)


def hall_littlewood(n, idx, exps, q, order=None):
    """Sym over idx of prod w^exps * prod_{s<r} (w_s - q w_r)/(w_s - w_r),
    unnormalized, with q = v^a u^b given as (a, b)."""
    return _embed(_local_hl(tuple(exps), tuple(q)), n, idx, order)


def hl_parameter(datum, beta):
    """q_beta = v^{-<beta, beta>} as an (a, b) pair."""
    vec = datum.root(beta).vec
    a, b = datum.pairing(vec, vec)
    return (-a, -b)


def pole_count(datum, beta):
    """Number of pole pairs among the variables of one copy of beta; the
    numerator of E_beta(k) has degree k plus this."""
    vec = datum.root(beta).vec
    fam = datum.family
    total = 0
    for i in range(datum.rank):
        for j in range(i + 1, datum.rank):
            if fam.is_pole(i, j):
                total += vec[i] * vec[j]
    return total


_KAPPA = {}


def root_constant(datum, beta, order=None):
    """kappa_beta: the scalar of phi(E_beta(0)) at its own one-copy degree."""
    key = (datum.id, beta, order)
    if key not in _KAPPA:
        from .pbw import HFunction, pbw_image
        h = HFunction.from_factors(datum, [(beta, 0)])
        img = phi_d(pbw_image(h, order), h.degree(), datum)
        terms = img.terms()
        (c,) = terms.values()
        _KAPPA[key] = c
    return _KAPPA[key]


def _sq_lt():
    return [(0, 0, 2, "lt")]


def _tables_sl21(literal):
    self_f = {"g": _sq_lt()}
    pair_f = {("a1", "g"): [(0, 0, 1)], ("a1", "a2"): [(0, 0, 1)], ("g", "a2"): [(0, 0, 1)]}
    return self_f, pair_f


def _omega_y(bi, bj, i, j):
    """y_{i,j}^{beta,beta'} as (a, b) or None for 1."""
    if i == j:
        return None
    if (i, j) == (0, 1):
        return (0, 0)
    if (i, j) == (1, 0):
        return (-2, 0)
    if j == 2:
        if bj in ("a13", "a123"):
            return (0, 0) if i == 0 else (0, 2)
        return (0, -2) if i == 0 else (0, 0)
    if i == 2 and bi in ("a13", "a123"):
        return (0, -2) if j == 0 else (2, 0)
    raise KeyError((bi, bj, i, j))


def _tables_d21f(literal):
    from .presentations import D21_FERM as D
    self_f = {
        "a12": _sq_lt(), "a13": _sq_lt(), "a23": _sq_lt(),
        "a123": [(0, 0, 1, "ne"), (-2, 0, 1, "ne"), (0, -2, 1, "ne")],
    }
    pair_f = {}
    names = [r.name for r in D.roots]
    for x, bi in enumerate(names):
        for bj in names[x + 1:]:
            facs = []
            vi, vj = D.root(bi).vec, D.root(bj).vec
            for i in range(3):
                for j in range(3):
                    if vi[i] and vj[j]:
                        y = _omega_y(bi, bj, i, j)
                        if y is not None:
                            facs.append((y[0], y[1], 1))
            pair_f[(bi, bj)] = facs
    return self_f, pair_f


def _tables_d212(literal):
    V2, VM2, U2, UM2, ONE = (2, 0, 1), (-2, 0, 1), (0, 2, 1), (0, -2, 1), (0, 0, 1)
    ne = lambda a, b: (a, b, 1, "ne")
    self_f = {
        "a12": [ne(2, 0)],
        "a23": [ne(0, 2)],
        "a123": [ne(-2, 0), ne(0, 2)],
        # the image carries (w_s - v^{2 theta} w_r) squared; the table prints it once
        "g": [ne(0, 0), ne(-2, 0), ne(0, 2)] + ([] if literal else [ne(0, 2)]),
    }
    g12_123 = [ONE, VM2, V2]
    g12_g = g12_123 + [UM2]
    g123_2 = [ONE, U2]
    g_2 = [ONE, U2]
    pair_f = {
        ("a1", "a2"): [ONE], ("a2", "a3"): [ONE], ("a1", "a23"): [ONE],
        ("a12", "a2"): [ONE], ("a12", "a3"): [ONE], ("a2", "a23"): [ONE],
        ("a1", "a12"): [VM2], ("a1", "a123"): [VM2],
        ("a123", "a3"): [UM2], ("a23", "a3"): [UM2],
        ("a1", "g"): [VM2, UM2],
        ("a12", "a123"): g12_123,
        ("a12", "g"): g12_g,
        ("a12", "a23"): [(0, 0, 2)],
        ("a123", "g"): g12_g + [UM2, U2],
        ("a123", "a2"): g123_2, ("g", "a2"): g_2,
        # the printed table repeats (w - v^{2 theta} w'); the image has v^{-2 theta}
        ("a123", "a23"): g123_2 + ([U2] if literal else [UM2]),
        ("g", "a23"): g_2 + [UM2, U2],
        ("g", "a3"): [UM2, U2],
        ("a1", "a3"): [],
    }
    return self_f, pair_f


_TABLES = {"SL21_ODD": _tables_sl21, "D21_FERM": _tables_d21f, "D21_ONEFERM": _tables_d212}


def expected_phi(h, order=None, literal=False):
    """Closed form of phi_{deg h}(phi(E_h)) up to a unit c * v^a * u^b.

    Product of the pairwise factors G_{beta,beta'}, the per-root factors
    G_beta, the per-root skew monomials (odd roots) or Hall-Littlewood
    polynomials (even roots), and the root constants kappa_beta^{d_beta}.
    ``literal`` uses the tables exactly as printed where they differ."""
    datum = h.datum
    d = h.degree()
    plan = make_plan(datum, d)
    n = plan.arity
    self_f, pair_f = _TABLES[datum.id](literal)
    out = LaurentPoly.one(n, order)
    names = [r.name for r in datum.roots]
    blocks = {b: plan.block(b) for b in names}
    for x, bi in enumerate(names):
        I = blocks[bi]
        if not I:
            continue
        for bj in names[x + 1:]:
            J = blocks[bj]
            if J:
                out = out * _pair_block(n, I, J, pair_f.get((bi, bj), []), order)
        out = out * _self_block(n, I, self_f.get(bi, []), order)
        shift = pole_count(datum, bi)
        exps = [k + shift for k in h.partition(bi)]
        if datum.root(bi).parity:
            out = out * asym_monomial(n, I, exps, order)
        else:
            out = out * hall_littlewood(n, I, exps, hl_parameter(datum, bi), order)
        out = out * (root_constant(datum, bi, order) ** len(I))
    return out


def unit_ratio(actual, expected):
    """c * v^a * u^b with actual = c v^a u^b * expected, else None."""
    from ._poly import NotDivisible
    if expected.is_zero():
        return None
    try:
        q = actual.divide_exact(expected)
    except NotDivisible:
        return None
    return q.unit_scalar()


# ---------------------------------------------------------------------------
# wheel conditions at generic v
#
# a locus is a chain of (group, (a, b)): the k-th participant is set to
# v^a u^b * t, every other variable stays free

WHEEL_LOCI = {
    "OMEGA": {
        "x1=v^-1x2=v^thx3": ((0, (0, 0)), (1, (1, 0)), (2, (0, -1))),
        "x1=vx2=v^-thx3": ((0, (0, 0)), (1, (-1, 0)), (2, (0, 1))),
    },
    "OMEGA_PRIME": {
        "x1=v^2x1'=vx2": ((0, (0, 0)), (0, (-2, 0)), (1, (-1, 0))),
        "x3=v^2thx3'=v^thx2": ((2, (0, 0)), (2, (0, -2)), (1, (0, -1))),
    },
}


def _locus_slots(grading, chain):
    """Representative variable positions for a chain: the first unused
    variables of each group (one orbit representative)."""
    offs = offsets(grading)
    used = [0] * len(grading)
    pos = []
    for g, _ in chain:
        if used[g] >= grading[g]:
            return None
        pos.append(offs[g] + used[g])
        used[g] += 1
    return pos


def locus_avoids_poles(family, chain):
    """Every pole factor among the chain variables restricts to a nonzero
    multiple of t (compared as formal monomials v^a u^b)."""
    for x, (gi, ci) in enumerate(chain):
        for gj, cj in chain[x + 1:]:
            if gi != gj and family.is_pole(gi, gj) and ci == cj:
                return False
    return True


def restrict_to_locus(F, chain):
    """Numerator of F on the chain locus, or None if the grading is too small.
    New variables: t first, then the untouched variables in order."""
    pos = _locus_slots(F.grading, chain)
    if pos is None:
        return None
    n = F.arity
    rest = [i for i in range(n) if i not in pos]
    plan = [None] * n
    for p, (_, (a, b)) in zip(pos, chain):
        plan[p] = (0, vpow(a, b, F.order))
    for j, i in enumerate(rest):
        plan[i] = (j + 1, 1)
    return F.num.substitute(plan, len(rest) + 1)


def wheel_check(F):
    """One CheckResult per locus of the family (vacuous PASS when the
    grading has too few variables)."""
    from .presentations import CheckResult
    loci = WHEEL_LOCI.get(F.family.name, {})
    out = []
    for name, chain in loci.items():
        inst = f"{F.family.name}{tuple(F.grading)}:{name}"
        if not locus_avoids_poles(F.family, chain):
            out.append(CheckResult("FAIL", "wheel", inst, "locus meets a pole"))
            continue
        g = restrict_to_locus(F, chain)
        if g is None:
            out.append(CheckResult("PASS", "wheel", inst, "vacuous"))
        elif g.is_zero():
            out.append(CheckResult("PASS", "wheel", inst))
        else:
            out.append(CheckResult("FAIL", "wheel", inst, f"restriction has {len(g)} terms"))
    return out


# ---------------------------------------------------------------------------
# suites

def small_gradings(datum, max_vars):
    """Nonzero gradings with at most max_vars variables, ascending."""
    out = []
    for g in itertools.product(range(max_vars + 1), repeat=datum.rank):
        if 0 < sum(g) <= max_vars:
            out.append(g)
    return sorted(out, key=lambda g: (sum(g), g))


def check_specialization(datum, max_vars=6, window=(0, 1), literal=False, order=None):
    """Per grading: phi below deg(h) vanishes, and phi at deg(h) matches the
    expected closed form up to a unit.  One CheckResult per grading and suite."""
    from .pbw import enumerate_h, pbw_image
    from .presentations import CheckResult
    out = []
    tag = ".literal" if literal else ""
    for g in small_gradings(datum, max_vars):
        hs = enumerate_h(datum, g, window)
        if not hs:
            continue
        nonvanish, mismatch = [], []
        for h in hs:
            F = pbw_image(h, order)
            if any(not phi_d(F, dl).is_zero() for dl in lower_degrees(datum, h.degree())):
                nonvanish.append(str(h))
            if unit_ratio(phi_d(F, h.degree()), expected_phi(h, order, literal)) is None:
                mismatch.append(str(h))
        inst = f"{datum.id}{g}"
        out.append(CheckResult("FAIL" if nonvanish else "PASS", "spec.vanish", inst,
                               f"{len(hs)} monomials" + (f", nonzero: {nonvanish[:3]}" if nonvanish else "")))
        out.append(CheckResult("FAIL" if mismatch else "PASS", "spec.expected" + tag, inst,
                               f"{len(hs)} monomials" + (f", {len(mismatch)} mismatched e.g. {mismatch[:2]}"
                                                         if mismatch else "")))
    return out


def random_lambda_elem(grading, rng, terms=3, spread=(-1, 2)):
    """Skew-symmetrized random Laurent numerator in Lambda_{n,m}."""
    from gmpy2 import mpq
    from .families import LAMBDA, make_elem, group_indices
    from .laurent import perm_sign
    n = sum(grading)
    idx = group_indices(grading)
    perms = [list(itertools.permutations(range(len(g)))) for g in idx]
    f = LaurentPoly.zero(n)
    for _ in range(terms):
        # distinct exponents inside each group, else the skew sum vanishes
        e = [0] * n
        for g in idx:
            for i, x in zip(g, rng.sample(range(spread[0], spread[1] + len(g)), len(g))):
                e[i] = x
        c = mpq(rng.randint(-5, 5) or 1, rng.randint(1, 4)) * vpow(rng.randint(-2, 2))
        for combo in itertools.product(*perms):
            pe, sign = [0] * n, 1
            for g, p in zip(idx, combo):
                for a, b in enumerate(p):
                    pe[g[b]] = e[g[a]]
                sign *= perm_sign(p)
            f = f + LaurentPoly.monomial(n, pe, c * sign)
    return make_elem(LAMBDA, grading, f)


def check_rho(samples=20, seed=0, max_vars=6, signed=True):
    """phi_{d_{k-1}} = rho_sign * rho_k(phi_{d_k}) on random Lambda elements
    (signed=False drops the sign)."""
    import random
    from .presentations import CheckResult
    rng = random.Random(seed)
    gradings = [g for g in small_gradings(SL21_ODD, max_vars) if min(g) >= 1]
    out = []
    for i in range(samples):
        g = gradings[rng.randrange(len(gradings))]
        F = random_lambda_elem(g, rng)
        while F.is_zero():
            F = random_lambda_elem(g, rng)
        for d in degree_vectors(SL21_ODD, g):
            if d[0] < 1 or d[2] < 1:
                continue
            lower = (d[0] - 1, d[1] + 1, d[2] - 1)
            lhs = phi_d(F, lower)
            rhs = rho_step(phi_d(F, d), d)
            if signed and rho_sign(d) < 0:
                rhs = -rhs
            ok = (lhs - rhs).is_zero()
            out.append(CheckResult("PASS" if ok else "FAIL", "spec.rho" + ("" if signed else ".unsigned"),
                                   f"sample{i}{g}:d={d}", "" if ok else "step identity fails"))
    return out
