"""Independent numeric oracles shared by the tests.

Kernel tables are typed in from the defining formulas, separately from the
library's own tables.
"""
import itertools
import math

from gmpy2 import mpq

from shufflealg.families import group_indices
from shufflealg.laurent import perm_sign


# Kernels typed in from the defining formulas, kept apart from the library's
# table.  Each entry maps (v, u) -> c, sign with omega(z) = sign (z - c)/(z - 1).
def _omega_table(v, u):
    a = {(0, 1): v ** -1, (0, 2): u ** -1, (1, 2): v * u}     # v^{-a_ij}
    t = {}
    for (i, j), c in a.items():
        t[i, j] = (c, 1)
        t[j, i] = (c, -1)
    return t


def _omega_prime_table(v, u):
    # d_i a_ij with d = (1, 1, theta); v^{-d_i a_ij}
    da = [[(2, 0), (-1, 0), (0, 0)], [(-1, 0), (0, 0), (0, -1)], [(0, 0), (0, -1), (0, 2)]]
    return {(i, j): (v ** -da[i][j][0] * u ** -da[i][j][1], 1)
            for i in range(3) for j in range(3) if da[i][j] != (0, 0)}


KERNELS = {
    "LAMBDA": lambda v, u: {(0, 1): (-1 / v, 1), (1, 0): (-1 / v, 1)},
    "OMEGA": _omega_table,
    "OMEGA_PRIME": _omega_prime_table,
    "S": lambda v, u: {(0, 0): (v, 1)},
}
SKEW = {"LAMBDA": (1, 1), "OMEGA": (1, 1, 1), "OMEGA_PRIME": (0, 1, 0), "S": (0,)}
POLES = {"LAMBDA": [(0, 1)], "OMEGA": [(0, 1), (0, 2), (1, 2)],
         "OMEGA_PRIME": [(0, 1), (1, 2)], "S": []}


def value(F, pt, v, u):
    d = mpq(1)
    idx = group_indices(F.grading)
    for i, j in POLES[F.family.name]:
        for r in idx[i]:
            for s in idx[j]:
                d *= pt[r] - pt[s]
    return F.num.evaluate(pt, v, u) / d


def brute_product(F, G, pt, v, u):
    """Normalized (skew-)symmetrized permutation sum, written from scratch."""
    name = F.family.name
    ker = KERNELS[name](v, u)
    k, l = F.grading, G.grading
    tot = [a + b for a, b in zip(k, l)]
    idx = group_indices(tot)
    total = mpq(0)
    for combo in itertools.product(*[itertools.permutations(range(n)) for n in tot]):
        xs = [[pt[idx[g][p[i]]] for i in range(tot[g])] for g, p in enumerate(combo)]
        sign = 1
        for g, p in enumerate(combo):
            if SKEW[name][g]:
                sign *= perm_sign(p)
        a = [x for g in range(len(tot)) for x in xs[g][:k[g]]]
        b = [x for g in range(len(tot)) for x in xs[g][k[g]:]]
        val = value(F, a, v, u) * value(G, b, v, u)
        for (i, j), (c, sg) in ker.items():
            for xr in xs[i][:k[i]]:
                for ys in xs[j][k[j]:]:
                    z = xr / ys
                    val *= sg * (z - c) / (z - 1)
        total += sign * val
    return total / math.prod(math.factorial(n) for n in tot)
