"""Slow reference implementations written straight from the definitions.

Nothing here touches the packed-table transforms of the package.
"""

from itertools import combinations, product


def points(n):
    """Argument tuples in table order: x1 varies fastest."""
    return [tuple((b >> i) & 1 for i in range(n)) for b in range(1 << n)]


def value(f, x):
    return f(*x)


def subsets(n):
    for r in range(n + 1):
        for c in combinations(range(1, n + 1), r):
            yield frozenset(c)


def anf(f):
    """Coefficient of x_S is the XOR of f over the indicator vectors of subsets of S."""
    n = f.arity
    out = set()
    for S in subsets(n):
        acc = 0
        for r in range(len(S) + 1):
            for T in combinations(sorted(S), r):
                acc ^= f(*[1 if i + 1 in T else 0 for i in range(n)])
        if acc:
            out.add(S)
    return out


def eval_monomials(monos, x):
    return sum(all(x[i - 1] for i in S) for S in monos) & 1


def degree(f):
    return max((len(S) for S in anf(f)), default=0)


def char(S, monos):
    return sum(1 for A in monos if S < A) & 1


def charrank(f):
    monos = anf(f)
    n = f.arity
    bad = [len(S) for S in subsets(n) if char(S, monos)]
    return max(bad) + 1 if bad else 0


def is_monotone(f):
    pts = points(f.arity)
    return all(f(*a) <= f(*b) for a in pts for b in pts if all(p <= q for p, q in zip(a, b)))


def is_self_dual(f):
    return all(f(*[1 - v for v in a]) == 1 - f(*a) for a in points(f.arity))


def preserves(f, c):
    return f(*([c] * f.arity)) == c


def clone_member(name, f):
    n = f.arity
    monos = anf(f)
    lin = all(len(S) <= 1 for S in monos)
    t0, t1 = preserves(f, 0), preserves(f, 1)
    table = [f(*a) for a in points(n)]
    projs = [[a[i] for a in points(n)] for i in range(n)]
    proj = table in projs
    nproj = [1 - v for v in table] in projs
    nonconst = [S for S in monos if S]
    conj = len(monos) == 1 and len(nonconst) == 1
    dual_monos = anf(_dual(f))
    disj = len(dual_monos) == 1 and frozenset() not in dual_monos
    return {
        "Omega": True, "T0": t0, "T1": t1, "Tc": t0 and t1, "M": is_monotone(f),
        "S": is_self_dual(f), "Sc": is_self_dual(f) and t0, "SM": is_self_dual(f) and is_monotone(f),
        "L": lin, "L0": lin and t0, "L1": lin and t1, "LS": lin and is_self_dual(f), "Lc": lin and t0 and t1,
        "Lambda_c": conj, "V_c": disj, "Istar": proj or nproj,
        "I0": proj or table == [0] * len(table), "I1": proj or table == [1] * len(table), "Ic": proj,
    }[name]


class _Fn:
    def __init__(self, arity, fn):
        self.arity, self._fn = arity, fn

    def __call__(self, *x):
        return self._fn(*x)


def _dual(f):
    return _Fn(f.arity, lambda *x: 1 - f(*[1 - v for v in x]))


def minor_value(f, images, x):
    return f(*[x[s - 1] for s in images])


def all_points_of(n):
    return list(product((0, 1), repeat=n))
