"""The nineteen named clones: membership predicates, generator bases, enumeration.

Predicates are vectorized over arrays of packed tables of one arity; the
scalar ``member`` is a thin wrapper.
"""

from __future__ import annotations

import enum
from functools import lru_cache

import numpy as np

from . import _tables as tb
from .zhegalkin import BoolFn, parse_fn

U64 = tb.U64


class CloneId(enum.Enum):
    OMEGA = "Omega"
    T0 = "T0"
    T1 = "T1"
    TC = "Tc"
    M = "M"
    S = "S"
    SC = "Sc"
    SM = "SM"
    L = "L"
    L0 = "L0"
    L1 = "L1"
    LS = "LS"
    LC = "Lc"
    AND = "Lambda_c"
    OR = "V_c"
    ISTAR = "Istar"
    I0 = "I0"
    I1 = "I1"
    IC = "Ic"

    def __str__(self):
        return self.value

    @property
    def generators(self):
        return generators(self)

    def member(self, f):
        return member(self, f)


def parse_clone(name: str) -> CloneId:
    try:
        return CloneId(name)
    except ValueError:
        known = ", ".join(c.value for c in CloneId)
        raise ValueError(f"unknown clone {name!r}; expected one of {known}") from None


# vectorized building blocks -------------------------------------------------

def _c0(T, n):
    return (T & U64(1)) != 0


def _c1(T, n):
    return ((T >> U64((1 << n) - 1)) & U64(1)) != 0


def _monotone(T, n):
    ok = np.ones(T.shape, dtype=bool)
    for j, m in enumerate(tb.var_masks(n)):
        low = T & U64(m)
        high = (T >> U64(1 << j)) & U64(m)
        ok &= (low & ~high) == 0
    return ok


def _self_dual(T, n):
    return (T ^ tb.reverse(T, n)) == U64(tb.full_mask(n))


def _linear(T, n):
    return tb.top_popcount(tb.mobius(T, n), n) <= 1


def _projection(T, n):
    return np.isin(T, np.array([tb.projection_table(i, n) for i in range(1, n + 1)], dtype=U64))


def _conjunction(T, n):
    # a single nonempty monomial in the ANF
    A = tb.mobius(T, n)
    single = (A != 0) & ((A & (A - U64(1))) == 0)
    return single & ((A & U64(1)) == 0)


def _disjunction(T, n):
    # dual of a conjunction of variables
    full = U64(tb.full_mask(n))
    return _conjunction(tb.reverse(T, n) ^ full, n)


def _negated_projection(T, n):
    full = U64(tb.full_mask(n))
    return _projection(T ^ full, n)


def _const(T, n, value):
    return T == U64(tb.full_mask(n) if value else 0)


_PREDICATES = {
    CloneId.OMEGA: lambda T, n: np.ones(T.shape, dtype=bool),
    CloneId.T0: lambda T, n: ~_c0(T, n),
    CloneId.T1: lambda T, n: _c1(T, n),
    CloneId.TC: lambda T, n: ~_c0(T, n) & _c1(T, n),
    CloneId.M: _monotone,
    CloneId.S: _self_dual,
    CloneId.SC: lambda T, n: _self_dual(T, n) & ~_c0(T, n),
    CloneId.SM: lambda T, n: _self_dual(T, n) & _monotone(T, n),
    CloneId.L: _linear,
    CloneId.L0: lambda T, n: _linear(T, n) & ~_c0(T, n),
    CloneId.L1: lambda T, n: _linear(T, n) & _c1(T, n),
    CloneId.LS: lambda T, n: _linear(T, n) & _self_dual(T, n),
    CloneId.LC: lambda T, n: _linear(T, n) & ~_c0(T, n) & _c1(T, n),
    CloneId.AND: _conjunction,
    CloneId.OR: _disjunction,
    CloneId.ISTAR: lambda T, n: _projection(T, n) | _negated_projection(T, n),
    CloneId.I0: lambda T, n: _projection(T, n) | _const(T, n, 0),
    CloneId.I1: lambda T, n: _projection(T, n) | _const(T, n, 1),
    CloneId.IC: _projection,
}


def member_mask(c: CloneId, T, n) -> np.ndarray:
    """Membership of each table in T (arity n) in clone c."""
    return _PREDICATES[c](np.asarray(T, dtype=U64), n)


def member(c: CloneId, f: BoolFn) -> bool:
    if f.arity > 5:
        return _member_big(c, f)
    return bool(member_mask(c, np.array([f.table], dtype=U64), f.arity)[0])


def _member_big(c, f):
    # scalar route for arities beyond one machine word
    from . import zhegalkin as z

    n = f.arity
    full = tb.full_mask(n)
    sig = z.signature(f)
    linear = sig.degree <= 1
    sd = z.dual(f) == f
    t0, t1 = sig.c0 == 0, sig.c1 == 1
    proj = any(f.table == tb.projection_table(i, n) for i in range(1, n + 1))
    nproj = any(f.table == full ^ tb.projection_table(i, n) for i in range(1, n + 1))
    mono = all(((f.table & m) & ~((f.table >> (1 << j)) & m)) == 0 for j, m in enumerate(tb.var_masks(n)))
    a = f.anf_mask
    conj = a != 0 and a & (a - 1) == 0 and not a & 1
    da = z.dual(f).anf_mask
    disj = da != 0 and da & (da - 1) == 0 and not da & 1
    return {
        CloneId.OMEGA: True, CloneId.T0: t0, CloneId.T1: t1, CloneId.TC: t0 and t1,
        CloneId.M: mono, CloneId.S: sd, CloneId.SC: sd and t0, CloneId.SM: sd and mono,
        CloneId.L: linear, CloneId.L0: linear and t0, CloneId.L1: linear and t1,
        CloneId.LS: linear and sd, CloneId.LC: linear and t0 and t1,
        CloneId.AND: conj, CloneId.OR: disj, CloneId.ISTAR: proj or nproj,
        CloneId.I0: proj or f.table == 0, CloneId.I1: proj or f.table == full, CloneId.IC: proj,
    }[c]


@lru_cache(maxsize=None)
def enumerate_tables(c: CloneId, n: int) -> np.ndarray:
    """Sorted tables of all n-ary members of c."""
    if n > tb.EXHAUSTIVE_MAX:
        raise ValueError(f"enumeration cap is arity {tb.EXHAUSTIVE_MAX}")
    T = tb.all_tables(n)
    out = T[member_mask(c, T, n)]
    out.setflags(write=False)
    return out


def enumerate_clone(c: CloneId, n: int):
    return {BoolFn(n, int(t)) for t in enumerate_tables(c, n)}


# bases ----------------------------------------------------------------------

_BASIS_LITERALS = {
    CloneId.OMEGA: ["x1*x2 + 1"],
    CloneId.T0: ["x1*x2", "x1 + x2"],
    CloneId.T1: ["x1 + x2 + x1*x2", "x1 + x2 + 1"],
    CloneId.TC: ["x1 + x2 + x1*x2", "x1 + x1*x2 + x1*x3"],
    CloneId.M: ["x1*x2", "x1 + x2 + x1*x2", "0", "1"],
    CloneId.S: ["x1*x2 + x1*x3 + x2*x3", "x1 + 1"],
    CloneId.SC: ["x1*x2 + x1*x3 + x2*x3", "x1 + x2 + x3"],
    CloneId.SM: ["x1*x2 + x1*x3 + x2*x3"],
    CloneId.L: ["x1 + x2", "1"],
    CloneId.L0: ["x1 + x2"],
    CloneId.L1: ["x1 + x2 + 1"],
    CloneId.LS: ["x1 + x2 + x3", "x1 + 1"],
    CloneId.LC: ["x1 + x2 + x3"],
    CloneId.AND: ["x1*x2"],
    CloneId.OR: ["x1 + x2 + x1*x2"],
    CloneId.ISTAR: ["x1 + 1"],
    CloneId.I0: ["0"],
    CloneId.I1: ["1"],
    CloneId.IC: [],
}


@lru_cache(maxsize=None)
def generators(c: CloneId):
    """A finite generating set; x1 ∧ (x2 ↔ x3) is written as x1 + x1*x2 + x1*x3."""
    return tuple(parse_fn(s) for s in _BASIS_LITERALS[c])


def bounded_basis(c: CloneId, max_arity: int = 3):
    """All members of c of arity <= max_arity, a generator superset at that arity."""
    return tuple(BoolFn(n, int(t)) for n in range(1, max_arity + 1) for t in enumerate_tables(c, n))


def basis(c: CloneId, mode: str = "finite", max_arity: int = 3):
    if mode == "finite":
        return generators(c)
    if mode == "bounded":
        return bounded_basis(c, max_arity)
    raise ValueError(f"unknown basis mode {mode!r}")


def generate(basis_fns, arity_cap: int):
    """Arity slices 1..arity_cap of the clone generated by basis_fns.

    Compositions whose arities stay within the cap suffice: a term over m
    variables can be evaluated without leaving arity m.
    """
    if arity_cap > tb.EXHAUSTIVE_MAX:
        raise ValueError(f"generation cap is arity {tb.EXHAUSTIVE_MAX}")
    basis_fns = [g for g in basis_fns if g.arity <= arity_cap]
    out = {}
    for m in range(1, arity_cap + 1):
        current = {tb.projection_table(i, m) for i in range(1, m + 1)}
        frontier = set(current)
        while frontier:
            new = set()
            members = np.array(sorted(current), dtype=U64)
            fresh = np.array(sorted(frontier), dtype=U64)
            for g in basis_fns:
                k = g.arity
                for combo in _tuples_with_fresh(members, fresh, k):
                    res = tb.compose(g.table, k, combo, m)
                    new.update(int(x) for x in np.unique(res))
            frontier = new - current
            current |= frontier
        out[m] = {BoolFn(m, t) for t in current}
    return out


def _tuples_with_fresh(members, fresh, k):
    """Broadcast grids covering every k-tuple over members with some entry in fresh."""
    old = np.setdiff1d(members, fresh)
    for pos in range(k):
        grids = []
        for i in range(k):
            pool = old if i < pos else (fresh if i == pos else members)
            shape = [1] * k
            shape[i] = len(pool)
            grids.append(pool.reshape(shape))
        if all(g.size for g in grids):
            yield grids


# inclusion order --------------------------------------------------------------

_COVERS = [
    ("T0", "Omega"), ("T1", "Omega"), ("M", "Omega"), ("S", "Omega"), ("L", "Omega"),
    ("Tc", "T0"), ("Tc", "T1"),
    ("Sc", "S"), ("Sc", "Tc"), ("SM", "Sc"), ("SM", "M"),
    ("L0", "L"), ("L0", "T0"), ("L1", "L"), ("L1", "T1"), ("LS", "L"), ("LS", "S"),
    ("Lc", "LS"), ("Lc", "L0"), ("Lc", "L1"), ("Lc", "Sc"),
    ("Lambda_c", "M"), ("Lambda_c", "Tc"), ("V_c", "M"), ("V_c", "Tc"),
    ("I0", "L0"), ("I0", "M"), ("I1", "L1"), ("I1", "M"), ("Istar", "LS"),
    ("Ic", "Istar"), ("Ic", "I0"), ("Ic", "I1"), ("Ic", "Lc"), ("Ic", "SM"),
    ("Ic", "Lambda_c"), ("Ic", "V_c"),
]

COVERS = tuple((CloneId(a), CloneId(b)) for a, b in _COVERS)


@lru_cache(maxsize=None)
def _upsets():
    up = {c: {c} for c in CloneId}
    changed = True
    while changed:
        changed = False
        for a, b in COVERS:
            for c in CloneId:
                if a in up[c] and not up[b] <= up[c]:
                    up[c] |= up[b]
                    changed = True
    return {c: frozenset(s) for c, s in up.items()}


def clone_leq(c1: CloneId, c2: CloneId) -> bool:
    """Inclusion among the named clones (the restriction of Post's lattice)."""
    return c2 in _upsets()[c1]


def clone_leq_bounded(c1: CloneId, c2: CloneId, max_arity: int = 3) -> bool:
    """Inclusion decided by enumeration, valid up to arity max_arity only."""
    return all(
        np.isin(enumerate_tables(c1, n), enumerate_tables(c2, n)).all() for n in range(1, max_arity + 1)
    )
