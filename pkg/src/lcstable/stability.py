"""Composition of function classes and stability under named clones.

``K`` is right stable under a clone ``C`` when ``f(g_1, ..., g_n)`` stays in
``K`` for ``f`` in ``K`` and ``g_i`` in ``C``; left stable when ``g(f_1, ...,
f_n)`` does for ``g`` in ``C`` and ``f_i`` in ``K``.  Checks run within an arity
cap: a ``Holds`` verdict means no counterexample up to that cap, a ``Fails``
verdict carries a concrete witness and is definitive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _tables as tb
from .clones import CloneId, clone_leq, generators, member
from .closure import (ALLCONST, EMPTY, INF, Block, ClassDescriptor, const,
                      descriptor_mask, descriptor_member, graded)
from .fnclass import FnClass
from .zhegalkin import BoolFn, all_maps, compose, format_poly, monster, parse_fn, star

U64 = tb.U64

CHUNK = 1 << 20
HOLD_BUDGET = 3 * 10**8
SEARCH_BUDGET = 4 * 10**7
SAMPLE_SIZE = 2 * 10**6


# class composition ---------------------------------------------------------------

def compose_classes(C: FnClass, K: FnClass, arity_cap: int, budget: int = 5 * 10**7) -> FnClass:
    """{f(g_1, ..., g_n) : f in C of arity n, g_i in K of arity m}, n, m <= cap."""
    cap = min(arity_cap, C.cap, K.cap)
    out = {}
    for m in range(1, cap + 1):
        inner = K.tables(m)
        results = []
        for n in range(1, cap + 1):
            outer = C.tables(n)
            if len(outer) == 0 or len(inner) == 0:
                continue
            total = len(outer) * len(inner) ** n
            if total > budget:
                raise ValueError(f"composition at arities ({n}, {m}) needs {total} evaluations")
            for g in outer:
                results.extend(_all_tuple_results(int(g), n, inner, m))
        out[m] = np.unique(np.concatenate(results)) if results else np.zeros(0, dtype=U64)
    return FnClass.from_tables(cap, out, "ad-hoc")


def _all_tuple_results(g_table, k, A, m):
    N = len(A)
    total = N ** k
    for start in range(0, total, CHUNK):
        flat = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        digits = np.unravel_index(flat, (N,) * k)
        yield np.unique(tb.compose(g_table, k, [A[d] for d in digits], m))


def clone_class(c: CloneId, cap: int) -> FnClass:
    from .clones import enumerate_tables
    return FnClass.from_tables(cap, {n: enumerate_tables(c, n) for n in range(1, cap + 1)}, f"clone:{c}")


# verdicts ------------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """outer(inner_1, ..., inner_n) = result, with result outside the class."""

    outer: BoolFn
    inner: Tuple[BoolFn, ...]
    result: BoolFn
    source: str = "search"

    def to_dict(self):
        return {
            "outer": format_poly(self.outer),
            "inner": [format_poly(g) for g in self.inner],
            "result": format_poly(self.result),
            "source": self.source,
        }

    def __str__(self):
        args = ", ".join(format_poly(g) for g in self.inner)
        return f"({format_poly(self.outer)})({args}) = {format_poly(self.result)}  [{self.source}]"


@dataclass
class Verdict:
    holds: bool
    cap: int
    side: str
    clone: str
    witness: Optional[Witness] = None
    note: str = ""
    sampled: int = 0

    def to_dict(self):
        d = {"verdict": "Holds" if self.holds else "Fails", "cap": self.cap, "side": self.side,
             "clone": self.clone}
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        if self.note:
            d["note"] = self.note
        if self.sampled:
            d["sampled_tuples"] = self.sampled
        return d


def _pad_table(g, m):
    idx = tuple(a & ((1 << g.arity) - 1) for a in range(1 << m))
    return tb.gather_int(g.table, idx)


def star_witness(f: BoolFn, g: BoolFn, source="search") -> Witness:
    """f * g written as a composition f(g', x_{m+1}, ..., x_{m+n-1})."""
    m = g.arity + f.arity - 1
    inner = (BoolFn(m, _pad_table(g, m)),) + tuple(BoolFn.projection(g.arity + i, m) for i in range(1, f.arity))
    return Witness(f, inner, star(f, g), source)


def minor_witness(f: BoolFn, images, m, source="search") -> Witness:
    inner = tuple(BoolFn.projection(s, m) for s in images)
    return Witness(f, inner, compose(f, inner), source)


# class handles ------------------------------------------------------------------------------

class _Target:
    """A class with per-arity membership masks up to a cap."""

    def __init__(self, cap, mask_of, member_fn, name):
        self.cap = cap
        self.name = name
        self._mask_of = mask_of
        self._member = member_fn
        self._masks = {}
        self._tables = {}

    def mask(self, n):
        if n not in self._masks:
            self._masks[n] = self._mask_of(n)
        return self._masks[n]

    def tables(self, n):
        if n not in self._tables:
            self._tables[n] = tb.all_tables(n)[self.mask(n)]
        return self._tables[n]

    def contains(self, f: BoolFn):
        if f.arity <= self.cap:
            return bool(self.mask(f.arity)[f.table])
        if self._member is None:
            raise ValueError(f"no membership rule beyond arity {self.cap}")
        return self._member(f)


def as_target(K, cap):
    if isinstance(K, ClassDescriptor):
        return _descriptor_target(K, cap)
    if isinstance(K, FnClass):
        return _Target(min(cap, K.cap), K.mask, None, K.provenance)
    raise TypeError("expected a ClassDescriptor or FnClass")


@lru_cache(maxsize=256)
def _descriptor_target(d, cap):
    return _Target(cap, lambda n: descriptor_mask(d, n), lambda f: descriptor_member(d, f), str(d))


@lru_cache(maxsize=None)
def orbit_minimal(n):
    """True at tables that are least in their orbit under permuting arguments."""
    T = tb.all_tables(n)
    best = T.copy()
    for perm in itertools.permutations(range(1, n + 1)):
        np.minimum(best, tb.gather(T, tb.minor_index(perm, n)), out=best)
    return best == T


def _permutation_invariant(K, n):
    T = K.tables(n)
    return all(K.mask(n)[tb.gather(T, tb.minor_index(p, n)).astype(np.int64)].all()
               for p in itertools.permutations(range(1, n + 1)))


# right stability ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _minor_failure(K, cap):
    """First (f, images, m) with a minor outside K, or None."""
    for n in range(1, cap + 1):
        T = K.tables(n)
        if len(T) == 0:
            continue
        for m in range(1, cap + 1):
            for s in all_maps(n, m):
                R = tb.gather(T, tb.minor_index(s.images, m))
                bad = ~K.mask(m)[R.astype(np.int64)]
                if bad.any():
                    return BoolFn(n, int(T[np.argmax(bad)])), s.images, m
    return None


def _right_search(K, basis, cap, include_minors=True):
    basis = sorted(basis, key=lambda g: (g.arity, g.table))
    if include_minors:
        mf = _minor_failure(K, cap)
    for n in range(1, cap + 1):
        T = K.tables(n)
        for m in range(1, cap + 1):
            if include_minors and mf is not None and mf[0].arity == n and mf[2] == m:
                return minor_witness(*mf)
            for g in basis:
                if n + g.arity - 1 != m or len(T) == 0:
                    continue
                R = tb.gather(T, tb.star_index(n, g.arity, g.table))
                bad = ~K.mask(m)[R.astype(np.int64)]
                if bad.any():
                    return star_witness(BoolFn(n, int(T[np.argmax(bad)])), g)
    return None


def right_stable(K, C: CloneId, arity_cap: int = 4, basis: Optional[Sequence[BoolFn]] = None) -> Verdict:
    """Minor-closedness of K and f * g in K for f in K and g in a basis of C."""
    target = as_target(K, arity_cap)
    basis = generators(C) if basis is None else tuple(basis)
    w = _right_search(target, basis, arity_cap)
    if w is None:
        return Verdict(True, arity_cap, "right", str(C))
    return Verdict(False, arity_cap, "right", str(C), w)


# left stability ---------------------------------------------------------------------------

def _scan(g: BoolFn, A, first, mask, m, budget):
    """Lexicographic scan of g(f_1, ..., f_k) with f_1 from first and the rest from A.

    Returns (tuple_of_tables or None, evaluations, complete).
    """
    k = g.arity
    N1, N = len(first), len(A)
    if N1 == 0 or (k > 1 and N == 0):
        return None, 0, True
    total = N1 * N ** (k - 1)
    limit = min(total, budget)
    shape = (N1,) + (N,) * (k - 1)
    for start in range(0, limit, CHUNK):
        flat = np.arange(start, min(limit, start + CHUNK), dtype=np.int64)
        digits = np.unravel_index(flat, shape)
        inner = [first[digits[0]]] + [A[d] for d in digits[1:]]
        R = tb.compose(g.table, k, inner, m)
        bad = ~mask[R.astype(np.int64)]
        if bad.any():
            p = int(np.argmax(bad))
            return tuple(int(x[p]) for x in inner), limit, True
    return None, limit, limit == total


def _affine_form(g: BoolFn):
    """(constant, support) if g is affine, else None."""
    mask = g.anf_mask
    if any(bin(s).count("1") > 1 for s in range(1 << g.arity) if (mask >> s) & 1):
        return None
    return mask & 1, [i for i in range(g.arity) if (mask >> (1 << i)) & 1]


def _wht(v):
    v = v.astype(np.int64).copy()
    h = 1
    while h < len(v):
        v = v.reshape(-1, 2, h)
        a, b = v[:, 0, :].copy(), v[:, 1, :].copy()
        v[:, 0, :], v[:, 1, :] = a + b, a - b
        v = v.reshape(-1)
        h *= 2
    return v


def _xor_sumset(ind_a, ind_b):
    """Indicator of {a ^ b}, exact via the Walsh-Hadamard transform."""
    conv = _wht(_wht(ind_a) * _wht(ind_b)) // len(ind_a)
    return conv > 0


def _affine_left(g, K, m):
    """Exact left check for affine g at arity m; returns inner tuple of a failure or None."""
    c, support = _affine_form(g)
    A = K.tables(m)
    if len(A) == 0:
        return None
    full = tb.full_mask(m)
    size = 1 << (1 << m)
    ind = np.zeros(size, dtype=np.int64)
    ind[A.astype(np.int64)] = 1
    if not support:
        reach = np.zeros(size, dtype=bool)
        reach[full if c else 0] = True
        levels = [reach]
    else:
        levels = [ind > 0]
        for _ in range(len(support) - 1):
            levels.append(_xor_sumset(levels[-1].astype(np.int64), ind))
    reach = levels[-1]
    idx = np.nonzero(reach)[0].astype(np.uint64)
    res = idx ^ U64(full if c else 0) if support else idx
    bad = ~K.mask(m)[res.astype(np.int64)]
    if not bad.any():
        return None
    target = int(idx[np.argmax(bad)])
    # peel off one summand at a time
    parts = []
    for lvl in range(len(support) - 1, 0, -1):
        prev = levels[lvl - 1]
        cand = (A ^ U64(target)).astype(np.int64)
        p = int(np.argmax(prev[cand]))
        parts.append(int(A[p]))
        target ^= int(A[p])
    if support:
        parts.append(target)
    fill = int(A[0])
    tup, it = [], iter(parts)
    for i in range(g.arity):
        tup.append(next(it) if i in support else fill)
    return tuple(tup)


def _left_search(K, basis, cap, *, exact_budget, use_orbits, seed=0, sample=0):
    """Returns (witness or None, exhaustive cap reached, sampled count)."""
    basis = sorted(basis, key=lambda g: (g.arity, g.table))
    exhaustive_cap = cap
    sampled = 0
    rng = np.random.default_rng(seed)
    for m in range(1, cap + 1):
        A = K.tables(m)
        mask = K.mask(m)
        for g in basis:
            first = A
            if use_orbits and g.arity > 1 and _permutation_invariant(K, m):
                first = A[orbit_minimal(m)[A.astype(np.int64)]]
            hit, _, complete = _scan(g, A, first, mask, m, exact_budget)
            if hit is None and not complete and _affine_form(g) is not None:
                hit, complete = _affine_left(g, K, m), True
            if hit is not None:
                inner = tuple(BoolFn(m, t) for t in hit)
                return Witness(g, inner, compose(g, inner)), cap, sampled
            if not complete:
                exhaustive_cap = min(exhaustive_cap, m - 1)
                if sample:
                    hit = _sample(g, A, mask, m, sample, rng)
                    sampled += sample
                    if hit is not None:
                        inner = tuple(BoolFn(m, t) for t in hit)
                        return Witness(g, inner, compose(g, inner), "sample"), cap, sampled
    return None, exhaustive_cap, sampled


def _sample(g, A, mask, m, count, rng):
    k = g.arity
    for start in range(0, count, CHUNK):
        size = min(CHUNK, count - start)
        inner = [A[rng.integers(0, len(A), size)] for _ in range(k)]
        R = tb.compose(g.table, k, inner, m)
        bad = ~mask[R.astype(np.int64)]
        if bad.any():
            p = int(np.argmax(bad))
            return tuple(int(x[p]) for x in inner)
    return None


def left_stable(K, C: CloneId, arity_cap: int = 4, basis: Optional[Sequence[BoolFn]] = None,
                budget: int = HOLD_BUDGET, sample: int = SAMPLE_SIZE, seed: int = 0) -> Verdict:
    """g(f_1, ..., f_k) in K for g in a basis of C and f_i in K of a common arity."""
    target = as_target(K, arity_cap)
    basis = generators(C) if basis is None else tuple(basis)
    w, ecap, sampled = _left_search(target, basis, arity_cap, exact_budget=budget, use_orbits=True,
                                    seed=seed, sample=sample)
    if w is not None:
        return Verdict(False, arity_cap, "left", str(C), w, sampled=sampled)
    note = ""
    if ecap < arity_cap:
        rng = f"{ecap + 1}" if ecap + 1 == arity_cap else f"{ecap + 1}..{arity_cap}"
        note = f"exhaustive up to arity {ecap}; arity {rng} sampled"
    return Verdict(True, ecap, "left", str(C), note=note, sampled=sampled)


def _search_fails(K, C, side, cap, bases=("finite", "bounded")):
    """Deterministic witness search: finite basis first, then all members of C up to arity 3."""
    from .clones import bounded_basis
    for mode in bases:
        basis = generators(C) if mode == "finite" else bounded_basis(C, min(3, cap))
        if side == "right":
            w = _right_search(K, basis, cap)
        else:
            w, _, _ = _left_search(K, basis, cap, exact_budget=SEARCH_BUDGET, use_orbits=False)
        if w is not None:
            return w
    return None


# the non-inclusion witness catalog ------------------------------------------------------

def _poly(text, arity=None):
    return parse_fn(text if arity is None else f"{text}@{arity}")


def _lin(vars_, a, m):
    """x_{v1} + ... + a as an m-ary function."""
    terms = [f"x{v}" for v in vars_] + (["1"] if a else [])
    return _poly(" + ".join(terms) if terms else "0", m)


def _prod(vars_, m, extra=(), a=0):
    terms = ["*".join(f"x{v}" for v in vars_)] + [f"x{v}" for v in extra] + (["1"] if a else [])
    return _poly(" + ".join(terms), m)


def _w(i, m, a=0, extra=()):
    """W_i on x1..x_{i+1}, plus the listed variables and the constant a, as an m-ary function."""
    f = monster(i, m)
    for v in extra:
        f = f + BoolFn.projection(v, m)
    return f + BoolFn.constant(a, m)


def _const_fn(a, m):
    return BoolFn.constant(a, m)


def _proj_tuple(m):
    return tuple(BoolFn.projection(i, m) for i in range(1, m + 1))


AND2 = parse_fn("x1*x2")
OR2 = parse_fn("x1 + x2 + x1*x2")
MU = parse_fn("x1*x2 + x1*x3 + x2*x3")
NEG = parse_fn("x1 + 1")


def _comp(outer, inner, label):
    return label, Witness(outer, tuple(inner), compose(outer, tuple(inner)), label)


def _star(f, g, label):
    return label, star_witness(f, g, label)


def lemma_families(i: int, j: int, a: int, b: int):
    """Explicit non-inclusion witnesses for K = D_i ∩ X_j ∩ C_aE_b, as (side, label, Witness).

    W_i occupies x1..x_{i+1}; further linear terms use fresh variables.
    """
    out = []
    # (i) constant outer functions applied to a simple member
    for phi in (_lin([1], 0, 1), _lin([1], 1, 1), _lin([1, 2], 0, 2), _lin([1, 2], 1, 2),
                _const_fn(0, 1), _const_fn(1, 1)):
        for c in (0, 1):
            out.append(("left",) + _comp(_const_fn(c, 1), [phi], f"i/const-{c}"))
    f0, f1 = _lin([1, 2], a, 2), _lin([1], a, 1)
    g0 = _w(i, i + 1, a)
    g1 = _w(i, i + 2, a, extra=(i + 2,))
    h0 = _prod(range(1, j + 1), j + 1, extra=(j + 1,), a=a)
    h1 = _prod(range(1, j + 1), j, a=a)
    same = a == b
    fa, ga, ha = (f0, g0, h0) if same else (f1, g1, h1)
    # (d) outer negation of a member
    out.append(("left",) + _comp(NEG, [fa], "ii/d"))
    # (e) conjunction and disjunction raise degree or characteristic rank
    for name, op in (("and", AND2), ("or", OR2)):
        if same:
            m = i + 3
            out.append(("left",) + _comp(op, [_w(i, m, a), _lin([i + 2, i + 3], a, m)], f"ii/e-{name}-deg"))
            m = j + 2
            out.append(("left",) + _comp(op, [_prod(range(1, j + 1), m, extra=(j + 1,), a=a),
                                              _lin([j + 1, j + 2], a, m)], f"ii/e-{name}-char"))
        else:
            m = i + 2
            out.append(("left",) + _comp(op, [_w(i, m, a, extra=(i + 2,)), _lin([i + 2], a, m)],
                                         f"ii/e-{name}-deg"))
            m = j + 1
            out.append(("left",) + _comp(op, [_prod(range(1, j + 1), m, a=a), _lin([j + 1], a, m)],
                                         f"ii/e-{name}-char"))
            out.append(("left",) + _comp(op, [_lin([1], a, 2), _lin([2], a, 2)], f"ii/e-{name}-x1"))
    # (f) the median
    if same:
        m = i + 3
        out.append(("left",) + _comp(MU, [_w(i, m, a), _lin([i + 2, i + 3], a, m), _const_fn(a, m)], "ii/f-deg"))
        m = j + 2
        out.append(("left",) + _comp(MU, [_prod(range(1, j + 1), m, extra=(j + 1,), a=a),
                                          _lin([j + 1, j + 2], a, m), _const_fn(a, m)], "ii/f-char"))
    else:
        m = i + 3
        out.append(("left",) + _comp(MU, [_w(i, m, a, extra=(i + 2,)), _lin([i + 2], a, m), _lin([i + 3], a, m)],
                                     "ii/f-deg"))
        m = j + 2
        out.append(("left",) + _comp(MU, [_prod(range(1, j + 1), m, a=a), _lin([j + 1], a, m),
                                          _lin([j + 2], a, m)], "ii/f-char"))
    # (g) constants and negation substituted into members
    if same:
        out.append(("right",) + _comp(f0, [_lin([1], 0, 1), _const_fn(0, 1)], "ii/g-0"))
        out.append(("right",) + _comp(f0, [_lin([1], 0, 1), _const_fn(1, 1)], "ii/g-1"))
        out.append(("right",) + _comp(f0, [_lin([1], 1, 2), _lin([2], 0, 2)], "ii/g-neg"))
    else:
        out.append(("right",) + _comp(f1, [_const_fn(0, 1)], "ii/g-0"))
        out.append(("right",) + _comp(f1, [_const_fn(1, 1)], "ii/g-1"))
        out.append(("right",) + _comp(f1, [_lin([1], 1, 1)], "ii/g-neg"))
    # (h) constants substituted into W_i shifts
    if i > j:
        for c in (0, 1):
            out.append(("right",) + _comp(g0, _proj_tuple(i) + (_const_fn(c, i),), f"ii/h-g0-{c}"))
            out.append(("right",) + _comp(g1, _proj_tuple(i) + (_const_fn(c, i),) * 2, f"ii/h-g1-{c}"))
    # (i), (j) star compositions with conjunction, disjunction and the median
    for f in (g0, g1):
        tag = "g0" if f is g0 else "g1"
        out.append(("right",) + _star(f, AND2, f"ii/i-{tag}-and"))
        out.append(("right",) + _star(f, OR2, f"ii/i-{tag}-or"))
        out.append(("right",) + _star(f, MU, f"ii/j-{tag}-mu"))
    for f in (h0, h1):
        tag = "h0" if f is h0 else "h1"
        out.append(("right",) + _star(f, AND2, f"ii/i-{tag}-and"))
        out.append(("right",) + _star(f, OR2, f"ii/i-{tag}-or"))
        out.append(("right",) + _star(f, MU, f"ii/j-{tag}-mu"))
    # (k) the median on X_1 ∩ C_a and X_1 ∩ E_a
    x1, x2 = _lin([1], 0, 2), _lin([2], 0, 2)
    y1, y2 = _lin([1], 1, 2), _lin([2], 1, 2)
    for c in (0, 1):
        out.append(("left",) + _comp(MU, [x1, x2, _const_fn(c, 2)], f"iii/k-{c}"))
        out.append(("left",) + _comp(MU, [y1, y2, _const_fn(c, 2)], f"iii/k-neg-{c}"))
    # (l), (m), (n) parity classes
    even, odd = _lin([1, 2], 0, 2), _lin([1], 0, 1)
    for c in (0, 1):
        out.append(("right",) + _comp(even, [_lin([1], 0, 1), _const_fn(c, 1)], f"iv/l-even-{c}"))
        out.append(("right",) + _comp(odd, [_const_fn(c, 1)], f"iv/l-odd-{c}"))
    out.append(("right",) + _comp(_poly("x1*x2 + x2"), [x1, y2], "iv/m-even"))
    out.append(("right",) + _comp(_poly("x1*x2"), [x1, y2], "iv/m-odd"))
    out.append(("left",) + _comp(AND2, [_lin([1], 0, 1), _lin([1], 1, 1)], "iv/n-and"))
    out.append(("left",) + _comp(OR2, [_lin([1], 0, 1), _lin([1], 1, 1)], "iv/n-or"))
    return out


def validate_witness(K: ClassDescriptor, C: CloneId, side: str, w: Witness) -> bool:
    """Check that w shows K·C ⊄ K (right) or C·K ⊄ K (left)."""
    if compose(w.outer, w.inner) != w.result or descriptor_member(K, w.result):
        return False
    if side == "right":
        return descriptor_member(K, w.outer) and all(member(C, g) for g in w.inner)
    return member(C, w.outer) and all(descriptor_member(K, g) for g in w.inner)


def _family_params(d: ClassDescriptor):
    params = set()
    if d.is_graded:
        i0 = d.deg_cap if d.deg_cap != INF else (d.char_cap + 1 if d.char_cap != INF else 2)
        j0 = d.char_cap if d.char_cap != INF else i0
        params.add((int(i0), int(min(j0, i0))))
    params |= {(1, 1), (2, 1), (2, 2)}
    return sorted(p for p in params if p[0] >= p[1] >= 1)


def confirmed_families(K: ClassDescriptor, C: CloneId, side: str):
    """Catalog witnesses that are genuine for this class, clone and side."""
    profiles = sorted(K.block.value) if K.is_graded else [(0, 0), (1, 1)]
    seen, out = set(), []
    for i, j in _family_params(K):
        for a, b in profiles:
            for s, label, w in lemma_families(i, j, a, b):
                if s != side or (label, w.result) in seen:
                    continue
                if validate_witness(K, C, side, w):
                    seen.add((label, w.result))
                    out.append(Witness(w.outer, w.inner, w.result, f"{label} (i={i}, j={j}, a={a}, b={b})"))
    return out


# the stability table -----------------------------------------------------------------

@dataclass(frozen=True)
class StabilityRow:
    pattern: str
    guard: str
    right_max: str
    left_max: str


TABLE3 = (
    StabilityRow("Omega", "", "Omega", "Omega"),
    StabilityRow("C_a", "", "T0", "T_a"),
    StabilityRow("E_a", "", "T1", "T_a"),
    StabilityRow("Even", "", "Tc", "Omega"),
    StabilityRow("Odd", "", "Tc", "S"),
    StabilityRow("C_aE_b", "", "Tc", "T_a∩T_b"),
    StabilityRow("X_k", "k>=2", "LS", "L"),
    StabilityRow("X_k", "k=1", "S", "L"),
    StabilityRow("X_k∩C_a", "k>=2", "Lc", "L_a"),
    StabilityRow("X_k∩C_a", "k=1", "Sc", "L_a"),
    StabilityRow("X_k∩E_a", "k>=2", "Lc", "L_a"),
    StabilityRow("X_k∩E_a", "k=1", "Sc", "L_a"),
    StabilityRow("X_k∩Even", "k>=2", "Lc", "L"),
    StabilityRow("X_k∩Even", "k=1", "S", "Omega"),
    StabilityRow("X_k∩Odd", "k>=2", "Lc", "LS"),
    StabilityRow("X_k∩Odd", "k=1", "S", "S"),
    StabilityRow("X_k∩C_aE_b", "k>=2", "Lc", "L_a∩L_b"),
    StabilityRow("X_k∩C_aE_b", "k=1,a=b", "Sc", "T_a"),
    StabilityRow("X_k∩C_aE_b", "k=1,a!=b", "Sc", "Sc"),
    StabilityRow("D_k", "", "L", "L"),
    StabilityRow("D_k∩C_a", "", "L0", "L_a"),
    StabilityRow("D_k∩E_a", "", "L1", "L_a"),
    StabilityRow("D_k∩Even", "k>=2", "Lc", "L"),
    StabilityRow("D_k∩Even", "k=1", "LS", "L"),
    StabilityRow("D_k∩Odd", "k>=2", "Lc", "LS"),
    StabilityRow("D_k∩Odd", "k=1", "LS", "LS"),
    StabilityRow("D_k∩C_aE_b", "", "Lc", "L_a∩L_b"),
    StabilityRow("D_i∩X_j", "", "LS", "L"),
    StabilityRow("D_i∩X_j∩C_a", "", "Lc", "L_a"),
    StabilityRow("D_i∩X_j∩E_a", "", "Lc", "L_a"),
    StabilityRow("D_i∩X_j∩Even", "j>=2", "Lc", "L"),
    StabilityRow("D_i∩X_j∩Even", "j=1", "LS", "L"),
    StabilityRow("D_i∩X_j∩Odd", "j>=2", "Lc", "LS"),
    StabilityRow("D_i∩X_j∩Odd", "j=1", "LS", "LS"),
    StabilityRow("D_i∩X_j∩C_aE_b", "", "Lc", "L_a∩L_b"),
    StabilityRow("D0", "", "Omega", "Omega"),
    StabilityRow("D0∩C_a", "", "Omega", "T_a"),
    StabilityRow("Empty", "", "Omega", "Omega"),
)


def _guard_ok(guard, p):
    for cond in filter(None, (c.strip() for c in guard.split(","))):
        if cond == "a=b":
            ok = p["a"] == p["b"]
        elif cond == "a!=b":
            ok = p["a"] != p["b"]
        else:
            var, op, val = cond[0], cond[1:-1], int(cond[-1])
            ok = p[var] >= val if op == ">=" else p[var] == val
        if not ok:
            return False
    return True


def _resolve_clone(template, p):
    a, b = p.get("a"), p.get("b")
    if template == "T_a∩T_b":
        return CloneId("Tc") if a != b else CloneId(f"T{a}")
    if template == "L_a∩L_b":
        return CloneId("Lc") if a != b else CloneId(f"L{a}")
    if template in ("T_a", "L_a"):
        return CloneId(f"{template[0]}{a}")
    return CloneId(template)


def _instantiate(pattern, p):
    if pattern == "Empty":
        return EMPTY
    if pattern == "D0":
        return ALLCONST
    if pattern == "D0∩C_a":
        return const(p["a"])
    deg, char, block = INF, INF, Block.ALL
    for part in pattern.split("∩"):
        if part == "Omega":
            continue
        if part == "D_k":
            deg = p["k"]
        elif part == "D_i":
            deg = p["i"]
        elif part == "X_k":
            char = p["k"]
        elif part == "X_j":
            char = p["j"]
        elif part == "C_a":
            block = Block[f"C{p['a']}"]
        elif part == "E_a":
            block = Block[f"E{p['a']}"]
        elif part == "Even":
            block = Block.EQ
        elif part == "Odd":
            block = Block.NEQ
        elif part == "C_aE_b":
            block = Block[f"B{p['a']}{p['b']}"]
        else:
            raise ValueError(f"unknown pattern component {part!r}")
    return graded(deg, char, block)


def _pattern_vars(pattern):
    vs = []
    for v, token in (("a", "_a"), ("b", "_b"), ("k", "_k"), ("i", "D_i"), ("j", "X_j")):
        if token in pattern:
            vs.append(v)
    return vs


@dataclass
class RowInstance:
    row: StabilityRow
    params: dict
    descriptor: ClassDescriptor
    right_max: CloneId
    left_max: CloneId

    @property
    def label(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        g = f" [{self.row.guard}]" if self.row.guard else ""
        return f"{self.row.pattern}{g}" + (f" ({ps})" if ps else "")


def instantiate_rows(max_param: int = 3, only=None, rows=TABLE3):
    """All rows of the table with a, b in {0,1}, 1 <= k <= max_param and max_param >= i > j >= 1."""
    out = []
    for row in rows:
        vs = _pattern_vars(row.pattern)
        ranges = []
        for v in vs:
            ranges.append({"a": (0, 1), "b": (0, 1), "k": range(1, max_param + 1),
                           "i": range(2, max_param + 1), "j": range(1, max_param)}[v])
        for values in itertools.product(*ranges):
            p = dict(zip(vs, values))
            if "i" in p and not p["i"] > p["j"]:
                continue
            if not _guard_ok(row.guard, p):
                continue
            if only and any(k in p and p[k] != v for k, v in only.items()):
                continue
            out.append(RowInstance(row, p, _instantiate(row.pattern, p),
                                   _resolve_clone(row.right_max, p), _resolve_clone(row.left_max, p)))
    return out


@dataclass
class Record:
    clone: str
    side: str
    expected: str
    verdict: Optional[Verdict]
    families: List[Witness] = field(default_factory=list)
    passed: bool = True

    def to_dict(self):
        d = {"clone": self.clone, "side": self.side, "expected": self.expected, "passed": self.passed}
        if self.verdict is not None:
            d.update(self.verdict.to_dict())
        else:
            d["verdict"] = "Holds"
            d["note"] = "implied by the maximal clone"
        if self.families:
            d["catalog_witnesses"] = [w.source for w in self.families]
        return d


@dataclass
class RowReport:
    instance: RowInstance
    records: List[Record]

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    def to_dict(self):
        inst = self.instance
        return {"row": inst.label, "class": str(inst.descriptor), "right_max": str(inst.right_max),
                "left_max": str(inst.left_max), "passed": self.passed,
                "records": [r.to_dict() for r in self.records]}


def check_instance(inst: RowInstance, cap: int = 4, with_families: bool = True) -> RowReport:
    K = inst.descriptor
    target = as_target(K, cap)
    records = []
    for side, cmax in (("right", inst.right_max), ("left", inst.left_max)):
        for C in CloneId:
            if clone_leq(C, cmax):
                if C == cmax:
                    v = right_stable(K, C, cap) if side == "right" else left_stable(K, C, cap)
                    records.append(Record(str(C), side, "Holds", v, passed=v.holds))
                else:
                    records.append(Record(str(C), side, "Holds", None))
                continue
            # the cheap search runs first; the bounded one only when the catalog has nothing
            w = _search_fails(target, C, side, cap, ("finite",))
            fams = confirmed_families(K, C, side) if with_families else []
            if w is None and not fams:
                w = _search_fails(target, C, side, cap, ("bounded",))
            if w is None and fams:
                w = Witness(fams[0].outer, fams[0].inner, fams[0].result, "catalog: " + fams[0].source)
                note = f"no witness up to arity {cap}; catalog witness of arity {_witness_arity(w)}"
            else:
                note = ""
            v = Verdict(w is None, cap, side, str(C), w, note=note)
            records.append(Record(str(C), side, "Fails", v, fams, passed=not v.holds))
    return RowReport(inst, records)


def _witness_arity(w):
    return max([w.outer.arity, w.result.arity] + [g.arity for g in w.inner])


def verify_table3(max_param: int = 3, arity_cap: int = 4, only=None, rows=TABLE3, with_families=True):
    return [check_instance(inst, arity_cap, with_families) for inst in instantiate_rows(max_param, only, rows)]


def inject_fault(rows=TABLE3):
    """A copy of the table with the right maximum of the X_1 row lowered to LS."""
    out = []
    for r in rows:
        if r.pattern == "X_k" and r.guard == "k=1":
            r = StabilityRow(r.pattern, r.guard, "LS", r.left_max)
        out.append(r)
    return tuple(out)
