"""Vectorized operations on packed truth tables.

A table of an n-ary function is an unsigned integer whose bit ``b`` holds
``f(b_1, ..., b_n)`` with ``b_1`` the least significant bit of ``b``.  Arrays
of tables use ``uint64`` so that arity 5 still fits in one word.
"""

from functools import lru_cache

import numpy as np

U64 = np.uint64
EXHAUSTIVE_MAX = 4


def full_mask(n):
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def var_masks(n):
    """Bit masks of the positions where argument j+1 is 0, for j < n."""
    width = 1 << n
    full = (1 << width) - 1
    masks = []
    for j in range(n):
        s = 1 << j
        masks.append((full // ((1 << (2 * s)) - 1)) * ((1 << s) - 1))
    return tuple(masks)


@lru_cache(maxsize=None)
def popcount_masks(n):
    """masks[d] has bit b set iff popcount(b) == d."""
    masks = [0] * (n + 1)
    for b in range(1 << n):
        masks[bin(b).count("1")] |= 1 << b
    return tuple(masks)


def mobius_int(t, n):
    # the transform is its own inverse over GF(2)
    for j, m in enumerate(var_masks(n)):
        t ^= (t & m) << (1 << j)
    return t


def superset_sum_int(t, n):
    """Bit S of the result is the parity of the set bits A of t with A ⊇ S."""
    for j, m in enumerate(var_masks(n)):
        t ^= (t >> (1 << j)) & m
    return t


def mobius(T, n):
    T = np.asarray(T, dtype=U64).copy()
    for j, m in enumerate(var_masks(n)):
        T ^= (T & U64(m)) << U64(1 << j)
    return T


def superset_sum(T, n):
    T = np.asarray(T, dtype=U64).copy()
    for j, m in enumerate(var_masks(n)):
        T ^= (T >> U64(1 << j)) & U64(m)
    return T


def top_popcount(A, n):
    """Largest popcount of a set bit position, -1 for zero entries."""
    A = np.asarray(A, dtype=U64)
    out = np.full(A.shape, -1, dtype=np.int64)
    for d, m in enumerate(popcount_masks(n)):
        out[(A & U64(m)) != 0] = d
    return out


def gather(T, idx):
    """Result bit a is bit idx[a] of each table in T."""
    T = np.asarray(T, dtype=U64)
    out = np.zeros(T.shape, dtype=U64)
    for a, src in enumerate(idx):
        out |= ((T >> U64(src)) & U64(1)) << U64(a)
    return out


def gather_int(t, idx):
    out = 0
    for a, src in enumerate(idx):
        out |= ((t >> src) & 1) << a
    return out


@lru_cache(maxsize=None)
def minor_index(images, m):
    """Source positions for the minor with argument i sent to images[i] (1-based)."""
    idx = []
    for a in range(1 << m):
        b = 0
        for i, s in enumerate(images):
            b |= ((a >> (s - 1)) & 1) << i
        idx.append(b)
    return tuple(idx)


@lru_cache(maxsize=None)
def star_index(n, m, g_table):
    """Source positions of f * g for an n-ary f and the m-ary g given by its table."""
    idx = []
    for a in range(1 << (n + m - 1)):
        head = (g_table >> (a & ((1 << m) - 1))) & 1
        idx.append(head | ((a >> m) << 1))
    return tuple(idx)


def compose(g_table, k, inner, m):
    """Tables of g(f_1, ..., f_k) where inner[i] are broadcastable arrays of m-ary tables."""
    full = U64(full_mask(m))
    out = None
    for v in range(1 << k):
        if not (g_table >> v) & 1:
            continue
        term = None
        for i in range(k):
            x = inner[i] if (v >> i) & 1 else (~np.asarray(inner[i], dtype=U64)) & full
            term = x if term is None else term & x
        out = term if out is None else out ^ term
    if out is None:
        shape = np.broadcast_shapes(*(np.shape(x) for x in inner)) if inner else ()
        return np.zeros(shape, dtype=U64)
    return np.asarray(out, dtype=U64) & full


def compose_int(g_table, k, inner, m):
    full = full_mask(m)
    out = 0
    for v in range(1 << k):
        if not (g_table >> v) & 1:
            continue
        term = full
        for i in range(k):
            term &= inner[i] if (v >> i) & 1 else ~inner[i] & full
        out ^= term
    return out


@lru_cache(maxsize=None)
def projection_table(i, m):
    """Table of x_i among m arguments."""
    return full_mask(m) & ~var_masks(m)[i - 1]


def reverse_int(t, n):
    """Table of x -> f(complement of x)."""
    width = 1 << n
    return int(format(t, f"0{width}b")[::-1], 2)


def reverse(T, n):
    top = (1 << n) - 1
    return gather(T, tuple(top ^ a for a in range(1 << n)))


class Invariants:
    """Degree, characteristic rank and endpoint values for an array of tables."""

    def __init__(self, T, n):
        T = np.asarray(T, dtype=U64)
        self.n = n
        self.tables = T
        self.anf = mobius(T, n)
        self.degree = np.maximum(top_popcount(self.anf, n), 0)
        char = superset_sum(self.anf, n) ^ self.anf
        self.charrank = top_popcount(char, n) + 1
        self.c0 = (T & U64(1)).astype(np.int64)
        self.c1 = ((T >> U64((1 << n) - 1)) & U64(1)).astype(np.int64)


@lru_cache(maxsize=None)
def all_tables(n):
    if n > EXHAUSTIVE_MAX:
        raise ValueError(f"exhaustive enumeration limited to arity {EXHAUSTIVE_MAX}")
    T = np.arange(1 << (1 << n), dtype=U64)
    T.setflags(write=False)
    return T


@lru_cache(maxsize=None)
def all_invariants(n):
    return Invariants(all_tables(n), n)
