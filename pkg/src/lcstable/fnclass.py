"""Finite arity slices of a function class."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from . import _tables as tb
from .zhegalkin import BoolFn

U64 = tb.U64


def _as_sorted(tables):
    arr = np.unique(np.asarray(list(tables) if not isinstance(tables, np.ndarray) else tables, dtype=U64))
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FnClass:
    """Members of arity 1..cap, each slice a sorted array of tables."""

    cap: int
    slices: Dict[int, np.ndarray] = field(repr=False)
    provenance: str = "ad-hoc"

    def __post_init__(self):
        if set(self.slices) != set(range(1, self.cap + 1)):
            raise ValueError("slices must cover arities 1..cap exactly")

    @classmethod
    def from_tables(cls, cap, tables_by_arity, provenance="ad-hoc"):
        return cls(cap, {n: _as_sorted(tables_by_arity.get(n, ())) for n in range(1, cap + 1)}, provenance)

    @classmethod
    def from_functions(cls, cap, fns, provenance="ad-hoc"):
        by = {}
        for f in fns:
            if f.arity > cap:
                raise ValueError(f"function of arity {f.arity} exceeds cap {cap}")
            by.setdefault(f.arity, []).append(f.table)
        return cls.from_tables(cap, by, provenance)

    @classmethod
    def from_masks(cls, cap, mask_of_arity, provenance):
        """Slices given by a boolean mask over all tables of each arity."""
        return cls(cap, {n: _as_sorted(tb.all_tables(n)[mask_of_arity(n)]) for n in range(1, cap + 1)}, provenance)

    def tables(self, n):
        return self.slices[n]

    def members(self, n):
        return [BoolFn(n, int(t)) for t in self.slices[n]]

    def __iter__(self):
        for n in range(1, self.cap + 1):
            yield from self.members(n)

    def __contains__(self, f):
        if f.arity > self.cap:
            raise ValueError(f"arity {f.arity} is beyond the class cap {self.cap}")
        s = self.slices[f.arity]
        i = np.searchsorted(s, U64(f.table))
        return bool(i < len(s) and s[i] == U64(f.table))

    def contains_tables(self, T, n):
        s = self.slices[n]
        T = np.asarray(T, dtype=U64)
        if len(s) == 0:
            return np.zeros(T.shape, dtype=bool)
        i = np.minimum(np.searchsorted(s, T), len(s) - 1)
        return s[i] == T

    def mask(self, n):
        m = np.zeros(1 << (1 << n), dtype=bool)
        m[self.slices[n].astype(np.int64)] = True
        return m

    def sizes(self):
        return {n: len(self.slices[n]) for n in range(1, self.cap + 1)}

    def restrict(self, cap):
        return FnClass(cap, {n: self.slices[n] for n in range(1, cap + 1)}, self.provenance)

    def same_members(self, other, cap=None):
        cap = min(self.cap, other.cap) if cap is None else cap
        return all(np.array_equal(self.slices[n], other.slices[n]) for n in range(1, cap + 1))

    def first_difference(self, other, cap=None):
        """(arity, table, in_self) for the first disagreement, or None."""
        cap = min(self.cap, other.cap) if cap is None else cap
        for n in range(1, cap + 1):
            a, b = self.slices[n], other.slices[n]
            only_a = np.setdiff1d(a, b)
            only_b = np.setdiff1d(b, a)
            if len(only_a) or len(only_b):
                cands = [(int(t), True) for t in only_a[:1]] + [(int(t), False) for t in only_b[:1]]
                t, side = min(cands)
                return n, t, side
        return None

    def union(self, other):
        cap = min(self.cap, other.cap)
        return FnClass(cap, {n: _as_sorted(np.union1d(self.slices[n], other.slices[n])) for n in range(1, cap + 1)})

    def is_subset(self, other, cap=None):
        cap = min(self.cap, other.cap) if cap is None else cap
        return all(np.isin(self.slices[n], other.slices[n]).all() for n in range(1, cap + 1))
