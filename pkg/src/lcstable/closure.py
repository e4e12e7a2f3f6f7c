"""Classes stable under the clone of idempotent linear functions (Lc).

A class is Lc-stable exactly when it is closed under minors and under
``f + g + h`` for equal-arity members.  Every such class is named by a
``ClassDescriptor``: a degree cap, a characteristic-rank cap and a block
constraint on the endpoint profile ``(f(0..0), f(1..1))``, or one of four
special classes made of constants.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _tables as tb
from .fnclass import FnClass
from .zhegalkin import BoolFn, all_maps, signature

INF = math.inf
U64 = tb.U64

PROFILES = ((0, 0), (0, 1), (1, 0), (1, 1))


class Block(enum.Enum):
    """Constraints on the endpoint profile; the value is the set of allowed profiles."""

    B00 = frozenset({(0, 0)})
    B01 = frozenset({(0, 1)})
    B10 = frozenset({(1, 0)})
    B11 = frozenset({(1, 1)})
    C0 = frozenset({(0, 0), (0, 1)})
    C1 = frozenset({(1, 0), (1, 1)})
    E0 = frozenset({(0, 0), (1, 0)})
    E1 = frozenset({(0, 1), (1, 1)})
    EQ = frozenset({(0, 0), (1, 1)})
    NEQ = frozenset({(0, 1), (1, 0)})
    ALL = frozenset(PROFILES)

    @property
    def profiles(self):
        return self.value

    def __le__(self, other):
        return self.value <= other.value

    def __lt__(self, other):
        return self.value < other.value

    def complement(self) -> Block:
        return Block.of({(1 - a, 1 - b) for a, b in self.value})

    @classmethod
    def of(cls, profiles) -> Block:
        """Least block containing the given profiles."""
        p = frozenset(profiles)
        if not p:
            raise ValueError("no block is empty")
        if len(p) > 2:
            return cls.ALL
        return cls(p)

    @property
    def label(self):
        return _BLOCK_LABELS[self]

    def mask(self, c0, c1):
        ok = np.zeros(np.shape(c0), dtype=bool)
        for a, b in self.value:
            ok |= (c0 == a) & (c1 == b)
        return ok


_BLOCK_LABELS = {
    Block.B00: "C0E0", Block.B01: "C0E1", Block.B10: "C1E0", Block.B11: "C1E1",
    Block.C0: "C0", Block.C1: "C1", Block.E0: "E0", Block.E1: "E1",
    Block.EQ: "Even", Block.NEQ: "Odd", Block.ALL: "",
}

BLOCK_ORDER = tuple(Block)


def _cap_str(c):
    return "inf" if c == INF else str(c)


@dataclass(frozen=True)
class ClassDescriptor:
    """kind is one of 'empty', 'const0', 'const1', 'allconst', 'graded'."""

    kind: str
    deg_cap: float = 0
    char_cap: float = 0
    block: Block | None = None

    def __post_init__(self):
        if self.kind not in ("empty", "const0", "const1", "allconst", "graded"):
            raise ValueError(f"unknown descriptor kind {self.kind!r}")
        if self.kind == "graded":
            if self.block is None or not 1 <= self.char_cap <= self.deg_cap:
                raise ValueError("graded descriptors need 1 <= char_cap <= deg_cap and a block")

    def __str__(self):
        return format_descriptor(self)

    @property
    def is_graded(self):
        return self.kind == "graded"

    def to_dict(self):
        if not self.is_graded:
            return {"kind": self.kind, "name": str(self)}
        return {"kind": self.kind, "deg_cap": _cap_str(self.deg_cap), "char_cap": _cap_str(self.char_cap),
                "block": self.block.name, "name": str(self)}


EMPTY = ClassDescriptor("empty")
CONST0 = ClassDescriptor("const0")
CONST1 = ClassDescriptor("const1")
ALLCONST = ClassDescriptor("allconst")
SPECIALS = (EMPTY, CONST0, CONST1, ALLCONST)


def _check_cap(c, what):
    if c != INF and (not isinstance(c, (int, np.integer)) or isinstance(c, bool) or c < 1):
        raise ValueError(f"{what} must be a positive integer or inf, got {c!r}")


def graded(deg_cap, char_cap, block=Block.ALL) -> ClassDescriptor:
    """D_deg ∩ X_char ∩ block in normal form (char_cap never exceeds deg_cap)."""
    _check_cap(deg_cap, "deg_cap")
    _check_cap(char_cap, "char_cap")
    if isinstance(block, str):
        block = Block[block]
    deg_cap = deg_cap if deg_cap == INF else int(deg_cap)
    char_cap = min(char_cap, deg_cap)
    char_cap = char_cap if char_cap == INF else int(char_cap)
    return ClassDescriptor("graded", deg_cap, char_cap, block)


def const(a) -> ClassDescriptor:
    return CONST1 if a else CONST0


def _constant_profiles(d):
    return {EMPTY: set(), CONST0: {(0, 0)}, CONST1: {(1, 1)}, ALLCONST: {(0, 0), (1, 1)}}[d]


def descriptor_member(d: ClassDescriptor, f: BoolFn) -> bool:
    sig = signature(f)
    if d.kind == "empty":
        return False
    if not d.is_graded:
        return sig.degree == 0 and sig.profile in _constant_profiles(d)
    return sig.degree <= d.deg_cap and sig.charrank <= d.char_cap and sig.profile in d.block.value


def descriptor_mask(d: ClassDescriptor, n: int) -> np.ndarray:
    """Membership of every n-ary function, indexed by table."""
    inv = tb.all_invariants(n)
    return descriptor_mask_of(d, inv)


def descriptor_mask_of(d, inv):
    if d.kind == "empty":
        return np.zeros(inv.degree.shape, dtype=bool)
    if not d.is_graded:
        ok = np.zeros(inv.degree.shape, dtype=bool)
        for a, b in _constant_profiles(d):
            ok |= (inv.c0 == a) & (inv.c1 == b)
        return ok & (inv.degree == 0)
    return (inv.degree <= d.deg_cap) & (inv.charrank <= d.char_cap) & d.block.mask(inv.c0, inv.c1)


def descriptor_class(d: ClassDescriptor, cap: int) -> FnClass:
    return FnClass.from_masks(cap, lambda n: descriptor_mask(d, n), f"descriptor:{d}")


def classify(F: Iterable[BoolFn]) -> ClassDescriptor:
    """The least Lc-stable class containing F, read off from invariants."""
    sigs = [signature(f) for f in F]
    if not sigs:
        return EMPTY
    i = max(s.degree for s in sigs)
    j = max(s.charrank for s in sigs)
    profiles = {s.profile for s in sigs}
    if i == 0:
        return ALLCONST if len(profiles) == 2 else const(next(iter(profiles))[0])
    return graded(i, max(j, 1), Block.of(profiles))


def complement_descriptor(d: ClassDescriptor) -> ClassDescriptor:
    """Image of the class under f -> f + 1."""
    if d.is_graded:
        return ClassDescriptor("graded", d.deg_cap, d.char_cap, d.block.complement())
    return {EMPTY: EMPTY, CONST0: CONST1, CONST1: CONST0, ALLCONST: ALLCONST}[d]


def descriptor_leq(d1: ClassDescriptor, d2: ClassDescriptor) -> bool:
    """Inclusion of the denoted classes, decided symbolically."""
    if d1 == EMPTY:
        return True
    if not d1.is_graded:
        need = _constant_profiles(d1)
        if d2.is_graded:
            return need <= d2.block.value
        return need <= _constant_profiles(d2)
    if not d2.is_graded:
        return False
    return d1.deg_cap <= d2.deg_cap and d1.char_cap <= d2.char_cap and d1.block <= d2.block


def descriptor_meet(d1: ClassDescriptor, d2: ClassDescriptor) -> ClassDescriptor:
    if d1.is_graded and d2.is_graded:
        common = d1.block.value & d2.block.value
        if not common:
            return EMPTY
        return graded(min(d1.deg_cap, d2.deg_cap), min(d1.char_cap, d2.char_cap), Block(common))
    if d1.is_graded:
        d1, d2 = d2, d1
    p1 = _constant_profiles(d1)
    p2 = d2.block.value if d2.is_graded else _constant_profiles(d2)
    common = p1 & p2
    if not common:
        return EMPTY
    if len(common) == 2:
        return ALLCONST
    return const(next(iter(common))[0])


def enumerate_descriptors(deg_bound: int, char_bound: int):
    """The four specials, then each block with its cap pairs up to the bounds."""
    out = list(SPECIALS)
    if deg_bound < 1 or char_bound < 1:
        return out
    caps = [(i, j) for i in range(1, deg_bound + 1) for j in range(1, min(i, char_bound) + 1)]
    caps += [(INF, j) for j in range(1, char_bound + 1)] + [(INF, INF)]
    for block in BLOCK_ORDER:
        out.extend(graded(i, j, block) for i, j in caps)
    return out


def hasse_edges(descriptors):
    """Cover pairs (lower, upper) of descriptor_leq restricted to the given list."""
    ds = list(dict.fromkeys(descriptors))
    below = {(a, b) for a in ds for b in ds if a != b and descriptor_leq(a, b)}
    return [(a, b) for a, b in sorted(below, key=lambda p: (ds.index(p[0]), ds.index(p[1])))
            if not any((a, c) in below and (c, b) in below for c in ds)]


# names -------------------------------------------------------------------------

def format_descriptor(d: ClassDescriptor) -> str:
    if d == EMPTY:
        return "Empty"
    if d == ALLCONST:
        return "D0"
    if d in (CONST0, CONST1):
        return f"D0 ∩ C{0 if d == CONST0 else 1}"
    parts = []
    if d.deg_cap != INF:
        parts.append(f"D{d.deg_cap}")
    if d.char_cap != d.deg_cap:
        parts.append(f"X{d.char_cap}")
    if d.block.label:
        parts.append(d.block.label)
    return " ∩ ".join(parts) if parts else "Omega"


_BLOCK_ALIASES = {b.name: b for b in Block}
_BLOCK_ALIASES.update({b.label: b for b in Block if b.label})
_BLOCK_ALIASES.update({"Odd": Block.NEQ, "Even": Block.EQ})


def _parse_atom(tok, text):
    if tok in ("Omega", "All"):
        return graded(INF, INF)
    if tok == "Empty":
        return EMPTY
    if tok in _BLOCK_ALIASES:
        return graded(INF, INF, _BLOCK_ALIASES[tok])
    m = re.fullmatch(r"([DX])(?:k?:)?(\d+|inf)", tok)
    if not m:
        raise ValueError(f"cannot parse class component {tok!r} in {text!r}")
    cap = INF if m.group(2) == "inf" else int(m.group(2))
    if m.group(1) == "D":
        return ALLCONST if cap == 0 else graded(cap, cap)
    if cap == 0:
        # reflexive functions: charrank 0 forces equal endpoints
        return graded(INF, 1, Block.EQ)
    return graded(INF, cap)


def parse_descriptor(text: str) -> ClassDescriptor:
    """Parse names such as 'Omega', 'D0&C0', 'Dk:3', 'D:3&X:1&B01' or 'D3 ∩ X1 ∩ C0E0'."""
    tokens = [t.strip() for t in re.split(r"[&∩]", text)]
    if not tokens or any(not t for t in tokens):
        raise ValueError(f"malformed class name {text!r}")
    d = graded(INF, INF)
    for tok in tokens:
        d = descriptor_meet(d, _parse_atom(tok, text))
    return d


# brute-force oracle ----------------------------------------------------------------

class _AffineSlice:
    """Affine hull over GF(2) of the points seen at one arity."""

    def __init__(self):
        self.origin = None
        self.basis = {}  # leading bit -> reduced vector

    def reduce(self, v):
        while v:
            top = v.bit_length() - 1
            if top not in self.basis:
                return v
            v ^= self.basis[top]
        return 0

    def add(self, p):
        """Insert p; True if the hull grew."""
        if self.origin is None:
            self.origin = p
            return True
        r = self.reduce(p ^ self.origin)
        if not r:
            return False
        self.basis[r.bit_length() - 1] = r
        return True

    def points(self):
        if self.origin is None:
            return np.zeros(0, dtype=U64)
        pts = np.array([self.origin], dtype=U64)
        for b in self.basis.values():
            pts = np.concatenate([pts, pts ^ U64(b)])
        return np.sort(pts)


def closure_oracle(F: Iterable[BoolFn], arity_cap: int) -> FnClass:
    """Least family within arity_cap containing F, closed under minors and f+g+h.

    Closure under f+g+h makes each slice an affine subspace, and minors act
    linearly on tables, so it is enough to push the points that enlarge some
    slice's hull through every minor map.
    """
    F = list(F)
    if arity_cap > tb.EXHAUSTIVE_MAX + 1:
        raise ValueError(f"oracle cap is at most {tb.EXHAUSTIVE_MAX + 1}")
    for f in F:
        if f.arity > arity_cap:
            raise ValueError(f"generator of arity {f.arity} exceeds cap {arity_cap}")
    slices = {n: _AffineSlice() for n in range(1, arity_cap + 1)}
    work = []
    for f in sorted(F, key=lambda g: (g.arity, g.table)):
        if slices[f.arity].add(f.table):
            work.append((f.arity, f.table))
    maps = {(n, m): [tb.minor_index(s.images, m) for s in all_maps(n, m)]
            for n in range(1, arity_cap + 1) for m in range(1, arity_cap + 1)}
    while work:
        n, t = work.pop(0)
        for m in range(1, arity_cap + 1):
            for idx in maps[(n, m)]:
                u = tb.gather_int(t, idx)
                if slices[m].add(u):
                    work.append((m, u))
    return FnClass(arity_cap, {n: _frozen(slices[n].points()) for n in slices}, "closure-result")


def _frozen(a):
    a.setflags(write=False)
    return a


def is_lc_stable(K: FnClass) -> bool:
    """Closure of K under minors and f+g+h, checked within its cap."""
    for n in range(1, K.cap + 1):
        T = K.tables(n)
        if len(T) == 0:
            continue
        for m in range(1, K.cap + 1):
            for s in all_maps(n, m):
                if not K.contains_tables(tb.gather(T, tb.minor_index(s.images, m)), m).all():
                    return False
        # an affine subspace has exactly 2^rank(differences) points
        hull = _AffineSlice()
        for t in T:
            hull.add(int(t))
        if len(T) != 1 << len(hull.basis):
            return False
    return True
