"""Boolean functions as packed truth tables with a Zhegalkin (ANF) view.

Argument ``x1`` is the least significant bit of a table index, so bit ``b`` of
``BoolFn.table`` is ``f(b & 1, (b >> 1) & 1, ...)``.  Monomials are frozensets
of 1-based variable indices; the empty set is the constant term.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Iterable, NamedTuple, Sequence, Tuple

from . import _tables as tb

MAX_ARITY = 16

Monomial = FrozenSet[int]
MonomialSet = FrozenSet[Monomial]


def _bits(n):
    return [i + 1 for i in range(n.bit_length()) if (n >> i) & 1]


def _mask_of(monomial):
    m = 0
    for i in monomial:
        m |= 1 << (i - 1)
    return m


def _check_arity(n):
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_ARITY:
        raise ValueError(f"arity must be an integer in 1..{MAX_ARITY}, got {n!r}")


@dataclass(frozen=True)
class BoolFn:
    """An n-ary Boolean function, n >= 1, stored as a packed truth table."""

    arity: int
    table: int

    def __post_init__(self):
        _check_arity(self.arity)
        if not 0 <= self.table <= tb.full_mask(self.arity):
            raise ValueError(f"table does not fit arity {self.arity}")

    def __call__(self, *args):
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        b = 0
        for i, a in enumerate(args):
            b |= (int(a) & 1) << i
        return (self.table >> b) & 1

    @cached_property
    def anf_mask(self):
        """Packed ANF: bit S set iff the monomial with variable set S occurs."""
        return tb.mobius_int(self.table, self.arity)

    @property
    def monomials(self) -> MonomialSet:
        return anf(self)

    @property
    def signature(self) -> Signature:
        return signature(self)

    def __add__(self, other):
        return add(self, other)

    def __str__(self):
        return format_poly(self)

    @classmethod
    def constant(cls, value, arity=1):
        return cls(arity, tb.full_mask(arity) if value else 0)

    @classmethod
    def projection(cls, i, arity):
        if not 1 <= i <= arity:
            raise ValueError(f"projection index {i} out of range for arity {arity}")
        return cls(arity, tb.projection_table(i, arity))

    @classmethod
    def from_values(cls, values: Sequence[int]):
        n = len(values).bit_length() - 1
        if len(values) != 1 << n:
            raise ValueError("number of values must be a power of two")
        return cls(n, sum((int(v) & 1) << b for b, v in enumerate(values)))


class MinorMap(NamedTuple):
    """sigma: {1..source} -> {1..target} given by its image list."""

    source: int
    target: int
    images: Tuple[int, ...]

    @classmethod
    def of(cls, images: Iterable[int], target: int):
        images = tuple(int(s) for s in images)
        if any(not 1 <= s <= target for s in images):
            raise ValueError(f"images {images} not within 1..{target}")
        return cls(len(images), target, images)

    def then(self, tau: MinorMap) -> MinorMap:
        """The map tau ∘ sigma."""
        if tau.source != self.target:
            raise ValueError("maps are not composable")
        return MinorMap(self.source, tau.target, tuple(tau.images[s - 1] for s in self.images))


def all_maps(n, m):
    """All maps {1..n} -> {1..m} in lexicographic order of image tuples."""
    for images in itertools.product(range(1, m + 1), repeat=n):
        yield MinorMap(n, m, images)


class Signature(NamedTuple):
    degree: int
    charrank: int
    parity: int
    c0: int
    c1: int

    @property
    def profile(self):
        return (self.c0, self.c1)


def anf(f: BoolFn) -> MonomialSet:
    return frozenset(frozenset(_bits(s)) for s in range(1 << f.arity) if (f.anf_mask >> s) & 1)


def from_anf(monomials: Iterable[Iterable[int]], arity: int) -> BoolFn:
    _check_arity(arity)
    mask = 0
    for mono in monomials:
        mono = frozenset(mono)
        if any(not 1 <= i <= arity for i in mono):
            raise ValueError(f"monomial {sorted(mono)} uses a variable outside 1..{arity}")
        mask ^= 1 << _mask_of(mono)
    return BoolFn(arity, tb.mobius_int(mask, arity))


def from_anf_mask(mask: int, arity: int) -> BoolFn:
    return BoolFn(arity, tb.mobius_int(mask, arity))


def _check_map(f, sigma):
    if sigma.source != f.arity:
        raise ValueError(f"map has source arity {sigma.source}, function has arity {f.arity}")


def minor(f: BoolFn, sigma: MinorMap) -> BoolFn:
    _check_map(f, sigma)
    return BoolFn(sigma.target, tb.gather_int(f.table, tb.minor_index(sigma.images, sigma.target)))


def minor_monomials(monomials: Iterable[Iterable[int]], sigma: MinorMap) -> MonomialSet:
    """Monomials of the minor: S survives iff an odd number of T map onto it."""
    count = {}
    for mono in monomials:
        if any(not 1 <= i <= sigma.source for i in mono):
            raise ValueError("monomial outside the source arity of the map")
        image = frozenset(sigma.images[i - 1] for i in mono)
        count[image] = count.get(image, 0) ^ 1
    return frozenset(s for s, odd in count.items() if odd)


def _same_arity(f, g):
    if f.arity != g.arity:
        raise ValueError(f"arity mismatch: {f.arity} vs {g.arity}")


def add(f: BoolFn, g: BoolFn) -> BoolFn:
    _same_arity(f, g)
    return BoolFn(f.arity, f.table ^ g.table)


def outer_negation(f: BoolFn) -> BoolFn:
    return BoolFn(f.arity, f.table ^ tb.full_mask(f.arity))


def inner_negation(f: BoolFn) -> BoolFn:
    return BoolFn(f.arity, tb.reverse_int(f.table, f.arity))


def dual(f: BoolFn) -> BoolFn:
    return outer_negation(inner_negation(f))


def negations(f: BoolFn) -> Tuple[BoolFn, BoolFn, BoolFn]:
    """(outer, inner, dual) negations of f."""
    return outer_negation(f), inner_negation(f), dual(f)


def negate_argument(f: BoolFn, i: int) -> BoolFn:
    top = (1 << f.arity) - 1
    if not 1 <= i <= f.arity:
        raise ValueError(f"argument index {i} out of range")
    flip = 1 << (i - 1)
    return BoolFn(f.arity, tb.gather_int(f.table, tuple((a ^ flip) & top for a in range(top + 1))))


def characteristic(S: Iterable[int], f: BoolFn) -> int:
    """Parity of the number of monomials that are proper supersets of S."""
    s = frozenset(S)
    if any(not 1 <= i <= f.arity for i in s):
        raise ValueError(f"set {sorted(s)} not within 1..{f.arity}")
    return sum(1 for a in anf(f) if s < a) & 1


def polydeg(f: BoolFn) -> int:
    """Polynomial degree with the zero polynomial at -1."""
    mask = f.anf_mask
    return max((bin(s).count("1") for s in range(1 << f.arity) if (mask >> s) & 1), default=-1)


def degree(f: BoolFn) -> int:
    return max(polydeg(f), 0)


def charrank(f: BoolFn) -> int:
    mask = f.anf_mask
    char = tb.superset_sum_int(mask, f.arity) ^ mask
    return 1 + max((bin(s).count("1") for s in range(1 << f.arity) if (char >> s) & 1), default=-1)


def signature(f: BoolFn) -> Signature:
    c0 = f.table & 1
    c1 = (f.table >> ((1 << f.arity) - 1)) & 1
    parity = (bin(f.anf_mask >> 1).count("1")) & 1
    return Signature(degree(f), charrank(f), parity, c0, c1)


def is_reflexive(f: BoolFn) -> bool:
    return inner_negation(f) == f


def is_self_dual(f: BoolFn) -> bool:
    return dual(f) == f


def derivative(f: BoolFn, i: int) -> BoolFn:
    """The function whose monomials are S minus {i} for the monomials S containing i."""
    if not 1 <= i <= f.arity:
        raise ValueError(f"index {i} out of range for arity {f.arity}")
    bit = 1 << (i - 1)
    out = 0
    for s in range(1 << f.arity):
        if s & bit and (f.anf_mask >> s) & 1:
            out ^= 1 << (s ^ bit)
    return from_anf_mask(out, f.arity)


def monster(k: int, target_arity: int | None = None, support: Sequence[int] | None = None) -> BoolFn:
    """The (k+1)-ary function that is 1 except on the two constant tuples.

    With ``target_arity`` the function is placed on the arguments listed in
    ``support`` (default ``1..k+1``) of an m-ary function.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    n = k + 1
    w = BoolFn(n, tb.full_mask(n) ^ 1 ^ (1 << ((1 << n) - 1)))
    if target_arity is None and support is None:
        return w
    m = target_arity if target_arity is not None else max(support)
    support = tuple(support) if support is not None else tuple(range(1, n + 1))
    if len(support) != n or len(set(support)) != n:
        raise ValueError(f"support must list {n} distinct arguments")
    return minor(w, MinorMap.of(support, m))


def star(f: BoolFn, g: BoolFn) -> BoolFn:
    """f * g: g fills the first argument of f, the others shift past g's arguments."""
    n, m = f.arity, g.arity
    return BoolFn(n + m - 1, tb.gather_int(f.table, tb.star_index(n, m, g.table)))


def compose(f: BoolFn, gs: Sequence[BoolFn]) -> BoolFn:
    """f(g_1, ..., g_n) for inner functions of a common arity."""
    if len(gs) != f.arity:
        raise ValueError(f"expected {f.arity} inner functions, got {len(gs)}")
    m = gs[0].arity
    if any(g.arity != m for g in gs):
        raise ValueError("inner functions must share an arity")
    return BoolFn(m, tb.compose_int(f.table, f.arity, [g.table for g in gs], m))


def is_minor_of(f: BoolFn, g: BoolFn) -> bool:
    """True if f = g_sigma for some map sigma (brute force, small arities)."""
    return any(minor(g, s) == f for s in all_maps(g.arity, f.arity))


def equivalent(f: BoolFn, g: BoolFn) -> bool:
    """Equivalence up to fictitious arguments: each is a minor of the other."""
    return is_minor_of(f, g) and is_minor_of(g, f)


# literals ----------------------------------------------------------------

class LiteralError(ValueError):
    def __init__(self, message, text="", pos=None):
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}: {text!r}" if text else message)
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\d+)|(\+)|(\*))")


def _parse_poly(text, arity=None):
    monos = []
    current = set()
    const = None
    pos = 0
    expect_factor = True
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise LiteralError("unexpected character", text, pos)
        if mt.group(1):
            current.add(int(mt.group(2)))
            if int(mt.group(2)) < 1:
                raise LiteralError("variables are numbered from 1", text, mt.start(2))
            const = const if const is not None else 1
            expect_factor = False
        elif mt.group(3):
            c = int(mt.group(3))
            if c not in (0, 1):
                raise LiteralError("coefficients must be 0 or 1", text, mt.start(3))
            const = c if const is None else const * c
            expect_factor = False
        elif mt.group(4):
            if expect_factor:
                raise LiteralError("missing term", text, mt.start(4))
            monos.append((const, frozenset(current)))
            current, const = set(), None
            expect_factor = True
        else:
            if expect_factor:
                raise LiteralError("missing factor", text, mt.start(5))
            expect_factor = True
        pos = mt.end()
    if expect_factor:
        raise LiteralError("incomplete polynomial", text, len(text))
    monos.append((const, frozenset(current)))
    used = max((max(m) for _, m in monos if m), default=1)
    if arity is None:
        arity = used
    elif arity < used:
        raise LiteralError(f"variable x{used} exceeds arity {arity}", text)
    return from_anf([m for c, m in monos if c], arity)


def _parse_table(body, text, arity):
    if body.startswith(("0b", "0B")):
        bits = body[2:]
        if not bits or set(bits) - {"0", "1"}:
            raise LiteralError("bad binary table", text)
    elif body.startswith(("0x", "0X")):
        digits = body[2:]
        try:
            bits = "".join(format(int(d, 16), "04b") for d in digits)
        except ValueError:
            raise LiteralError("bad hexadecimal table", text) from None
        if not digits:
            raise LiteralError("bad hexadecimal table", text)
    else:
        raise LiteralError("table must start with 0b or 0x", text)
    n = len(bits).bit_length() - 1
    if arity is None:
        if len(bits) != 1 << n or n < 1:
            raise LiteralError("table length must be a power of two >= 2", text)
        arity = n
    elif len(bits) != 1 << arity:
        raise LiteralError(f"table has {len(bits)} bits, arity {arity} needs {1 << arity}", text)
    _check_arity(arity)
    return BoolFn.from_values([int(c) for c in bits])


def parse_fn(text: str) -> BoolFn:
    """Parse a function literal.

    Polynomials over GF(2) such as ``x1*x2 + x3 + 1`` or ``x1x2 + x3`` and
    truth tables ``tt:0b01101001`` or ``tt:0x69@3`` are accepted.  Table digits
    list f(0,...,0), f(1,0,...,0), ... from left to right.  An ``@n`` suffix
    fixes the arity.
    """
    raw = text.strip()
    arity = None
    if "@" in raw:
        raw, _, a = raw.rpartition("@")
        try:
            arity = int(a)
        except ValueError:
            raise LiteralError("arity after @ must be an integer", text) from None
        if not 1 <= arity <= MAX_ARITY:
            raise LiteralError(f"arity must be in 1..{MAX_ARITY}", text)
        raw = raw.strip()
    if raw.startswith("tt:"):
        return _parse_table(raw[3:].strip(), text, arity)
    if not raw:
        raise LiteralError("empty literal", text)
    return _parse_poly(raw, arity)


def _mono_key(s):
    return (len(s), sorted(s))


def format_poly(f: BoolFn) -> str:
    """Canonical polynomial: monomials by (size, lex), with @n when arity is not implied."""
    monos = sorted(anf(f), key=_mono_key)
    terms = ["1" if not m else "*".join(f"x{i}" for i in sorted(m)) for m in monos]
    body = " + ".join(terms) if terms else "0"
    implied = max((max(m) for m in monos if m), default=1)
    return body if implied == f.arity else f"{body}@{f.arity}"


def format_table(f: BoolFn) -> str:
    return "tt:0b" + "".join(str((f.table >> b) & 1) for b in range(1 << f.arity))
