"""Operations on GF(p) for a small prime p, and their reduced polynomials.

Value tables use a mixed-radix index with x1 as the least significant digit.
Coefficient arrays have shape (p,) * n, axis i holding the exponent of x_{i+1}.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterable, Tuple

import numpy as np

PRIMES = (2, 3, 5, 7)
MAX_TABLE = 3**6


def _check_prime(p):
    if p not in PRIMES:
        raise ValueError(f"p must be one of {PRIMES}, got {p!r}")


def _check_size(p, n):
    if n < 1:
        raise ValueError("arity must be at least 1")
    if p**n > MAX_TABLE:
        raise ValueError(f"table of size {p}^{n} exceeds the bound {MAX_TABLE}")


@lru_cache(maxsize=None)
def _vandermonde(p):
    """V[a, e] = a^e mod p, with 0^0 = 1."""
    return np.array([[pow(a, e, p) for e in range(p)] for a in range(p)], dtype=np.int64)


@lru_cache(maxsize=None)
def _inverse_mod(p):
    V = _vandermonde(p)
    n = len(V)
    A = np.concatenate([V % p, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        pivot = next(r for r in range(col, n) if A[r, col] % p)
        A[[col, pivot]] = A[[pivot, col]]
        A[col] = (A[col] * pow(int(A[col, col]), -1, p)) % p
        for r in range(n):
            if r != col and A[r, col]:
                A[r] = (A[r] - A[r, col] * A[col]) % p
    return A[:, n:]


def _apply_axes(M, X, p):
    for axis in range(X.ndim):
        X = np.moveaxis(np.tensordot(M, X, axes=([1], [axis])) % p, 0, axis)
    return X


def interpolate(values, p: int, n: int) -> np.ndarray:
    """Coefficients of the reduced polynomial agreeing with the value table."""
    _check_prime(p)
    _check_size(p, n)
    vals = np.asarray(values, dtype=np.int64)
    if vals.shape != (p**n,):
        raise ValueError(f"expected {p**n} values")
    if ((vals < 0) | (vals >= p)).any():
        raise ValueError(f"values must lie in 0..{p - 1}")
    return _apply_axes(_inverse_mod(p), vals.reshape((p,) * n, order="F"), p)


def evaluate(coeffs, p: int) -> np.ndarray:
    C = np.asarray(coeffs, dtype=np.int64) % p
    return _apply_axes(_vandermonde(p), C, p).reshape(-1, order="F")


@dataclass(frozen=True)
class GFpFn:
    p: int
    arity: int
    values: Tuple[int, ...]

    def __post_init__(self):
        _check_prime(self.p)
        _check_size(self.p, self.arity)
        if len(self.values) != self.p**self.arity or any(not 0 <= v < self.p for v in self.values):
            raise ValueError("value table does not match p and arity")

    @classmethod
    def from_coeffs(cls, coeffs, p):
        C = np.asarray(coeffs, dtype=np.int64)
        return cls(p, C.ndim, tuple(int(v) for v in evaluate(C, p)))

    @classmethod
    def from_array(cls, p, n, arr):
        return cls(p, n, tuple(int(v) for v in np.asarray(arr) % p))

    @cached_property
    def coeffs(self) -> np.ndarray:
        return interpolate(self.values, self.p, self.arity)

    def coeff_map(self) -> Dict[Tuple[int, ...], int]:
        C = self.coeffs
        return {tuple(int(e) for e in idx): int(C[idx]) for idx in zip(*np.nonzero(C))}

    def __call__(self, *args):
        idx = sum((a % self.p) * self.p**i for i, a in enumerate(args))
        return self.values[idx]

    def __str__(self):
        return format_gfp(self)


def gfp_degree(f: GFpFn) -> int:
    nz = np.argwhere(f.coeffs)
    return int(nz.sum(axis=1).max()) if len(nz) else 0


@dataclass(frozen=True)
class GFpClass:
    """'empty', 'omega' or D_degree."""

    kind: str
    degree: int = 0

    def __str__(self):
        return {"empty": "Empty", "omega": "Omega"}.get(self.kind, f"D{self.degree}")


def gfp_classify(F: Iterable[GFpFn]) -> GFpClass:
    F = list(F)
    if not F:
        return GFpClass("empty")
    if len({f.p for f in F}) > 1:
        raise ValueError("functions over different fields")
    return GFpClass("D", max(gfp_degree(f) for f in F))


# bounded closure oracle ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _points(p, n):
    """Rows are argument tuples in table order."""
    return np.array([[(b // p**i) % p for i in range(n)] for b in range(p**n)], dtype=np.int64)


def _index(points, p):
    return (points * (p ** np.arange(points.shape[1]))).sum(axis=1)


@lru_cache(maxsize=None)
def _minor_index(p, images, m):
    pts = _points(p, m)
    return _index(pts[:, [s - 1 for s in images]], p)


@lru_cache(maxsize=None)
def _subst_index(p, n, kind, c=0):
    """Positions for f(x1 + x2, x3, ...), f(c*x1, x2, ...) or f(c, x2, ...)."""
    if kind == "sum":
        pts = _points(p, n + 1)
        src = np.concatenate([((pts[:, 0] + pts[:, 1]) % p)[:, None], pts[:, 2:]], axis=1)
    else:
        pts = _points(p, n).copy()
        pts[:, 0] = (c * pts[:, 0]) % p if kind == "scale" else c
        src = pts
    return _index(src, p)


class _Subspace:
    """Row-reduced basis of a subspace of GF(p)^d."""

    def __init__(self, p, d):
        self.p, self.d = p, d
        self.rows = {}  # pivot -> row with 1 at the pivot

    def reduce(self, v):
        v = np.asarray(v, dtype=np.int64) % self.p
        for piv, row in self.rows.items():
            if v[piv]:
                v = (v - v[piv] * row) % self.p
        return v

    def add(self, v):
        r = self.reduce(v)
        nz = np.nonzero(r)[0]
        if not len(nz):
            return False
        piv = int(nz[0])
        r = (r * pow(int(r[piv]), -1, self.p)) % self.p
        for q, row in self.rows.items():
            if row[piv]:
                self.rows[q] = (row - row[piv] * r) % self.p
        self.rows[piv] = r
        return True

    @property
    def dim(self):
        return len(self.rows)

    def basis(self):
        return [self.rows[k] for k in sorted(self.rows)]

    def __contains__(self, v):
        return not self.reduce(v).any()


@dataclass
class GFpFamily:
    """Per-arity subspaces spanned by the closure."""

    p: int
    cap: int
    spaces: Dict[int, _Subspace]

    def dim(self, n):
        return self.spaces[n].dim

    def basis(self, n):
        return [GFpFn.from_array(self.p, n, v) for v in self.spaces[n].basis()]

    def __contains__(self, f: GFpFn):
        return f.arity <= self.cap and np.array(f.values) in self.spaces[f.arity]

    def members(self, n, limit=10**6):
        d = self.dim(n)
        if self.p**d > limit:
            raise ValueError(f"slice of arity {n} has {self.p}^{d} members")
        B = np.array(self.spaces[n].basis(), dtype=np.int64).reshape(d, -1)
        out = []
        for coeffs in itertools.product(range(self.p), repeat=d):
            v = (np.array(coeffs, dtype=np.int64) @ B) % self.p if d else np.zeros(self.p**n, dtype=np.int64)
            out.append(GFpFn.from_array(self.p, n, v))
        return out


def gfp_closure_oracle(F: Iterable[GFpFn], arity_cap: int) -> GFpFamily:
    """Least family within the cap that contains F and is stable under the linear clone on both sides.

    Slices are subspaces containing the constants (left composition with sums,
    scalar multiples and constants); right composition is closure under minors
    and under substituting x1 + x2, c*x1 or c into the first argument.
    """
    F = list(F)
    ps = {f.p for f in F}
    if len(ps) > 1:
        raise ValueError("functions over different fields")
    p = ps.pop() if ps else 2
    for n in range(1, arity_cap + 1):
        _check_size(p, n)
    if any(f.arity > arity_cap for f in F):
        raise ValueError("generator arity exceeds the cap")
    spaces = {n: _Subspace(p, p**n) for n in range(1, arity_cap + 1)}
    work = []

    def push(n, v):
        if spaces[n].add(v):
            work.append((n, np.asarray(v, dtype=np.int64) % p))

    if F:
        for n in spaces:
            push(n, np.ones(p**n, dtype=np.int64))
    for f in F:
        push(f.arity, np.array(f.values))
    while work:
        n, v = work.pop(0)
        for m in range(1, arity_cap + 1):
            for images in itertools.product(range(1, m + 1), repeat=n):
                push(m, v[_minor_index(p, images, m)])
        if n + 1 <= arity_cap:
            push(n + 1, v[_subst_index(p, n, "sum")])
        for c in range(p):
            push(n, v[_subst_index(p, n, "scale", c)])
            push(n, v[_subst_index(p, n, "const", c)])
    return GFpFamily(p, arity_cap, spaces)


def degree_space(p: int, n: int, k: int) -> _Subspace:
    """The subspace D_k at arity n: reduced polynomials of degree at most k."""
    S = _Subspace(p, p**n)
    for e in itertools.product(range(p), repeat=n):
        if sum(e) <= k:
            C = np.zeros((p,) * n, dtype=np.int64)
            C[e] = 1
            S.add(evaluate(C, p))
    return S


def family_equals_degree(fam: GFpFamily, k: int, n: int) -> bool:
    D = degree_space(fam.p, n, k)
    S = fam.spaces[n]
    return S.dim == D.dim and all(v in D for v in S.basis())


def family_within_degree(fam: GFpFamily, k: int, n: int) -> bool:
    D = degree_space(fam.p, n, k)
    return all(v in D for v in fam.spaces[n].basis())


# literals --------------------------------------------------------------------------

_TERM = re.compile(r"^(?:(\d+)\*?)?((?:x\d+(?:\^\d+)?\*?)*)$")
_FACTOR = re.compile(r"x(\d+)(?:\^(\d+))?")


def _reduce_exp(e, p):
    return e if e < p else (e - 1) % (p - 1) + 1


def parse_gfp(text: str) -> GFpFn:
    """Parse 'gfp:p=3 poly:x1^2 + 2*x2' or 'gfp:p=3 vt:0,1,1@1'."""
    m = re.fullmatch(r"\s*gfp:p=(\d+)\s+(poly|vt):(.*?)(?:@(\d+))?\s*", text)
    if not m:
        raise ValueError(f"malformed GF(p) literal {text!r}")
    p = int(m.group(1))
    _check_prime(p)
    arity = int(m.group(4)) if m.group(4) else None
    body = m.group(3).strip()
    if m.group(2) == "vt":
        try:
            vals = [int(v) for v in body.split(",")]
        except ValueError:
            raise ValueError(f"bad value table in {text!r}") from None
        n = arity if arity is not None else round(np.log(len(vals)) / np.log(p))
        if p**n != len(vals):
            raise ValueError(f"{len(vals)} values do not form a table over GF({p})")
        if any(not 0 <= v < p for v in vals):
            raise ValueError(f"values must lie in 0..{p - 1}")
        return GFpFn(p, n, tuple(vals))
    terms = []
    for raw in body.replace(" ", "").split("+"):
        t = _TERM.match(raw)
        if not raw or not t or (t.group(1) is None and not t.group(2)):
            raise ValueError(f"bad term {raw!r} in {text!r}")
        coeff = int(t.group(1)) if t.group(1) is not None else 1
        exps = {}
        for v, e in _FACTOR.findall(t.group(2)):
            if int(v) < 1:
                raise ValueError("variables are numbered from 1")
            exps[int(v)] = exps.get(int(v), 0) + (int(e) if e else 1)
        terms.append((coeff, exps))
    used = max((max(e) for _, e in terms if e), default=1)
    n = arity if arity is not None else used
    if n < used:
        raise ValueError(f"variable x{used} exceeds arity {n}")
    _check_size(p, n)
    C = np.zeros((p,) * n, dtype=np.int64)
    for coeff, exps in terms:
        idx = [0] * n
        for v, e in exps.items():
            idx[v - 1] = _reduce_exp(e, p) if e else 0
        C[tuple(idx)] = (C[tuple(idx)] + coeff) % p
    return GFpFn.from_coeffs(C, p)


def format_gfp(f: GFpFn) -> str:
    parts = []
    for e, c in sorted(f.coeff_map().items(), key=lambda kv: (sum(kv[0]), [-x for x in kv[0]])):
        mono = "*".join(f"x{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x)
        if not mono:
            parts.append(str(c))
        else:
            parts.append(mono if c == 1 else f"{c}*{mono}")
    body = " + ".join(parts) if parts else "0"
    used = max((i + 1 for e in f.coeff_map() for i, x in enumerate(e) if x), default=1)
    suffix = f"@{f.arity}" if used != f.arity else ""
    return f"gfp:p={f.p} poly:{body}{suffix}"
