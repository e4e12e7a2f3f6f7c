"""The ten acceptance criteria, one test each; every test records a PASS/FAIL line."""

import itertools
import random
import time

import numpy as np

from _acceptance_log import record
from lcstable import _tables as tb
from lcstable.clones import CloneId, enumerate_tables
from lcstable.closure import (Block, classify, closure_oracle, complement_descriptor, descriptor_class,
                              descriptor_mask, enumerate_descriptors, graded)
from lcstable.gfp import GFpFn, family_equals_degree, family_within_degree, gfp_closure_oracle, gfp_degree
from lcstable.stability import verify_table3
from lcstable.zhegalkin import (BoolFn, MinorMap, anf, charrank, compose, from_anf, inner_negation, minor, monster,
                                parse_fn, polydeg, star)

SEED = 20240601
U64 = np.uint64


def _all(n):
    return np.arange(1 << (1 << n), dtype=U64)


def test_criterion_01_anf_involution():
    T = _all(4)
    t0 = time.perf_counter()
    ok_fast = bool((tb.mobius(tb.mobius(T, 4), 4) == T).all())
    elapsed = time.perf_counter() - t0
    # the public, set-of-monomials route for every function as well
    ok_public = all(from_anf(anf(BoolFn(4, t)), 4).table == t for t in range(1 << 16))
    ok = ok_fast and ok_public
    record(1, "ANF involution on all 65536 functions of arity 4", ok, f"packed route {elapsed:.3f}s")
    assert ok


def test_criterion_02_charrank_via_inner_negation():
    bad = 0
    for n in (1, 2, 3, 4):
        T = _all(n)
        inv = tb.all_invariants(n)
        phi = T ^ tb.reverse(T, n)
        pd = tb.top_popcount(tb.mobius(phi, n), n)
        bad += int((inv.charrank != pd + 1).sum())
    # scalar route, independently of the packed transforms, on arity <= 3
    for n in (1, 2, 3):
        for t in range(1 << (1 << n)):
            f = BoolFn(n, t)
            bad += charrank(f) != polydeg(f + inner_negation(f)) + 1
    record(2, "charrank(f) = polydeg(f + inner(f)) + 1, arity <= 4", bad == 0, f"{bad} mismatches")
    assert bad == 0


def test_criterion_03_reflexive_and_self_dual():
    bad = 0
    for n in (1, 2, 3, 4):
        T = _all(n)
        inv = tb.all_invariants(n)
        rev = tb.reverse(T, n)
        reflexive = rev == T
        self_dual = (rev ^ T) == U64(tb.full_mask(n))
        parity = inv.c0 ^ inv.c1
        bad += int((reflexive != (inv.charrank == 0)).sum())
        bad += int((self_dual != ((parity == 1) & (inv.charrank <= 1))).sum())
    record(3, "reflexive <=> charrank 0; self-dual <=> odd and charrank <= 1", bad == 0, f"{bad} mismatches")
    assert bad == 0


def test_criterion_04_star_with_ternary_sum():
    xor3 = parse_fn("x1 + x2 + x3")
    bad = checked = 0
    for n in (1, 2, 3):
        m = n + 2
        rest = tuple(range(4, n + 3))
        sigmas = [MinorMap.of((i,) + rest, m) for i in (1, 2, 3)]
        for t in range(1 << (1 << n)):
            f = BoolFn(n, t)
            checked += 1
            bad += star(f, xor3) != compose(xor3, [minor(f, s) for s in sigmas])
    record(4, "f * xor3 = xor3(f_s1, f_s2, f_s3) for all f of arity <= 3", bad == 0, f"{checked} functions")
    assert bad == 0


def _named_families():
    fams = {}
    for k in (1, 2, 3):
        prod = "*".join(f"x{i}" for i in range(1, k + 1))
        fams[f"x1..x{k}"] = [parse_fn(prod)]
        fams[f"x1..x{k} + x1"] = [parse_fn(f"{prod} + x1")]
        fams[f"W{k}"] = [monster(k)]
    fams["xor3"] = [parse_fn("x1 + x2 + x3")]
    fams["median"] = [parse_fn("x1*x2 + x1*x3 + x2*x3")]
    return fams


def _random_sets(count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        size = rng.randint(1, 2)
        yield [BoolFn(n, rng.randrange(1 << (1 << n))) for n in (rng.randint(1, 3) for _ in range(size))]


def test_criterion_05_oracle_matches_classification():
    t0 = time.perf_counter()
    sets = list(_named_families().values()) + list(_random_sets(120, SEED))
    bad = [F for F in sets if not closure_oracle(F, 4).same_members(descriptor_class(classify(F), 4))]
    elapsed = time.perf_counter() - t0
    record(5, "closure oracle equals classification at arities 1-4", not bad,
           f"{len(sets)} generator sets, {len(bad)} mismatches, {elapsed:.1f}s")
    assert not bad


def test_criterion_06_specific_closures():
    checks = []
    for k in (1, 2, 3):
        prod = parse_fn("*".join(f"x{i}" for i in range(1, k + 1)))
        checks.append((f"<x1..x{k}>", [prod], descriptor_class(graded(k, k, Block.B01), 4)))
        checks.append((f"<W{k}>", [monster(k)], descriptor_class(graded(k, 1, Block.B00), 4)))
    checks.append(("<x1x2 + x1>", [parse_fn("x1*x2 + x1")], descriptor_class(graded(2, 2, Block.B00), 4)))
    failed = [name for name, F, expect in checks if not closure_oracle(F, 4).same_members(expect)]
    # the closure of the first projection is the clone itself
    K = closure_oracle([parse_fn("x1")], 4)
    if not all(np.array_equal(K.tables(n), enumerate_tables(CloneId.LC, n)) for n in (1, 2, 3, 4)):
        failed.append("<pr1>")
    record(6, "named closures, including <pr1> = Lc slices", not failed, ", ".join(failed))
    assert not failed


def test_criterion_07_stability_table():
    t0 = time.perf_counter()
    reports = verify_table3(max_param=3, arity_cap=4)
    elapsed = time.perf_counter() - t0
    failed = [r.instance.label for r in reports if not r.passed]
    # every expected failure on a graded class is backed by a confirmed catalog witness
    missing = [(r.instance.label, rec.clone, rec.side) for r in reports for rec in r.records
               if rec.expected == "Fails" and r.instance.descriptor.is_graded and not rec.families]
    beyond = sum(1 for r in reports for rec in r.records
                 if rec.verdict is not None and "catalog witness" in rec.verdict.note)
    sampled = sum(1 for r in reports for rec in r.records
                  if rec.verdict is not None and "sampled" in rec.verdict.note)
    ok = not failed and not missing and len(reports) == 114
    record(7, "stability table, 114 instances at cap 4", ok,
           f"{len(reports) - len(failed)}/{len(reports)} pass, {len(missing)} without catalog witness, "
           f"{beyond} failures shown by catalog witnesses above arity 4, {sampled} Holds checks sampled at arity 4, "
           f"{elapsed:.0f}s")
    assert ok, (failed, missing)


def test_criterion_08_blocks_and_descriptor_count():
    problems = []
    minimal = [Block.B00, Block.B01, Block.B10, Block.B11]
    middle = [Block.C0, Block.C1, Block.E0, Block.E1, Block.EQ, Block.NEQ]
    for n in (1, 2, 3):
        inv = tb.all_invariants(n)
        masks = {b: b.mask(inv.c0, inv.c1) for b in Block}
        if not (sum(masks[b].astype(int) for b in minimal) == 1).all():
            problems.append(f"minimal blocks do not partition arity {n}")
        for b in middle:
            covers = [m for m in minimal if m < b]
            if len(covers) != 2 or not (masks[b] == (masks[covers[0]] | masks[covers[1]])).all():
                problems.append(f"{b.name} is not a union of two minimal blocks")
    ds = enumerate_descriptors(1, 1)
    graded_count = sum(d.is_graded for d in ds)
    keys = {tuple(np.packbits(descriptor_mask(d, n)).tobytes() for n in (1, 2, 3, 4)) for d in ds}
    if (graded_count, len(ds) - graded_count) != (33, 4):
        problems.append(f"{graded_count} graded descriptors")
    if len(keys) != len(ds):
        problems.append(f"only {len(keys)} distinct membership sets")
    record(8, "block structure and 33 + 4 pairwise distinct descriptors", not problems, "; ".join(problems))
    assert not problems


def _span_tables(fam, n):
    """All members of a GF(2) slice as packed truth tables."""
    pts = np.zeros(1, dtype=np.int64)
    for v in fam.spaces[n].basis():
        t = sum(int(b) << i for i, b in enumerate(v))
        pts = np.concatenate([pts, pts ^ t])
    return np.sort(pts)


def test_criterion_09_finite_field_closures():
    problems = []
    degrees = {n: tb.all_invariants(n).degree for n in (1, 2, 3, 4)}
    for n in (1, 2, 3):
        for t in range(1 << (1 << n)):
            b = BoolFn(n, t)
            f = GFpFn(2, n, tuple((t >> i) & 1 for i in range(1 << n)))
            k = gfp_degree(f)
            fam = gfp_closure_oracle([f], 4)
            for m in (1, 2, 3, 4):
                expect = np.nonzero(degrees[m] <= k)[0]
                if not np.array_equal(_span_tables(fam, m), expect):
                    problems.append(f"GF(2) {b} at arity {m}")
    # GF(3), unary generators, cap 2: compared with a degree filter over all functions
    all2 = [GFpFn(3, 2, v) for v in itertools.product(range(3), repeat=9)]
    deg2 = {g: gfp_degree(g) for g in all2}
    for vals in itertools.product(range(3), repeat=3):
        f = GFpFn(3, 1, vals)
        k = gfp_degree(f)
        fam = gfp_closure_oracle([f], 2)
        members = set(fam.members(2))
        within = members <= {g for g, d in deg2.items() if d <= k}
        within = within and family_within_degree(fam, k, 1)
        if not within:
            problems.append(f"GF(3) {vals} leaves D{k}")
        if 2 >= k + 1 and not (members == {g for g, d in deg2.items() if d <= k} and family_equals_degree(fam, k, 1)):
            problems.append(f"GF(3) {vals} does not reach D{k}")
    record(9, "GF(2) closures equal D_deg at cap 4; GF(3) unary closures within D_deg at cap 2", not problems,
           "; ".join(problems[:3]))
    assert not problems


def test_criterion_10_duality():
    bad = []
    for F in _random_sets(50, SEED + 1):
        comp = [f + BoolFn.constant(1, f.arity) for f in F]
        if classify(comp) != complement_descriptor(classify(F)):
            bad.append(F)
    record(10, "classify of complemented families equals the complemented class", not bad, f"{len(bad)} mismatches")
    assert not bad
