"""Acceptance suite: one PASS/FAIL line per criterion, each at its stated tolerance.

Run with ``pytest -v tests/test_acceptance.py`` or directly with
``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from functools import lru_cache
from itertools import combinations, product
from math import comb

import pytest

from bitangents.curve import derive_section, restrict
from bitangents.dataset import builtin_klein
from bitangents.exactfield import elem_embed
from bitangents.oracle import connected_number_numeric, find_bitangents_numeric
from bitangents.pairing import PairingTable, SignMatrix, gram_matrix
from bitangents.topology import (
    _det,
    classify_subsets,
    connected_number_det,
    connected_number_liftgraph,
    connected_number_triple,
    even_size_bound,
    parity_identity_check,
    subarrangement_invariant,
)

G123 = [[3, -1, -1], [-1, 3, -1], [-1, -1, 3]]
G124 = [[3, -1, -1], [-1, 3, 1], [-1, 1, 3]]
G126 = [[3, -1, -1], [-1, 3, 1], [-1, 1, 3]]
G236 = [[3, -1, 1], [-1, 3, 1], [1, 1, 3]]
G247 = [[3, 1, 1], [1, 3, 1], [1, 1, 3]]


@lru_cache(maxsize=None)
def klein():
    return builtin_klein()


def printed(*labels):
    ds = klein()
    return [ds.sections[f"L{k}"] for k in labels]


@lru_cache(maxsize=None)
def printed_table():
    return PairingTable(printed(*range(1, 8)))


@lru_cache(maxsize=None)
def derived_sections():
    ds = klein()
    return tuple(derive_section(ds.curve, ln) for ln in ds.lines)


def pos(*labels):
    return [k - 1 for k in labels]


# --- criteria -----------------------------------------------------------------
# each returns (ok, detail)

def criterion_1():
    start = time.perf_counter()
    ds = builtin_klein()
    g123 = gram_matrix([ds.sections[n] for n in ("L1", "L2", "L3")]).tolist()
    g124 = gram_matrix([ds.sections[n] for n in ("L1", "L2", "L4")]).tolist()
    elapsed = time.perf_counter() - start
    ok = g123 == G123 and g124 == G124 and elapsed < 1.0
    return ok, f"G(1,2,3)={g123} G(1,2,4)={g124} in {elapsed:.2f}s (< 1s)"


def criterion_2():
    t = printed_table()
    values = {}
    for name, tri in (("123", pos(1, 2, 3)), ("124", pos(1, 2, 4))):
        G = t.gram(tri)
        values[name] = (connected_number_triple(G), connected_number_det(G), connected_number_liftgraph(t, tri))
    ok = values["123"] == (2, 2, 2) and values["124"] == (1, 1, 1)
    return ok, f"c(123) parity/det/lift = {values['123']}, c(124) = {values['124']}"


def criterion_3():
    t = printed_table()
    expected = {"I1": ((1, 2, 3, 5), (4, 0)), "I2": ((1, 2, 3, 6), (2, 2)), "I3": ((1, 2, 4, 7), (0, 4))}
    got, mismatches = {}, []
    for name, (labels, want) in expected.items():
        got[name] = tuple(subarrangement_invariant(t, pos(*labels)))
        if got[name] != want:
            mismatches.append(f"{name}: expected {want} got {got[name]}")
    cls = classify_subsets(klein().curve, printed(*range(1, 8)), 4, labels=list(range(1, 8)))
    owner = {}
    for pair, members in cls.classes.items():
        for m in members:
            owner[m] = pair
    classes = {owner[labels] for labels, _ in expected.values()}
    distinct = len(classes) == 3
    if not distinct:
        mismatches.append("I1, I2, I3 do not fall into three distinct classes")
    detail = f"computed {got}; three distinct classes: {distinct}"
    if mismatches:
        detail += "; " + "; ".join(mismatches)
    return not mismatches, detail


def criterion_4():
    t = printed_table()

    def G(*labels):
        return t.gram(pos(*labels)).tolist()

    checks = {
        "G126": G(1, 2, 6) == G126,
        "G136": G(1, 3, 6) == G126,
        "G236": G(2, 3, 6) == G236,
        "G247": G(2, 4, 7) == G247,
        "G123=G125=G135": G(1, 2, 3) == G(1, 2, 5) == G(1, 3, 5) == G123,
        "G124=G127=G147": G(1, 2, 4) == G(1, 2, 7) == G(1, 4, 7) == G124,
    }
    failed = [k for k, v in checks.items() if not v]
    return not failed, "all six equalities exact" if not failed else f"failed: {failed}"


def criterion_5():
    start = time.perf_counter()
    agree, dets = 0, set()
    for upper in product((1, -1), repeat=3):
        G = SignMatrix.from_upper(upper)
        shifted = [[v - 3 if i == j else v for j, v in enumerate(row)] for i, row in enumerate(G.tolist())]
        dets.add(_det(shifted))
        agree += connected_number_triple(G) == connected_number_det(G)
    elapsed = time.perf_counter() - start
    ok = agree == 8 and dets <= {2, -2} and elapsed < 1.0
    return ok, f"{agree}/8 agree, det values {sorted(dets)}, {elapsed * 1000:.1f} ms"


def criterion_6():
    t = printed_table()
    small = sum(
        connected_number_liftgraph(t, tri) == connected_number_triple(t.gram(tri)) for tri in combinations(range(7), 3)
    )
    full = PairingTable(derived_sections())
    rng = random.Random(2024)
    triples = [tuple(sorted(rng.sample(range(28), 3))) for _ in range(120)]
    big = sum(connected_number_liftgraph(full, tri) == connected_number_triple(full.gram(tri)) for tri in triples)
    ok = small == 35 and big == len(triples)
    return ok, f"{small}/35 printed triples, {big}/{len(triples)} random triples of 28 derived sections"


def criterion_7():
    t = printed_table()
    problems, count = [], 0
    for n in range(3, 8):
        for subset in combinations(range(7), n):
            rep = parity_identity_check(t, subset)  # raises IdentityViolated on failure
            count += 1
            if rep.M < 0 or rep.m_I * (n - 2) != 2 * rep.M + rep.count2 or (n % 2 == 0 and rep.count2 % 2):
                problems.append(subset)
    full = PairingTable(derived_sections())
    rng = random.Random(7)
    random_count = 0
    for _ in range(120):
        n = rng.randint(4, 6)
        subset = sorted(rng.sample(range(28), n))
        rep = parity_identity_check(full, subset)
        random_count += 1
        if rep.M < 0 or rep.m_I * (n - 2) != 2 * rep.M + rep.count2 or (n % 2 == 0 and rep.count2 % 2):
            problems.append(tuple(subset))
    pairs = {subarrangement_invariant(t, s) for s in combinations(range(7), 4)}
    bound_ok = len(pairs) <= even_size_bound(4) == 3
    ok = count == 99 and random_count >= 100 and not problems and bound_ok
    return ok, (
        f"{count} exhaustive + {random_count} random subsets, {len(problems)} violations; "
        f"{len(pairs)} distinct pairs at n=4 (bound {even_size_bound(4)})"
    )


def criterion_8():
    ds = klein()
    start = time.perf_counter()
    derived_sections.cache_clear()
    secs = derived_sections()
    elapsed = time.perf_counter() - start
    exact = sum(s.y_poly() * s.y_poly() == restrict(ds.curve, s.line) for s in secs)
    match = 0
    for k in range(7):
        mine, theirs = secs[k].y_poly(), ds.sections[f"L{k + 1}"].y_poly()
        match += mine == theirs or mine == -theirs
    ok = exact == 28 and match == 7 and elapsed < 30
    return ok, f"{exact}/28 exact y^2 = F|_L, {match}/7 equal to printed up to sign, {elapsed:.1f}s (< 30s)"


def criterion_9():
    ds = klein()
    start = time.perf_counter()
    t = printed_table()
    agree = sum(
        connected_number_numeric(ds.curve, [ds.lines[p] for p in tri]) == connected_number_liftgraph(t, tri)
        for tri in combinations(range(7), 3)
    )
    found = find_bitangents_numeric(ds.curve, seeds=200, rng_seed=0)
    exact = [(elem_embed(ln.a), elem_embed(ln.b)) for ln in ds.lines]
    worst = max(min(max(abs(f.a - a), abs(f.b - b)) for a, b in exact) for f in found) if found else float("inf")
    covered = sum(any(max(abs(f.a - a), abs(f.b - b)) < 1e-8 for f in found) for a, b in exact)
    elapsed = time.perf_counter() - start
    ok = agree == 35 and len(found) == 28 and covered == 28 and worst < 1e-8 and elapsed < 60
    return ok, (
        f"{agree}/35 triples agree, {len(found)} lines found, {covered}/28 exact lines matched, "
        f"worst distance {worst:.1e} (< 1e-8), {elapsed:.1f}s (< 60s)"
    )


CRITERIA = {
    1: ("Klein Gram matrices G(1,2,3), G(1,2,4)", criterion_1),
    2: ("Zariski pair c(123)=2, c(124)=1 by three methods", criterion_2),
    3: ("Zariski triple invariants (4,0), (2,2), (0,4)", criterion_3),
    4: ("auxiliary matrices and stated equalities", criterion_4),
    5: ("parity rule equals determinant rule on all 8 matrices", criterion_5),
    6: ("lift-graph count equals parity rule", criterion_6),
    7: ("parity identity and even-size bound", criterion_7),
    8: ("section derivation on all 28 lines", criterion_8),
    9: ("numeric oracle agreement and 28 numeric lines", criterion_9),
}


def report_line(number, title, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title} -- {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    title, fn = CRITERIA[number]
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + report_line(number, title, ok, detail))
    assert ok, detail


def test_criterion_10_out_of_scope(capsys):
    with capsys.disabled():
        print("\nSKIP  criterion 10: topological conclusion from unequal invariants -- out of scope by definition")
    pytest.skip("not desk-reproducible; the invariant computations above stand in for it")


if __name__ == "__main__":
    failures = 0
    for number in sorted(CRITERIA):
        title, fn = CRITERIA[number]
        ok, detail = fn()
        failures += not ok
        print(report_line(number, title, ok, detail))
    print("SKIP  criterion 10: topological conclusion from unequal invariants -- out of scope by definition")
    sys.exit(1 if failures else 0)
