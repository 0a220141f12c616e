"""Connected numbers of bitangent arrangements and the subarrangement invariant.

Three independent routes to the connected number of a triple:
the parity of the -1 count in its sign matrix, det(G - 3I) = +-2, and the
component count of the lift graph on the 2k lifts s_{+-P_i}.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb
from typing import NamedTuple

from .curve import curve_sanity
from .errors import IdentityViolated, MalformedMatrix
from .pairing import Kind, PairingTable, intersection_datum


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.count = n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx
            self.count -= 1


def _det(rows):
    """Exact determinant of a small integer matrix by cofactor expansion."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
            total += (-1) ** j * rows[0][j] * _det(minor)
    return total


def _check_triple(G):
    if G.size != 3 or not G.is_valid():
        raise MalformedMatrix(f"not a 3x3 sign matrix: {G}")


def connected_number_triple(G):
    """1 if the number of -1 entries above the diagonal is even, else 2."""
    _check_triple(G)
    return 1 if G.minus_count % 2 == 0 else 2


def connected_number_det(G):
    """1 if det(G - 3I) = 2, 2 if it is -2."""
    if G.size != 3:
        raise MalformedMatrix("determinant rule applies to 3x3 matrices")
    shifted = [[v - 3 if i == j else v for j, v in enumerate(row)] for i, row in enumerate(G.entries)]
    det = _det(shifted)
    if det == 2:
        return 1
    if det == -2:
        return 2
    raise MalformedMatrix(f"det(G - 3I) = {det}, expected +-2")


@dataclass(frozen=True)
class LiftGraph:
    """Vertices 2*p (lift s_{+P}) and 2*p + 1 (lift s_{-P}) for each position p."""

    size: int
    edges: tuple

    def components(self):
        uf = UnionFind(2 * self.size)
        for u, v in self.edges:
            uf.union(u, v)
        return uf.count


def lift_graph(table, positions=None):
    positions = list(range(len(table))) if positions is None else list(positions)
    local = {p: n for n, p in enumerate(positions)}
    edges = []
    for p, q in combinations(positions, 2):
        datum = table.data[min(p, q), max(p, q)]
        u, v = 2 * local[p], 2 * local[q]
        if datum.kind is Kind.SAME_POINT:
            edges += [(u, v), (u + 1, v + 1)]
        else:
            edges += [(u, v + 1), (u + 1, v)]
    return LiftGraph(len(positions), tuple(edges))


def connected_number_liftgraph(sections, positions=None):
    """Number of connected components of the preimage of the arrangement minus Q.

    ``sections`` may be a list of sections or a prebuilt :class:`PairingTable`.
    """
    table = sections if isinstance(sections, PairingTable) else PairingTable(sections)
    return lift_graph(table, positions).components()


_METHODS = {
    "parity": lambda table, tri: connected_number_triple(table.gram(tri)),
    "det": lambda table, tri: connected_number_det(table.gram(tri)),
    "liftgraph": lambda table, tri: connected_number_liftgraph(table, tri),
}


class InvariantPair(NamedTuple):
    count1: int
    count2: int

    def __str__(self):
        return f"({self.count1},{self.count2})"


def triple_values(table, positions, method="parity"):
    """Connected number of every triple inside ``positions``, keyed by the triple."""
    fn = _METHODS[method]
    return {tri: fn(table, tri) for tri in combinations(positions, 3)}


def subarrangement_invariant(sections, positions=None, method="parity"):
    """(#triples with connected number 1, #triples with connected number 2)."""
    table = sections if isinstance(sections, PairingTable) else PairingTable(sections)
    positions = list(range(len(table))) if positions is None else list(positions)
    if len(positions) < 3:
        raise ValueError("the subarrangement invariant needs at least three lines")
    values = triple_values(table, positions, method).values()
    pair = InvariantPair(sum(1 for v in values if v == 1), sum(1 for v in values if v == 2))
    if pair.count1 + pair.count2 != comb(len(positions), 3):
        raise IdentityViolated(f"{pair} does not account for all triples")
    return pair


@dataclass(frozen=True)
class ParityReport:
    m_I: int
    n: int
    count2: int
    M: int


def parity_identity_check(sections, positions=None):
    """m_I (n - 2) = 2 M + #c^-1(2) with M = #{triples with m = 2 or 3} >= 0.

    M is counted directly from the triples and compared with the value the
    identity forces, so both sides are evaluated independently.
    """
    table = sections if isinstance(sections, PairingTable) else PairingTable(sections)
    positions = list(range(len(table))) if positions is None else list(positions)
    n = len(positions)
    if n < 3:
        raise ValueError("parity identity needs at least three lines")
    m_I = table.gram(positions).minus_count
    counts = [0, 0, 0, 0]
    for tri in combinations(positions, 3):
        counts[table.gram(tri).minus_count] += 1
    count2 = subarrangement_invariant(table, positions, method="liftgraph").count2
    lhs = m_I * (n - 2)
    if (lhs - count2) % 2:
        raise IdentityViolated(f"m_I(n-2) - #c^-1(2) = {lhs - count2} is odd")
    M = (lhs - count2) // 2
    if M < 0 or M != counts[2] + counts[3]:
        raise IdentityViolated(f"M = {M} but {counts[2] + counts[3]} triples have m >= 2")
    if n % 2 == 0 and count2 % 2:
        raise IdentityViolated(f"n = {n} even but #c^-1(2) = {count2} is odd")
    return ParityReport(m_I, n, count2, M)


def even_size_bound(n):
    """Largest possible number of distinct invariant pairs for even n: C(n,3)/2 + 1."""
    return comb(n, 3) // 2 + 1


@dataclass
class Classification:
    size: int
    classes: dict = dc_field(default_factory=dict)  # InvariantPair -> list of label tuples
    excluded: dict = dc_field(default_factory=dict)  # label tuple -> list of reasons

    @property
    def distinct_pairs(self):
        return sorted(self.classes)


def classify_subsets(curve, sections, size, labels=None, limit=10**6, method="parity"):
    """Group all size-``size`` subsets of ``sections`` by their invariant pair.

    Subsets containing concurrent triples, or pairs meeting on the quartic, are
    reported in ``excluded`` instead of being classified.  Subsets are listed in
    lexicographic order of positions.
    """
    if size < 3:
        raise ValueError("subset size must be at least 3")
    total = comb(len(sections), size)
    if total > limit:
        raise ValueError(f"C({len(sections)}, {size}) = {total} subsets exceeds the limit {limit}")
    labels = list(labels) if labels is not None else list(range(1, len(sections) + 1))
    lines = [s.line for s in sections]
    sanity = curve_sanity(curve, lines)
    bad_pairs = {tuple(p) for p in sanity.on_curve_pairs} | {tuple(p) for p in sanity.identical_pairs}
    bad_triples = {tuple(t) for t in sanity.concurrent_triples}
    bad_lines = set(sanity.hyperflex_lines)

    # the table only needs the pairs that can appear in a classified subset
    table = _PartialTable(sections, labels, bad_pairs)

    result = Classification(size)
    for subset in combinations(range(len(sections)), size):
        reasons = []
        reasons += [f"hyperflex line {labels[p]}" for p in subset if p in bad_lines]
        reasons += [
            f"{labels[p]} and {labels[q]} meet on the quartic" for p, q in combinations(subset, 2) if (p, q) in bad_pairs
        ]
        reasons += [
            "concurrent " + ",".join(str(labels[p]) for p in tri)
            for tri in combinations(subset, 3)
            if tri in bad_triples
        ]
        key = tuple(labels[p] for p in subset)
        if reasons:
            result.excluded[key] = reasons
            continue
        pair = subarrangement_invariant(table, subset, method=method)
        result.classes.setdefault(pair, []).append(key)
    return result


class _PartialTable(PairingTable):
    """PairingTable that skips pairs known to be degenerate."""

    def __init__(self, sections, labels, skip):
        self.sections = list(sections)
        self.labels = list(labels)
        self.data = {}
        for i, j in combinations(range(len(self.sections)), 2):
            if (i, j) in skip:
                continue
            self.data[i, j] = intersection_datum(self.sections[i], self.sections[j], self.labels[i], self.labels[j])
