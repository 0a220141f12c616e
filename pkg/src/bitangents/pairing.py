"""Intersections of bitangent sections, the height pairing, and sign matrices.

For sections of bitangents s.O = 0 and Theta_{inf,1}.s = 1, so the height
pairing reduces to  <P1, P2> = 1 - s_{P1}.s_{P2} - 1/2.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .errors import DegenerateConfiguration, Inconsistent, OnBranchLocus


class Kind(Enum):
    SAME_POINT = "same"  # s_{P_i} . s_{P_j} = 1
    OPPOSITE_POINT = "opposite"  # s_{P_i} . s_{-P_j} = 1


AT_INFINITY = "infinity"


@dataclass(frozen=True)
class IntersectionDatum:
    i: object
    j: object
    t0: object  # FieldElement, or AT_INFINITY for parallel lines
    kind: Kind

    @property
    def intersection_number(self):
        """s_{P_i} . s_{P_j}."""
        return 1 if self.kind is Kind.SAME_POINT else 0

    @property
    def sign(self):
        """Off-diagonal entry of the sign matrix: 2 <P_i, P_j>."""
        return -1 if self.kind is Kind.SAME_POINT else 1


def intersection_datum(s_i, s_j, i=None, j=None):
    li, lj = s_i.line, s_j.line
    i = li.name if i is None else i
    j = lj.name if j is None else j
    if li.same_line(lj):
        raise DegenerateConfiguration(f"{i} and {j} are the same line")
    if li.a == lj.a:
        # meeting point [1:a:0]; in the chart u = 1/t the lifts are y/t^2 -> c
        if s_i.c == s_j.c:
            return IntersectionDatum(i, j, AT_INFINITY, Kind.SAME_POINT)
        if s_i.c == -s_j.c:
            return IntersectionDatum(i, j, AT_INFINITY, Kind.OPPOSITE_POINT)
        raise Inconsistent(f"parallel {i}, {j}: leading coefficients are not equal up to sign")
    t0 = (lj.b - li.b) / (li.a - lj.a)
    yi, yj = s_i.y_poly()(t0), s_j.y_poly()(t0)
    if not yi and not yj:
        raise OnBranchLocus(f"{i} and {j} meet on the quartic at t = {t0}")
    if yi == yj:
        return IntersectionDatum(i, j, t0, Kind.SAME_POINT)
    if yi == -yj:
        return IntersectionDatum(i, j, t0, Kind.OPPOSITE_POINT)
    raise Inconsistent(f"{i}, {j}: y-values at t0 = {t0} differ by more than sign; bad section data")


def intersection_number(s_i, s_j):
    """s_{P_i} . s_{P_j}, including the self-intersection -1 and s_P . s_{-P} = 2."""
    if s_i.line.same_line(s_j.line):
        if s_i.c == s_j.c:
            return -1
        if s_i.c == -s_j.c:
            return 2
        raise Inconsistent(f"two different sections on line {s_i.line.name}")
    return intersection_datum(s_i, s_j).intersection_number


def height_pairing(s_i, s_j):
    """<P_i, P_j> as a Fraction; 3/2 on the diagonal, +-1/2 off it."""
    # 1 + s_i.O + s_j.O - s_i.s_j - 1/2 with s.O = 0 for bitangent sections
    return 1 - Fraction(intersection_number(s_i, s_j)) - Fraction(1, 2)


@dataclass(frozen=True)
class SignMatrix:
    indices: tuple
    entries: tuple

    def __post_init__(self):
        n = len(self.indices)
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise ValueError("sign matrix must be square and match its index list")

    @property
    def size(self):
        return len(self.indices)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def upper(self):
        n = self.size
        return [self.entries[i][j] for i in range(n) for j in range(i + 1, n)]

    @property
    def minus_count(self):
        """m_I: number of -1 entries above the diagonal."""
        return sum(1 for v in self.upper() if v == -1)

    def tolist(self):
        return [list(row) for row in self.entries]

    def is_valid(self):
        n = self.size
        return all(
            self.entries[i][j] == (3 if i == j else self.entries[j][i]) and (i == j or self.entries[i][j] in (1, -1))
            for i in range(n)
            for j in range(n)
        )

    def submatrix(self, positions):
        positions = tuple(positions)
        return SignMatrix(
            tuple(self.indices[p] for p in positions),
            tuple(tuple(self.entries[p][q] for q in positions) for p in positions),
        )

    @classmethod
    def from_upper(cls, upper, indices=None):
        """Build from the off-diagonal upper entries listed row by row."""
        upper = list(upper)
        n = 1
        while n * (n - 1) // 2 < len(upper):
            n += 1
        if n * (n - 1) // 2 != len(upper):
            raise ValueError("upper entries do not fill a triangle")
        rows = [[3] * n for _ in range(n)]
        it = iter(upper)
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = rows[j][i] = next(it)
        return cls(tuple(indices or range(1, n + 1)), tuple(tuple(r) for r in rows))

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.entries) + "]"


class PairingTable:
    """All pairwise sign entries of a list of sections, computed once.

    ``labels`` name the sections in matrices and reports (default: 1-based positions).
    """

    def __init__(self, sections, labels=None):
        self.sections = list(sections)
        self.labels = list(labels) if labels is not None else list(range(1, len(self.sections) + 1))
        self.data = {}
        for i, j in combinations(range(len(self.sections)), 2):
            datum = intersection_datum(self.sections[i], self.sections[j], self.labels[i], self.labels[j])
            self.data[i, j] = datum

    def __len__(self):
        return len(self.sections)

    def sign(self, i, j):
        if i == j:
            return 3
        return self.data[min(i, j), max(i, j)].sign

    def gram(self, positions=None):
        positions = range(len(self.sections)) if positions is None else positions
        positions = list(positions)
        return SignMatrix(
            tuple(self.labels[p] for p in positions),
            tuple(tuple(self.sign(p, q) for q in positions) for p in positions),
        )


def gram_matrix(sections, labels=None):
    """Twice the height-pairing Gram matrix of the given sections."""
    if len(sections) < 2:
        raise ValueError("gram_matrix needs at least two sections")
    return PairingTable(sections, labels).gram()
