"""Quartics x^3 + p(t) x^2 + q(t) x + r(t), bitangent lines x = a t + b and their sections.

A bitangent L restricts F to c0 * g(t)^2 with g a monic squarefree quadratic;
the section attached to it is y = s * g(t) with s^2 = c0.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .errors import FieldMismatch, HyperflexLine, NoSquareRoot, NoSquareRootInField, NotABitangent
from .exactfield import (
    DEFAULT_DENOMINATOR_BOUND,
    DEFAULT_SQRT_PRECISION,
    Poly,
    elem_embed,
    poly_gcd,
    sqrt_in_field,
)


@dataclass(frozen=True)
class QuarticCurve:
    field: object
    p: Poly
    q: Poly
    r: Poly

    def __post_init__(self):
        for name, poly, bound in (("p", self.p, 2), ("q", self.q, 3), ("r", self.r, 4)):
            if poly.field != self.field:
                raise FieldMismatch(f"coefficient {name} lives in {poly.field!r}, curve in {self.field!r}")
            if poly.degree > bound:
                raise ValueError(f"deg {name} = {poly.degree} exceeds {bound}")

    @classmethod
    def from_coeffs(cls, field, p=(), q=(), r=()):
        return cls(field, Poly(field, p), Poly(field, q), Poly(field, r))

    def __call__(self, t, x):
        return x * x * x + self.p(t) * x * x + self.q(t) * x + self.r(t)

    def partials(self, t, x):
        """(F_t, F_x) at the point (t, x)."""
        ft = self.p.derivative()(t) * x * x + self.q.derivative()(t) * x + self.r.derivative()(t)
        fx = 3 * x * x + 2 * self.p(t) * x + self.q(t)
        return ft, fx


@dataclass(frozen=True)
class BitangentLine:
    name: str
    a: object
    b: object

    def x_poly(self):
        return Poly(self.a.field, (self.b, self.a))

    def same_line(self, other):
        return self.a == other.a and self.b == other.b


@dataclass(frozen=True)
class BitangentSection:
    line: BitangentLine
    c: object
    d: object
    e: object

    def __post_init__(self):
        if not self.c:
            raise ValueError(f"section of {self.line.name}: leading coefficient c must be nonzero")

    @property
    def name(self):
        return self.line.name

    def y_poly(self):
        return Poly(self.c.field, (self.e, self.d, self.c))

    def negate(self):
        return BitangentSection(self.line, -self.c, -self.d, -self.e)


@dataclass(frozen=True)
class SignedSection:
    base: BitangentSection
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def y_poly(self):
        y = self.base.y_poly()
        return y if self.sign == 1 else -y


def restrict(curve, line):
    """F(t, a t + b) as a polynomial in t."""
    if line.a.field != curve.field or line.b.field != curve.field:
        raise FieldMismatch(f"line {line.name} and curve live in different fields")
    x = line.x_poly()
    return ((x + curve.p) * x + curve.q) * x + curve.r


def square_part(curve, line):
    """Return (c0, g) with F|_L = c0 * g^2, g monic quadratic with distinct roots.

    Raises NotABitangent, or HyperflexLine when g would have a double root.
    """
    f = restrict(curve, line)
    if f.degree != 4:
        raise NotABitangent(f"{line.name}: F|_L has degree {f.degree}, expected 4")
    c0 = f.lc()
    g = poly_gcd(f, f.derivative())
    if g.degree == 3:
        h = poly_gcd(g, g.derivative())
        if h.degree == 2 and h.scale(c0) * h == f:
            raise HyperflexLine(f"{line.name}: F|_L is a fourth power; contact of order 4")
    if g.degree != 2 or g.scale(c0) * g != f:
        raise NotABitangent(f"{line.name}: F|_L is not a constant times a square")
    if poly_gcd(g, g.derivative()).degree != 0:
        raise HyperflexLine(f"{line.name}: square part has a double root")
    return c0, g


def verify_bitangent(curve, line):
    try:
        square_part(curve, line)
    except NotABitangent:
        return False
    return True


def verify_section(curve, section):
    y = section.y_poly()
    return y * y == restrict(curve, section.line)


def derive_section(curve, line, precision=DEFAULT_SQRT_PRECISION, denominator_bound=DEFAULT_DENOMINATOR_BOUND):
    c0, g = square_part(curve, line)
    try:
        s = sqrt_in_field(c0, precision=precision, denominator_bound=denominator_bound)
    except NoSquareRoot as exc:
        raise NoSquareRootInField(
            f"{line.name}: leading coefficient {c0} has no square root in Q(zeta_{curve.field.order})"
        ) from exc
    y = g.scale(s)
    section = BitangentSection(line, y.coeff(2), y.coeff(1), y.coeff(0))
    assert verify_section(curve, section)
    return section


# --- combinatorial sanity ---------------------------------------------------

def intersection_point(l1, l2):
    """Affine meeting point (t0, x0) of two lines, or None when they are parallel."""
    if l1.a == l2.a:
        return None
    t0 = (l2.b - l1.b) / (l1.a - l2.a)
    return t0, l1.a * t0 + l1.b


def concurrent(l1, l2, l3):
    """Three lines through one point of P^2 (all-parallel triples meet at infinity)."""
    det = (l1.a - l2.a) * (l1.b - l3.b) - (l1.b - l2.b) * (l1.a - l3.a)
    return not det


@dataclass
class SanityReport:
    identical_pairs: list = dc_field(default_factory=list)
    concurrent_triples: list = dc_field(default_factory=list)
    on_curve_pairs: list = dc_field(default_factory=list)
    hyperflex_lines: list = dc_field(default_factory=list)
    warnings: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not (self.identical_pairs or self.concurrent_triples or self.on_curve_pairs or self.hyperflex_lines)

    def as_dict(self):
        return {
            "identical_pairs": [list(p) for p in self.identical_pairs],
            "concurrent_triples": [list(t) for t in self.concurrent_triples],
            "on_curve_pairs": [list(p) for p in self.on_curve_pairs],
            "hyperflex_lines": list(self.hyperflex_lines),
            "warnings": list(self.warnings),
        }


def curve_sanity(curve, lines):
    """Diagnose the configuration; indices in the report are positions in ``lines``."""
    report = SanityReport()
    for i, line in enumerate(lines):
        try:
            square_part(curve, line)
        except HyperflexLine:
            report.hyperflex_lines.append(i)
        except NotABitangent:
            report.warnings.append(f"{line.name} is not a bitangent")
    for i, j in combinations(range(len(lines)), 2):
        li, lj = lines[i], lines[j]
        if li.same_line(lj):
            report.identical_pairs.append((i, j))
            continue
        pt = intersection_point(li, lj)
        # parallel lines meet at [1:a:0], where F_Q equals the nonzero leading
        # coefficient of F|_L, so only finite meeting points can lie on Q
        if pt is not None and not curve(*pt):
            report.on_curve_pairs.append((i, j))
    for i, j, k in combinations(range(len(lines)), 3):
        li, lj, lk = lines[i], lines[j], lines[k]
        if li.same_line(lj) or li.same_line(lk) or lj.same_line(lk):
            continue
        if concurrent(li, lj, lk):
            report.concurrent_triples.append((i, j, k))
    return report


def smoothness_spot_check(curve, k=1, tol=1e-7):
    """Numeric, warning-level smoothness check of the affine part.

    Singular points sit over roots t* of the x-discriminant of F; at each such
    fiber take the repeated root x* and test whether F_t vanishes too.  Returns
    a list of warning strings (empty when nothing suspicious was found).
    """
    import numpy as np
    from numpy.polynomial import Polynomial as P

    def emb(poly):
        return P([elem_embed(c, k) for c in poly.coeffs] or [0])

    p, q, r = emb(curve.p), emb(curve.q), emb(curve.r)
    disc = p * p * q * q - 4 * q**3 - 4 * p**3 * r - 27 * r * r + 18 * p * q * r
    warnings = []
    if disc.trim().degree() < 1:
        if np.allclose(disc.coef, 0):
            warnings.append("x-discriminant vanishes identically: F has a repeated factor")
        return warnings
    for t in disc.roots():
        cubic = P([r(t), q(t), p(t), 1])
        xs = cubic.roots()
        x = min(xs, key=lambda x: abs(cubic.deriv()(x)))
        ft = p.deriv()(t) * x * x + q.deriv()(t) * x + r.deriv()(t)
        scale = 1 + abs(t) ** 4 + abs(x) ** 4
        if abs(ft) < tol * scale:
            warnings.append(f"possible singular point near t={t:.6g}, x={x:.6g}")
    return warnings
