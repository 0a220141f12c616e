"""Floating-point cross-checks that do not use the exact section pipeline.

find_bitangents_numeric solves for lines x = a t + b along which F is a perfect
square; connected_number_numeric rebuilds the lift graph from numeric square
roots of F|_L evaluated at the pairwise meeting points.
"""

import cmath
import contextlib
from dataclasses import dataclass
from itertools import combinations

import mpmath
import numpy as np

from .errors import AmbiguousMatch, ConvergenceShortfall, DegenerateConfiguration
from .exactfield import embed_mp, elem_embed
from .topology import UnionFind

RESIDUAL_TOL = 1e-8
MATCH_TOL = 1e-6
DEDUP_TOL = 1e-6


@dataclass(frozen=True)
class NumericLine:
    a: complex
    b: complex
    residual: float


@dataclass(frozen=True)
class NumericCurve:
    """Curve coefficients under one complex embedding, constant term first."""

    p: tuple
    q: tuple
    r: tuple

    @classmethod
    def embed(cls, curve, k=1):
        def emb(poly):
            return tuple(elem_embed(c, k) for c in poly.coeffs)

        return cls(emb(curve.p), emb(curve.q), emb(curve.r))

    def restrict(self, a, b):
        """Coefficients s0..s4 of F(t, a t + b)."""
        x = np.array([b, a], dtype=complex)
        out = np.zeros(5, dtype=complex)
        x2 = np.convolve(x, x)
        out[:4] += np.convolve(x2, x)
        for coeffs, power in ((self.p, x2), (self.q, x)):
            if coeffs:
                term = np.convolve(np.array(coeffs, dtype=complex), power)
                out[: len(term)] += term[:5]
        out[: len(self.r)] += np.array(self.r, dtype=complex)
        return out


def _square_defect(s):
    """(s1 - 2 s4 beta gamma, s0 - s4 gamma^2) after completing F|_L = s4 (t^2 + beta t + gamma)^2."""
    s0, s1, s2, s3, s4 = s
    beta = s3 / (2 * s4)
    gamma = (s2 / s4 - beta * beta) / 2
    return np.array([s1 - 2 * s4 * beta * gamma, s0 - s4 * gamma * gamma]), beta, gamma


def line_residual(ncurve, a, b):
    """Relative perfect-square defect of F|_L; inf when F|_L drops below degree 4."""
    s = ncurve.restrict(a, b)
    if abs(s[4]) < 1e-12 * max(1.0, np.max(np.abs(s))):
        return np.inf
    defect, _, _ = _square_defect(s)
    return float(np.max(np.abs(defect)) / max(1.0, np.max(np.abs(s))))


def _identities(ncurve, v):
    """F|_L - s4 (t^2 + beta t + gamma)^2, coefficients t^3 .. t^0, in unknowns (a, b, beta, gamma)."""
    a, b, beta, gamma = v
    s0, s1, s2, s3, s4 = ncurve.restrict(a, b)
    return np.array([
        s3 - 2 * s4 * beta,
        s2 - s4 * (beta * beta + 2 * gamma),
        s1 - 2 * s4 * beta * gamma,
        s0 - s4 * gamma * gamma,
    ])


def _newton(fun, z, max_iter=80):
    """Damped Newton with a central-difference Jacobian (the system is holomorphic)."""
    f = fun(z)
    for _ in range(max_iter):
        norm = np.linalg.norm(f)
        if norm < 1e-14 * (1 + np.linalg.norm(z)):
            break
        jac = np.empty((len(f), len(z)), dtype=complex)
        for col in range(len(z)):
            h = 1e-7 * (1 + abs(z[col]))
            e = np.zeros(len(z), dtype=complex)
            e[col] = h
            jac[:, col] = (fun(z + e) - fun(z - e)) / (2 * h)
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        while lam > 1e-4:
            trial = z + lam * step
            ft = fun(trial)
            if np.all(np.isfinite(ft)) and np.linalg.norm(ft) < norm:
                z, f = trial, ft
                break
            lam /= 2
        else:
            return None
        if np.max(np.abs(z)) > 1e6:
            return None
    return z


def _tangent_starts(ncurve, t1):
    """Starting points from the tangent lines at the (up to three) curve points over t1.

    Such a line already touches Q at t1; the second tangency is guessed at the
    midpoint of the two remaining intersections.
    """
    P = np.polynomial.Polynomial
    p, q, r = (P(list(c) or [0]) for c in (ncurve.p, ncurve.q, ncurve.r))
    starts = []
    for x1 in P([r(t1), q(t1), p(t1), 1]).roots():
        fx = 3 * x1 * x1 + 2 * p(t1) * x1 + q(t1)
        ft = p.deriv()(t1) * x1 * x1 + q.deriv()(t1) * x1 + r.deriv()(t1)
        if abs(fx) < 1e-12:
            continue
        a = -ft / fx
        b = x1 - a * t1
        cofactor = (P(ncurve.restrict(a, b)) // P([t1 * t1, -2 * t1, 1])).coef
        if len(cofactor) < 3 or cofactor[2] == 0:
            continue
        t2 = -cofactor[1] / (2 * cofactor[2])
        starts.append(np.array([a, b, -(t1 + t2), t1 * t2], dtype=complex))
    return starts


def find_bitangents_numeric(curve, k=1, seeds=200, rng_seed=0, residual_tol=RESIDUAL_TOL, expected=None):
    """Lines x = a t + b along which F is numerically a perfect square.

    Each seed is a random complex base point t1; the tangent lines to Q over t1
    start a damped Newton iteration on the perfect-square identities
    F|_L = s4 (t^2 + beta t + gamma)^2 in the unknowns (a, b, beta, gamma).
    Converged lines pass a residual gate, are deduplicated and sorted.  Raises
    ConvergenceShortfall (lines attached) only when ``expected`` is given and
    not reached.
    """
    if seeds < 1:
        raise ValueError("seeds must be positive")
    ncurve = curve if isinstance(curve, NumericCurve) else NumericCurve.embed(curve, k)
    rng = np.random.default_rng(rng_seed)

    def fun(v):
        return _identities(ncurve, v)

    found = []
    for _ in range(seeds):
        # log-uniform radius: bitangent tangency points can be far from the origin
        t1 = np.exp(rng.uniform(-2.0, 2.0)) * cmath.exp(2j * np.pi * rng.uniform())
        for start in _tangent_starts(ncurve, t1):
            z = _newton(fun, start)
            if z is None:
                continue
            a, b = complex(z[0]), complex(z[1])
            res = line_residual(ncurve, a, b)
            if res > residual_tol:
                continue
            if any(abs(a - ln.a) + abs(b - ln.b) < DEDUP_TOL * (1 + abs(ln.a) + abs(ln.b)) for ln in found):
                continue
            found.append(NumericLine(a, b, res))
    found.sort(key=lambda ln: (round(ln.a.real, 6), round(ln.a.imag, 6), round(ln.b.real, 6), round(ln.b.imag, 6)))
    if expected is not None and len(found) < expected:
        raise ConvergenceShortfall(f"found {len(found)} of {expected} bitangents", found)
    return found


# --- connected numbers ----------------------------------------------------------

def _as_numeric(line, k, precision):
    if isinstance(line, NumericLine):
        return line.a, line.b
    if isinstance(line, tuple):
        return line
    if precision > 53:
        return embed_mp(line.a, k, precision), embed_mp(line.b, k, precision)
    return elem_embed(line.a, k), elem_embed(line.b, k)


def _embed_curve_mp(curve, k, precision):
    return tuple(tuple(embed_mp(c, k, precision) for c in poly.coeffs) for poly in (curve.p, curve.q, curve.r))


def _restrict_generic(pqr, a, b):
    """F(t, a t + b) coefficients with whatever scalar type a, b carry."""
    p, q, r = pqr
    x = [b, a]

    def mul(u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, ui in enumerate(u):
            for j, vj in enumerate(v):
                out[i + j] += ui * vj
        return out

    x2 = mul(x, x)
    s = [0] * 5
    for i, c in enumerate(mul(x2, x)):
        s[i] += c
    for coeffs, power in ((p, x2), (q, x)):
        if coeffs:
            for i, c in enumerate(mul(list(coeffs), power)):
                if i < 5:
                    s[i] += c
    for i, c in enumerate(r):
        s[i] += c
    return s


class _Sheet:
    """A single-valued square root w(t) = sigma * sqrt(s4) * (t^2 + beta t + gamma) of F|_L."""

    def __init__(self, pqr, a, b, sigma, sqrt):
        s = _restrict_generic(pqr, a, b)
        s0, s1, s2, s3, s4 = s
        self.coeffs = s
        if abs(s4) < 1e-12 * max(1, *(abs(c) for c in s)):
            raise DegenerateConfiguration("F|_L has degree below 4: not a bitangent in x = a t + b form")
        self.beta = s3 / (2 * s4)
        self.gamma = (s2 / s4 - self.beta * self.beta) / 2
        self.lead = sigma * sqrt(s4)

    def __call__(self, t):
        return self.lead * (t * t + self.beta * t + self.gamma)

    def defect(self, t):
        f = sum(c * t**i for i, c in enumerate(self.coeffs))
        w = self(t)
        return abs(w * w - f) / max(1, abs(f))


def connected_number_numeric(curve, lines, k=1, tolerance=MATCH_TOL, precision=53, signs=None):
    """Component count of the lift graph built from numeric sheets.

    ``lines`` are BitangentLine (embedded via ``k``), NumericLine, or (a, b)
    complex pairs.  ``signs`` optionally fixes the sheet sign of each line;
    the result does not depend on it.
    """
    extended = precision > 53
    signs = signs or [1] * len(lines)
    with mpmath.workprec(precision) if extended else contextlib.nullcontext():
        if extended:
            sqrt, pqr = mpmath.sqrt, _embed_curve_mp(curve, k, precision)
        else:
            nc = NumericCurve.embed(curve, k)
            sqrt, pqr = cmath.sqrt, (nc.p, nc.q, nc.r)
        coords = [_as_numeric(ln, k, precision) for ln in lines]
        sheets = [_Sheet(pqr, a, b, sg, sqrt) for (a, b), sg in zip(coords, signs)]
        for sheet in sheets:
            for t in (0.3 + 0.1j, -1.2 + 0.7j, 2.5):
                if sheet.defect(t) > max(tolerance, 1e-9):
                    raise DegenerateConfiguration("line is not numerically a bitangent: F|_L is not a square")
        uf = UnionFind(2 * len(lines))
        for i, j in combinations(range(len(lines)), 2):
            (ai, bi), (aj, bj) = coords[i], coords[j]
            scale_a = max(1, abs(ai), abs(aj))
            if abs(ai - aj) < tolerance * scale_a:
                if abs(bi - bj) < tolerance * max(1, abs(bi), abs(bj)):
                    raise DegenerateConfiguration(f"lines {i + 1} and {j + 1} coincide numerically")
                wi, wj = sheets[i].lead, sheets[j].lead  # limit of w / t^2 as t -> infinity
            else:
                t0 = (bj - bi) / (ai - aj)
                wi, wj = sheets[i](t0), sheets[j](t0)
            scale = max(1, abs(wi), abs(wj))
            same = abs(wi - wj) < tolerance * scale
            opposite = abs(wi + wj) < tolerance * scale
            if same and opposite:
                raise AmbiguousMatch(f"lines {i + 1}, {j + 1}: both lifts vanish at the meeting point (on the curve?)")
            if not (same or opposite):
                raise AmbiguousMatch(f"lines {i + 1}, {j + 1}: lift values agree neither up to + nor - sign")
            u, v = 2 * i, 2 * j
            if same:
                uf.union(u, v)
                uf.union(u + 1, v + 1)
            else:
                uf.union(u, v + 1)
                uf.union(u + 1, v)
        return uf.count
