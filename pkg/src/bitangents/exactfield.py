"""Exact arithmetic in cyclotomic fields Q(zeta_n) and polynomials over them.

Elements are stored in the power basis 1, z, ..., z^(d-1) (d = phi(n)) and kept
reduced modulo the n-th cyclotomic polynomial, so coordinate equality is field
equality.  Rational scalars are :class:`fractions.Fraction`.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, isqrt

import mpmath

from .errors import (
    DivisionByZero,
    FieldMismatch,
    InvalidEmbedding,
    NoSquareRoot,
    PrecisionExhausted,
)

Rational = Fraction

NEG_INF = float("-inf")  # degree of the zero polynomial

DEFAULT_SQRT_PRECISION = 256
DEFAULT_DENOMINATOR_BOUND = 2**64


# --- dense polynomials over Q, low degree first ---------------------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _qdivmod(num, den):
    num = [Fraction(c) for c in num]
    den = _trim(den)
    if not den:
        raise DivisionByZero("polynomial division by zero")
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    lead = Fraction(den[-1])
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / lead
        quot[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    return _trim(quot), _trim(num[: len(den) - 1])


def _qmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _qsub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def euler_phi(n):
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of Phi_n, constant term first.

    Phi_n = (x^n - 1) / prod(Phi_d for d | n, d < n), by exact division.
    """
    if n < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {n}")
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _qdivmod(num, cyclotomic_polynomial(d))
            if rem:
                raise ArithmeticError(f"Phi_{d} does not divide x^{n}-1")
    assert all(c.denominator == 1 for c in num)
    return tuple(int(c) for c in num)


# --- fields ---------------------------------------------------------------

class CyclotomicField:
    """The field Q(zeta_n), zeta_n = exp(2*pi*i/n).  Use :func:`field_make`."""

    def __init__(self, order):
        if not isinstance(order, int) or order < 1:
            raise ValueError(f"cyclotomic order must be a positive integer, got {order!r}")
        self.order = order
        self.modulus = cyclotomic_polynomial(order)
        self.degree = len(self.modulus) - 1
        # z^m mod Phi_n for d <= m <= 2d-2, used by multiplication
        d = self.degree
        self._high_powers = {}
        for m in range(d, 2 * d - 1):
            _, rem = _qdivmod([0] * m + [1], self.modulus)
            self._high_powers[m] = tuple(rem) + (Fraction(0),) * (d - len(rem))
        self.zero = FieldElement(self, (Fraction(0),) * d)
        self.one = self.from_rational(1)

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.order == self.order

    def __hash__(self):
        return hash(("CyclotomicField", self.order))

    def __repr__(self):
        return f"CyclotomicField({self.order})"

    def __reduce__(self):
        return field_make, (self.order,)

    def from_rational(self, value):
        coords = [Fraction(0)] * self.degree
        coords[0] = Fraction(value)
        return FieldElement(self, tuple(coords))

    def from_coords(self, coords):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError(
                f"expected {self.degree} coordinates for Q(zeta_{self.order}), got {len(coords)}"
            )
        return FieldElement(self, coords)

    def from_poly(self, coeffs):
        """Reduce an arbitrary Q-polynomial in zeta (constant first)."""
        _, rem = _qdivmod(coeffs, self.modulus)
        return FieldElement(self, tuple(rem) + (Fraction(0),) * (self.degree - len(rem)))

    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value.field!r} element used in {self!r}")
            return value
        if isinstance(value, (int, Fraction)):
            return self.from_rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    @property
    def zeta(self):
        return self.root_of_unity(1)

    def root_of_unity(self, m):
        """zeta_n ** m for any integer m."""
        m %= self.order
        if m < self.degree:
            coords = [Fraction(0)] * self.degree
            coords[m] = Fraction(1)
            return FieldElement(self, tuple(coords))
        return self.from_poly([0] * m + [1])

    def embeddings(self):
        """Exponents k with gcd(k, n) = 1, i.e. the embeddings zeta -> exp(2 pi i k / n)."""
        return [k for k in range(1, self.order + 1) if gcd(k, self.order) == 1][: self.degree]


@lru_cache(maxsize=None)
def field_make(order):
    return CyclotomicField(order)


# --- elements -------------------------------------------------------------

class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        field = self.field
        d = field.degree
        raw = [Fraction(0)] * (2 * d - 1)
        right = [(j, b) for j, b in enumerate(other.coords) if b]
        for i, a in enumerate(self.coords):
            if a:
                for j, b in right:
                    raw[i + j] += a * b
        out = raw[:d]
        for m in range(d, 2 * d - 1):
            c = raw[m]
            if c:
                for j, r in enumerate(field._high_powers[m]):
                    if r:
                        out[j] += c * r
        return FieldElement(field, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise DivisionByZero("inverse of zero field element")
        # extended Euclid: s*a + t*Phi = g, g a nonzero constant
        r0, r1 = list(self.field.modulus), _trim(self.coords)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qsub(s0, _qmul(q, s1))
        c = r1[0]
        return self.field.from_poly([x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            base, exponent = self.inverse(), -exponent
        acc = self.field.one
        while exponent:
            if exponent & 1:
                acc = acc * base
            base = base * base
            exponent >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field.order, self.coords))

    def __bool__(self):
        return any(self.coords)

    def is_rational(self):
        return not any(self.coords[1:])

    def galois(self, k):
        """Image under the automorphism zeta -> zeta^k (gcd(k, n) = 1)."""
        n = self.field.order
        if gcd(k, n) != 1:
            raise InvalidEmbedding(f"k={k} is not a unit mod {n}")
        raw = [Fraction(0)] * n
        for j, c in enumerate(self.coords):
            raw[(j * k) % n] += c
        return self.field.from_poly(raw)

    def embed(self, k=1, precision=53):
        return elem_embed(self, k, precision)

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coords):
            if not c:
                continue
            mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def elem_embed(a, k=1, precision=53):
    """Complex value of ``a`` under zeta -> exp(2 pi i k / n), computed at ``precision`` bits."""
    n = a.field.order
    if gcd(k, n) != 1:
        raise InvalidEmbedding(f"k={k} is not coprime to n={n}")
    return complex(embed_mp(a, k, precision))


def embed_mp(a, k, precision):
    with mpmath.workprec(precision + 16):
        n = a.field.order
        total = mpmath.mpc(0)
        for j, c in enumerate(a.coords):
            if c:
                total += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(mpmath.mpf(2 * k * j) / n)
        return total


# --- square roots ---------------------------------------------------------

def _rational_sqrt(q):
    if q < 0:
        return None
    p, r = isqrt(q.numerator), isqrt(q.denominator)
    if p * p == q.numerator and r * r == q.denominator:
        return Fraction(p, r)
    return None


def _sqrt_fast(a):
    """Try a = r * zeta^m with r a rational square; None if that shape does not apply."""
    field = a.field
    n = field.order
    for m in range(n):
        b = a * field.root_of_unity(-m)
        if not b.is_rational():
            continue
        r = _rational_sqrt(b.coords[0])
        if r is None:
            continue
        if m % 2 == 0:
            return field.root_of_unity(m // 2) * r
        if n % 2 == 1:
            return field.root_of_unity((m + n) // 2) * r
    return None


def _to_fraction(x):
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    man = -int(man) if sign else int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def sqrt_in_field(a, precision=DEFAULT_SQRT_PRECISION, denominator_bound=DEFAULT_DENOMINATOR_BOUND):
    """Return s in the field of ``a`` with s*s == a.

    Tries the root-of-unity shape first.  Otherwise takes numeric square roots
    of every complex embedding, runs through the sign choices on conjugate
    pairs, solves for power-basis coordinates, rounds them to rationals with
    bounded continued fractions and keeps the first candidate that squares to
    ``a`` exactly.
    """
    if not a:
        raise NoSquareRoot("sqrt of zero requested; precondition a != 0")
    field = a.field
    if field.degree == 1:
        r = _rational_sqrt(a.coords[0])
        if r is None:
            raise NoSquareRoot(f"{a} is not a square in Q")
        return field.from_rational(r)

    s = _sqrt_fast(a)
    if s is not None and s * s == a:
        return s

    n, d = field.order, field.degree
    ks = field.embeddings()
    reps = [k for k in ks if 2 * k < n]  # one of each conjugate pair (k, n-k)
    # must sit far below denominator_bound**-2, the typical error of a bounded
    # continued-fraction approximation to an irrational coordinate
    tol = mpmath.mpf(2) ** (-(precision - 40))
    near_rational = False
    with mpmath.workprec(precision):
        vander = mpmath.matrix(d, d)
        for row, k in enumerate(ks):
            for j in range(d):
                vander[row, j] = mpmath.expjpi(mpmath.mpf(2 * k * j) / n)
        vander_inv = vander**-1
        roots = {k: mpmath.sqrt(embed_mp(a, k, precision)) for k in reps}
        for signs in product((1, -1), repeat=len(reps) - 1):
            signs = (1,) + signs  # s and -s are both roots; fix the first sign
            rhs = mpmath.matrix(d, 1)
            for row, k in enumerate(ks):
                if 2 * k < n:
                    rhs[row] = signs[reps.index(k)] * roots[k]
                else:
                    rhs[row] = mpmath.conj(signs[reps.index(n - k)] * roots[n - k])
            sol = vander_inv * rhs
            coords, ok = [], True
            for j in range(d):
                x = mpmath.re(sol[j])
                q = _to_fraction(x).limit_denominator(denominator_bound)
                scale = max(mpmath.mpf(1), abs(x))
                if abs(mpmath.im(sol[j])) > tol * scale or abs(x - mpmath.mpf(q.numerator) / q.denominator) > tol * scale:
                    ok = False
                    break
                coords.append(q)
            if not ok:
                continue
            near_rational = True
            cand = field.from_coords(coords)
            if cand * cand == a:
                return cand
    if near_rational:
        raise PrecisionExhausted(
            f"rational candidates for sqrt({a}) failed exact verification at {precision} bits"
        )
    raise NoSquareRoot(f"{a} has no square root in Q(zeta_{n})")


# --- polynomials over a cyclotomic field ----------------------------------

class Poly:
    """Univariate polynomial over a :class:`CyclotomicField`, coefficients low degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def t(cls, field):
        return cls(field, (0, 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine polynomials over {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return Poly(self.field, (other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self or not other:
            return Poly(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        acc = Poly(self.field, (1,))
        for _ in range(e):
            acc = acc * self
        return acc

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(self.field), self
        inv_lc = other.lc().inverse()
        quot = [self.field.zero] * (dq + 1)
        for i in range(dq, -1, -1):
            c = rem[i + len(other.coeffs) - 1] * inv_lc
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * b
        return Poly(self.field, quot), Poly(self.field, rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, FieldElement)):
            return self == Poly(self.field, (other,))
        return NotImplemented

    def __hash__(self):
        return hash((self.field.order, self.coeffs))

    def __call__(self, x):
        x = self.field(x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return Poly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if not self:
            return self
        inv = self.lc().inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def scale(self, c):
        c = self.field(c)
        return Poly(self.field, [a * c for a in self.coeffs])

    def __repr__(self):
        if not self:
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("*t" if i == 1 else f"*t^{i}")
                parts.append(f"({c}){mono}")
        return "Poly(" + " + ".join(parts) + ")"


def poly_gcd(f, g):
    """Monic greatest common divisor (zero if both inputs are zero)."""
    while g:
        f, g = g, f % g
    return f.monic()
