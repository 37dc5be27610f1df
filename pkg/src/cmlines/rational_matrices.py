"""GL2+(Q) calculus: normalized left content, triangular normal forms,
separating and dominating right factors, and the three-matrix obstruction.

Two matrices are equivalent when one is a nonzero-scalar-times-SL2(Z)
left multiple of the other; the normalized left content gcd(a,c)^2/det is
the basic invariant, and it equals the level of the j-map z -> j(Az).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional


def gcd_q(x, y) -> Fraction:
    """The nonnegative delta with xZ + yZ = delta Z; gcd_q(0, 0) = 0."""
    x, y = Fraction(x), Fraction(y)
    if not x and not y:
        return Fraction(0)
    num = gcd(x.numerator * y.denominator, y.numerator * x.denominator)
    return Fraction(num, x.denominator * y.denominator)


@dataclass(frozen=True)
class RationalMatrix:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.det <= 0:
            raise ValueError("matrix must have positive determinant")

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "RationalMatrix":
        det = self.det
        return RationalMatrix(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def scaled(self, scalar) -> "RationalMatrix":
        scalar = Fraction(scalar)
        return RationalMatrix(scalar * self.a, scalar * self.b, scalar * self.c, scalar * self.d)

    def entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)


IDENTITY = RationalMatrix(1, 0, 0, 1)


@dataclass(frozen=True)
class NormalForm:
    """Class representative [[a, b], [0, 1]] with a = nlc and b in [0, 1)."""

    a: Fraction
    b: Fraction

    def matrix(self) -> RationalMatrix:
        return RationalMatrix(self.a, self.b, 0, 1)


def nlc(m: RationalMatrix) -> Fraction:
    """Normalized left content gcd(a, c)^2 / det; invariant of the class."""
    return gcd_q(m.a, m.c) ** 2 / m.det


def normal_form(m: RationalMatrix) -> NormalForm:
    """Upper-triangular class representative, by the Bezout row operation.

    Clearing the left column with an SL2(Z) row step gives [[delta, e], [0, f]]
    with delta = gcd(a, c) and f = det/delta; scaling by 1/f lands on
    [[nlc, b], [0, 1]], and b is then reduced modulo 1.
    """
    delta = gcd_q(m.a, m.c)
    x, y = m.a / delta, m.c / delta  # coprime integers
    g, u, v = _ext_gcd(int(x), int(y))
    assert g == 1
    # [[u, v], [-y, x]] in SL2(Z) sends column (a, c) to (delta, 0)
    e = u * m.b + v * m.d
    f = m.det / delta
    return NormalForm(delta / f, (e / f) % 1)


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    if y == 0:
        return (abs(x), 1 if x >= 0 else -1, 0)
    g, u, v = _ext_gcd(y, x % y)
    return g, v, u - (x // y) * v


def equivalent(m1: RationalMatrix, m2: RationalMatrix) -> bool:
    return normal_form(m1) == normal_form(m2)


def level_and_twist_exponent(m: RationalMatrix) -> tuple[Fraction, Fraction]:
    """(level, mu mod 1) of the j-map z -> j(m z): j(A z) = j(level*z + mu)."""
    form = normal_form(m)
    return form.a, form.b


def separating_matrix(m1: RationalMatrix, m2: RationalMatrix) -> RationalMatrix:
    """B with nlc(m1 B) != nlc(m2 B), for non-equivalent m1, m2.

    Construction: nothing to do if the contents already differ; otherwise
    move to (I, [[1, b], [0, 1]]) with b not an integer by right-multiplying
    with m1^-1 and left-normalizing, and take [[1, 0], [-1/b, 1]].
    """
    if equivalent(m1, m2):
        raise ValueError("matrices are equivalent; no separating matrix exists")
    if nlc(m1) != nlc(m2):
        return IDENTITY
    r = m1.inverse()
    if nlc(m1 @ r) != nlc(m2 @ r):
        return r
    form = normal_form(m2 @ r)
    assert form.a == 1 and form.b != 0
    b = form.b
    candidate = r @ RationalMatrix(1, 0, -1 / b, 1)
    assert nlc(m1 @ candidate) != nlc(m2 @ candidate)
    return candidate


def dominant_matrix(m1: RationalMatrix, m2: RationalMatrix, m3: RationalMatrix) -> RationalMatrix:
    """B making exactly one of nlc(m_k B) strictly larger than the other two.

    Follows the three-matrix construction: reduce the pair with equal content
    to [[1, b1], [0, 1]], [[1, b2], [0, 1]] and the third to a diagonal, then
    use [[1, 0], [-1/b1, 1]]; a three-way case analysis shows one content
    always wins.  The first matrix produced in this order is returned.
    """
    ms = (m1, m2, m3)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if equivalent(ms[i], ms[j]):
            raise ValueError("matrices must be pairwise non-equivalent")

    values = [nlc(m) for m in ms]
    if _has_strict_max(values):
        return IDENTITY

    for i, j in ((0, 1), (0, 2), (1, 2)):
        if values[i] != values[j]:
            continue
        anchor = 3 - i - j
        forms = [normal_form(m).matrix() for m in ms]
        r0 = forms[anchor].inverse()
        scale = nlc(forms[i] @ r0)
        r = r0 @ RationalMatrix(1 / scale, 0, 0, 1)
        # now nlc(m_i r) = nlc(m_j r) = 1 and nlc(m_anchor r) = 1/scale
        fi, fj = normal_form(ms[i] @ r), normal_form(ms[j] @ r)
        assert fi.a == 1 and fj.a == 1
        b1 = fi.b if fi.b != 0 else fj.b
        assert b1 != 0, "non-equivalent unit-content matrices differ by a non-integer shift"
        candidate = r @ RationalMatrix(1, 0, -1 / b1, 1)
        if _has_strict_max([nlc(m @ candidate) for m in ms]):
            return candidate
    raise AssertionError("dominant matrix construction failed; inputs may violate the preconditions")


def _has_strict_max(values) -> bool:
    top = max(values)
    return sum(1 for v in values if v == top) == 1


# -- the three-matrix obstruction ------------------------------------------------

EXAMPLE_TRIPLE = (
    IDENTITY,
    RationalMatrix(1, Fraction(1, 2), 0, 1),
    RationalMatrix(4, 0, 0, 1),
)


def counterexample_audit(b: RationalMatrix) -> bool:
    """At least two of nlc(A_k B) coincide for the fixed obstruction triple."""
    values = [nlc(a @ b) for a in EXAMPLE_TRIPLE]
    return len(set(values)) < 3


def counterexample_case(b: RationalMatrix) -> Optional[tuple[int, int]]:
    """Which pair is predicted to collide, from the 2-adic valuation of the
    normalized top-left entry (None when the left column is (*, 0))."""
    if b.c == 0:
        return (1, 2)
    scaled = b.scaled(2 / b.c)
    a = scaled.a
    if a == 0 or _ord2(a) > 0:  # a = 0 behaves like infinite 2-adic valuation
        return (2, 3)
    if _ord2(a) == 0:
        return (1, 3)
    return (1, 2)


def _ord2(x: Fraction) -> int:
    if x == 0:
        raise ValueError("ord_2(0) is undefined")
    n, out = x.numerator, 0
    while n % 2 == 0:
        n //= 2
        out += 1
    d = x.denominator
    while d % 2 == 0:
        d //= 2
        out -= 1
    return out
