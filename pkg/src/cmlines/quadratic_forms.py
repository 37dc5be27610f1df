"""Reduced binary quadratic forms, class numbers and Gauss composition.

Forms (a, b, c) of negative discriminant b^2 - 4ac are the exact handles on
singular moduli: every modulus of discriminant D corresponds to exactly one
reduced primitive form.  The composition law turns the set of reduced forms
into a finite abelian group whose squaring behaviour ("two-elementarity") is
what the Galois-theoretic arguments downstream consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, NamedTuple


class ReducedForm(NamedTuple):
    """Primitive reduced form a*x^2 + b*x*y + c*y^2, a > 0."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


class Tau(NamedTuple):
    """Exact point (b + sqrt(D)) / (2a) in the upper half-plane.

    The real part is ``re``; the imaginary part is ``im_coeff * sqrt(|D|)``.
    """

    re: Fraction
    im_coeff: Fraction
    disc: int


def is_discriminant(d: int) -> bool:
    """True iff d is a negative integer congruent to 0 or 1 mod 4."""
    return d < 0 and d % 4 in (0, 1)


def _require_discriminant(d: int) -> None:
    if not is_discriminant(d):
        raise ValueError(f"{d} is not a negative discriminant (need d < 0, d = 0,1 mod 4)")


def _is_reduced(a: int, b: int, c: int) -> bool:
    return (-a < b <= a < c) or (0 <= b <= a == c)


def reduced_forms(d: int) -> list[ReducedForm]:
    """All primitive reduced forms of discriminant d, sorted by (a, b, c).

    Enumerates a from 1 to floor(sqrt(|d|/3)); for each a runs over the b
    with |b| <= a and b = d (mod 2), and keeps triples where c comes out
    integral, reduced and primitive.
    """
    _require_discriminant(d)
    forms = []
    for a in range(1, isqrt(-d // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - d) % 2 != 0:
                continue
            num = b * b - d
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if not _is_reduced(a, b, c):
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            forms.append(ReducedForm(a, b, c))
    forms.sort()
    return forms


def class_number(d: int) -> int:
    return len(reduced_forms(d))


def principal_form(d: int) -> ReducedForm:
    """The unique reduced form with a = 1."""
    _require_discriminant(d)
    b = -d % 2
    return ReducedForm(1, b, (b * b - d) // 4)


def tau_of_form(form: ReducedForm, d: int) -> Tau:
    """tau(a,b,c) = (b + sqrt(d)) / (2a); Im tau >= sqrt(3)/2 for reduced forms."""
    if form.discriminant != d:
        raise ValueError(f"form {form} does not have discriminant {d}")
    return Tau(Fraction(form.b, 2 * form.a), Fraction(1, 2 * form.a), d)


@dataclass(frozen=True)
class FormClassInfo:
    """The full class group data of one discriminant."""

    discriminant: int
    forms: tuple[ReducedForm, ...]
    h: int

    def __iter__(self) -> Iterator[ReducedForm]:
        return iter(self.forms)


def form_class_info(d: int) -> FormClassInfo:
    forms = reduced_forms(d)
    return FormClassInfo(d, tuple(forms), len(forms))


def _reduce(a: int, b: int, c: int) -> ReducedForm:
    # Standard reduction: normalize |b| <= a, then swap outer coefficients
    # while a > c.  Each swap strictly decreases a, so this terminates.
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if not (-a < b <= a):
            r = (a - b) // (2 * a)
            b2 = b + 2 * r * a
            c = a * r * r + b * r + c
            b = b2
            continue
        if a == c and b < 0:
            b = -b
            continue
        return ReducedForm(a, b, c)


def _transform(form: ReducedForm, p: int, q: int, r: int, s: int) -> tuple[int, int, int]:
    # Action of [[p, r], [q, s]] in SL2(Z): substitute x -> p x + r y, y -> q x + s y.
    a, b, c = form
    a2 = a * p * p + b * p * q + c * q * q
    b2 = 2 * a * p * r + b * (p * s + q * r) + 2 * c * q * s
    c2 = a * r * r + b * r * s + c * s * s
    return a2, b2, c2


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    if y == 0:
        return abs(x), (1 if x > 0 else -1) if x else 0, 0
    g, u, v = _ext_gcd(y, x % y)
    return g, v, u - (x // y) * v


def _with_coprime_leading(form: ReducedForm, m: int) -> tuple[int, int, int]:
    """An SL2(Z)-equivalent triple whose leading coefficient is coprime to m.

    A primitive form represents integers coprime to any fixed m; search small
    coprime vectors (p, q) and complete them to a unimodular matrix.
    """
    if gcd(form.a, m) == 1:
        return form.a, form.b, form.c
    bound = 1
    while True:
        bound += 1
        for p in range(-bound, bound + 1):
            for q in range(-bound, bound + 1):
                if gcd(p, q) != 1:
                    continue
                value = form.a * p * p + form.b * p * q + form.c * q * q
                if value != 0 and gcd(value, m) == 1:
                    g, u, v = _ext_gcd(p, q)
                    # p*s - q*r = 1 with (r, s) = (-v, u)
                    return _transform(form, p, q, -v, u)


def compose(f: ReducedForm, g: ReducedForm, d: int) -> ReducedForm:
    """Gauss/Dirichlet composition of two classes, returned reduced.

    g is first moved to an equivalent triple whose leading coefficient is
    coprime to that of f; then the classical coprime composition applies:
    pick B = b1 mod 2a1, B = b2 mod 2a2 and take (a1 a2, B, (B^2-d)/(4 a1 a2)).
    """
    _require_discriminant(d)
    if f.discriminant != d or g.discriminant != d:
        raise ValueError("forms must share the discriminant")
    a1, b1, _ = f
    a2, b2, _ = _with_coprime_leading(g, f.a)
    # CRT for B: B = b1 (mod 2 a1), B = b2 (mod 2 a2).  Solvable because
    # gcd(2 a1, 2 a2) = 2 divides b2 - b1 (both b share the parity of d).
    g0, u, _ = _ext_gcd(2 * a1, 2 * a2)
    assert (b2 - b1) % g0 == 0
    t = u * ((b2 - b1) // g0) % (2 * a2 // g0)
    big_b = (b1 + 2 * a1 * t) % (2 * a1 * a2)
    assert (big_b - b1) % (2 * a1) == 0 and (big_b - b2) % (2 * a2) == 0
    a3 = a1 * a2
    assert (big_b * big_b - d) % (4 * a3) == 0
    c3 = (big_b * big_b - d) // (4 * a3)
    return _reduce(a3, big_b, c3)


def inverse_form(f: ReducedForm) -> ReducedForm:
    return _reduce(f.a, -f.b, f.c)


def class_group_is_two_elementary(d: int) -> bool:
    """True iff every class squares to the principal class."""
    principal = principal_form(d)
    return all(compose(f, f, d) == principal for f in reduced_forms(d))
