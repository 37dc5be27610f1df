"""Exact arithmetic in cyclotomic fields and the root-of-unity lemma checks.

Elements of Q(zeta_N) are rational-coefficient vectors over the power basis
1, zeta, ..., zeta^(phi(N)-1), reduced modulo the N-th cyclotomic polynomial.
Mixed-order arithmetic embeds both operands into Q(zeta_lcm); results are not
descended to smaller subfields (only is_root_of_unity and minimal_degree look
for smaller structure).

The module also houses executable forms of the two root-of-unity lemmas:
the divisibility bound (a sum of k roots divisible by N is 0 or has k >= |N|)
and the classification of quadratic two-term combinations a*eta + b*theta,
together with exhaustive finite-order audits of both.
"""

from __future__ import annotations

import cmath
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Iterable, Optional, Sequence


@lru_cache(maxsize=None)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as sorted ((p, exponent), ...)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    phi = 1
    for p, a in _factorize(n):
        phi *= p ** (a - 1) * (p - 1)
    return phi


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# Integer polynomial helpers (ascending coefficient lists).


def _poly_mul(p: Sequence, q: Sequence) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi:
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
    return out


def _poly_divmod_exact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Quotient of an exact integer polynomial division (remainder must be 0)."""
    num = list(num)
    dlead = den[-1]
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        coeff = num[k + len(den) - 1]
        assert coeff % dlead == 0
        q = coeff // dlead
        out[k] = q
        if q:
            for j, dj in enumerate(den):
                num[k + j] -= q * dj
    assert not any(num), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending, computed by recursive exact division."""
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul(den, cyclotomic_polynomial(d))
    return tuple(_poly_divmod_exact(num, den))


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """zeta_n^e reduced over the power basis, as integer rows, for e = 0..n-1."""
    phi = euler_phi(n)
    phi_poly = cyclotomic_polynomial(n)
    # x^phi = -(Phi_n - x^phi), a fixed integer recurrence.
    top = [-c for c in phi_poly[:phi]]
    rows: list[tuple[int, ...]] = []
    cur = [0] * phi
    cur[0] = 1
    rows.append(tuple(cur))
    for _ in range(1, n):
        lead = cur[-1]
        nxt = [0] + cur[:-1]
        if lead:
            nxt[0] = 0  # shifted-in slot, then fold the overflow back
            for i in range(phi):
                nxt[i] = (cur[i - 1] if i else 0) + lead * top[i]
        cur = nxt
        rows.append(tuple(cur))
    return tuple(rows)


@lru_cache(maxsize=None)
def _units(n: int) -> tuple[int, ...]:
    return tuple(t for t in range(1, n + 1) if gcd(t, n) == 1)


# ---------------------------------------------------------------------------
# Roots of unity.


@dataclass(frozen=True)
class RootOfUnity:
    """zeta_order^exponent, stored with order minimal and 0 <= exponent < order."""

    order: int
    exponent: int

    def __post_init__(self) -> None:
        n, k = self.order, self.exponent % self.order
        g = gcd(k, n) if k else n
        object.__setattr__(self, "order", n // g)
        object.__setattr__(self, "exponent", k // g)

    @property
    def mu(self) -> Fraction:
        """Exponent as a fraction of a full turn (the twist exponent mu mod 1)."""
        return Fraction(self.exponent, self.order)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        n = _lcm(self.order, other.order)
        return RootOfUnity(n, self.exponent * (n // self.order) + other.exponent * (n // other.order))

    def __truediv__(self, other: "RootOfUnity") -> "RootOfUnity":
        return self * other.inverse()

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exponent * k)

    def __neg__(self) -> "RootOfUnity":
        return self * RootOfUnity(2, 1)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exponent)

    def is_one(self) -> bool:
        return self.order == 1

    def to_complex(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.exponent / self.order)

    def __repr__(self) -> str:
        return f"zeta({self.order})^{self.exponent}"


ONE = RootOfUnity(1, 0)
MINUS_ONE = RootOfUnity(2, 1)


def all_roots_of_unity(max_order: int) -> list[RootOfUnity]:
    """Every root of unity of exact order <= max_order."""
    return [RootOfUnity(n, k) for n in range(1, max_order + 1) for k in _units(n) if k < n or n == 1]


# ---------------------------------------------------------------------------
# Cyclotomic numbers.


class CyclotomicNumber:
    """Element of Q(zeta_order) over the power basis, coords of length phi(order)."""

    __slots__ = ("order", "coords")

    def __init__(self, order: int, coords: Iterable[Fraction]) -> None:
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != euler_phi(order):
            raise ValueError(f"need phi({order}) = {euler_phi(order)} coordinates, got {len(coords)}")
        self.order = order
        self.coords = coords

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls, value, order: int = 1) -> "CyclotomicNumber":
        coords = [Fraction(0)] * euler_phi(order)
        coords[0] = Fraction(value)
        return cls(order, coords)

    @classmethod
    def from_root(cls, root: RootOfUnity, order: Optional[int] = None) -> "CyclotomicNumber":
        n = root.order if order is None else order
        if n % root.order:
            raise ValueError(f"{root} does not embed into Q(zeta_{n})")
        e = root.exponent * (n // root.order)
        return cls(n, [Fraction(c) for c in _power_table(n)[e]])

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CyclotomicNumber":
        return cls.from_root(RootOfUnity(n, k))

    # -- representation helpers ---------------------------------------------

    def lift(self, order: int) -> "CyclotomicNumber":
        """Embed into Q(zeta_order); requires self.order | order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift from order {self.order} to {order}")
        step = order // self.order
        poly = [Fraction(0)] * ((len(self.coords) - 1) * step + 1)
        for i, c in enumerate(self.coords):
            poly[i * step] = c
        return CyclotomicNumber(order, _reduce_mod_phi(poly, order))

    def _unify(self, other: "CyclotomicNumber") -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        n = _lcm(self.order, other.order)
        return self.lift(n), other.lift(n)

    @staticmethod
    def _coerce(value, order: int = 1) -> "CyclotomicNumber":
        if isinstance(value, CyclotomicNumber):
            return value
        if isinstance(value, RootOfUnity):
            return CyclotomicNumber.from_root(value)
        if isinstance(value, (int, Fraction)):
            return CyclotomicNumber.rational(value, order)
        raise TypeError(f"cannot coerce {value!r} into a cyclotomic number")

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coords[0]

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "CyclotomicNumber":
        a, b = self._unify(self._coerce(other))
        return CyclotomicNumber(a.order, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.order, [-x for x in self.coords])

    def __sub__(self, other) -> "CyclotomicNumber":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CyclotomicNumber":
        return (-self) + other

    def __mul__(self, other) -> "CyclotomicNumber":
        other = self._coerce(other)
        if other.is_rational():
            q = other.coords[0]
            return CyclotomicNumber(self.order, [q * x for x in self.coords])
        if self.is_rational():
            q = self.coords[0]
            return CyclotomicNumber(other.order, [q * x for x in other.coords])
        a, b = self._unify(other)
        prod = _poly_mul(a.coords, b.coords)
        return CyclotomicNumber(a.order, _reduce_mod_phi(prod, a.order))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic division by zero")
        if self.is_rational():
            return CyclotomicNumber.rational(1 / self.coords[0], self.order)
        inv = _invert_mod_phi(list(self.coords), self.order)
        return CyclotomicNumber(self.order, inv)

    def __truediv__(self, other) -> "CyclotomicNumber":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "CyclotomicNumber":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "CyclotomicNumber":
        if k < 0:
            return self.inverse() ** (-k)
        out = CyclotomicNumber.rational(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._unify(other)
        return a.coords == b.coords

    def __repr__(self) -> str:
        return f"CyclotomicNumber(order={self.order}, coords={self.coords})"

    # -- Galois action --------------------------------------------------------

    def galois_image(self, t: int) -> "CyclotomicNumber":
        """Image under zeta -> zeta^t; t must be a unit mod the order."""
        n = self.order
        if gcd(t, n) != 1:
            raise ValueError(f"{t} is not a unit modulo {n}")
        table = _power_table(n)
        phi = euler_phi(n)
        out = [Fraction(0)] * phi
        for i, c in enumerate(self.coords):
            if c:
                row = table[(i * t) % n]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CyclotomicNumber(n, out)

    def galois_orbit(self) -> list["CyclotomicNumber"]:
        seen: dict[tuple, CyclotomicNumber] = {}
        for t in _units(self.order):
            img = self.galois_image(t)
            seen.setdefault(img.coords, img)
        return list(seen.values())

    def to_complex(self) -> complex:
        zeta = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * zeta ** i for i, c in enumerate(self.coords))


def _reduce_mod_phi(poly: Sequence[Fraction], n: int) -> list[Fraction]:
    """Remainder of poly modulo Phi_n (monic), over Q."""
    phi = euler_phi(n)
    phi_poly = cyclotomic_polynomial(n)
    rem = [Fraction(c) for c in poly]
    for k in range(len(rem) - 1, phi - 1, -1):
        lead = rem[k]
        if lead:
            rem[k] = Fraction(0)
            for j in range(phi):
                rem[k - phi + j] -= lead * phi_poly[j]
    rem = rem[:phi]
    rem += [Fraction(0)] * (phi - len(rem))
    return rem


def _invert_mod_phi(poly: list[Fraction], n: int) -> list[Fraction]:
    """Inverse of poly modulo Phi_n by the extended Euclidean algorithm."""
    phi_poly = [Fraction(c) for c in cyclotomic_polynomial(n)]

    def degree(p):
        for i in range(len(p) - 1, -1, -1):
            if p[i]:
                return i
        return -1

    def divmod_poly(a, b):
        a = a[:]
        db, lb = degree(b), b[degree(b)]
        q = [Fraction(0)] * (max(degree(a) - db, -1) + 1)
        while degree(a) >= db:
            da, la = degree(a), a[degree(a)]
            coeff = la / lb
            q[da - db] = coeff
            for j in range(db + 1):
                a[da - db + j] -= coeff * b[j]
        return q, a

    # Invariant: r0 = s0 * poly (mod Phi), r1 = s1 * poly (mod Phi).
    r0, r1 = phi_poly, poly[:]
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while degree(r1) > 0:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, [a - b for a, b in itertools.zip_longest(s0, _poly_mul(q, s1), fillvalue=Fraction(0))]
    if degree(r1) != 0:
        raise ZeroDivisionError("element is not invertible modulo the cyclotomic polynomial")
    c = r1[degree(r1)]
    inv = [x / c for x in s1]
    return _reduce_mod_phi(inv, n)


def embed(root: RootOfUnity, order: Optional[int] = None) -> CyclotomicNumber:
    """Root of unity as an exact cyclotomic number."""
    return CyclotomicNumber.from_root(root, order)


def is_root_of_unity(x: CyclotomicNumber) -> Optional[RootOfUnity]:
    """The root equal to x, if any.

    The torsion of Q(zeta_N)* has order lcm(2, N), so x is a root of unity
    exactly when x^lcm(2,N) = 1; the witness is then located by comparison.
    """
    if x.is_zero():
        return None
    n = _lcm(2, x.order)
    if x ** n != CyclotomicNumber.rational(1):
        return None
    lifted = x.lift(n) if n != x.order else x
    table = _power_table(n)
    for e in range(n):
        if lifted.coords == tuple(Fraction(c) for c in table[e]):
            return RootOfUnity(n, e)
    raise AssertionError(f"x^{n} = 1 but no witness exponent found for {x!r}")


def minimal_degree(x: CyclotomicNumber) -> int:
    """Degree of x over Q, as the size of its Galois orbit."""
    return len(x.galois_orbit())


def minimal_polynomial(x: CyclotomicNumber) -> list[Fraction]:
    """Monic minimal polynomial of x over Q (ascending rational coefficients)."""
    orbit = x.galois_orbit()
    poly = [CyclotomicNumber.rational(1, x.order)]
    for root in orbit:
        # poly *= (X - root)
        shifted = [CyclotomicNumber.rational(0, x.order)] + poly
        scaled = [(-root) * c for c in poly] + [CyclotomicNumber.rational(0, x.order)]
        poly = [a + b for a, b in zip(shifted, scaled)]
        poly = poly[: len(orbit) + 1]
    coeffs = []
    for c in poly:
        if not c.is_rational():
            raise AssertionError("orbit product must have rational coefficients")
        coeffs.append(c.rational_value())
    return coeffs


# ---------------------------------------------------------------------------
# Integral coordinates of sums of roots (tensor basis over prime powers).
#
# Z[zeta_L] has the integral basis formed by products of the prime-power
# power bases; a sum of roots of unity has integer coordinates there, which
# decides both vanishing and divisibility by a rational integer exactly.


def _prime_power_expansion(p: int, a: int, e: int) -> dict[int, int]:
    big_p = p ** a
    phi = big_p - big_p // p
    e %= big_p
    if e < phi:
        return {e: 1}
    r = e - phi
    return {r + i * (big_p // p): -1 for i in range(p - 1)}


def _root_integral_coords(root: RootOfUnity, ambient: int) -> dict[tuple[int, ...], int]:
    e = root.exponent * (ambient // root.order) % ambient
    parts = [_prime_power_expansion(p, a, e) for p, a in _factorize(ambient)]
    if not parts:  # ambient == 1
        return {(): 1}
    combined: dict[tuple[int, ...], int] = {(): 1}
    for part in parts:
        combined = {
            key + (exp,): sign * s for key, sign in combined.items() for exp, s in part.items()
        }
    return combined


def sum_integral_coords(roots: Sequence[RootOfUnity]) -> dict[tuple[int, ...], int]:
    """Integer coordinates of sum(roots) in the tensor integral basis of Q(zeta_lcm)."""
    ambient = reduce(_lcm, (r.order for r in roots), 1)
    total: dict[tuple[int, ...], int] = defaultdict(int)
    for root in roots:
        for key, sign in _root_integral_coords(root, ambient).items():
            total[key] += sign
    return {k: v for k, v in total.items() if v}


def divisibility_bound_check(roots: Sequence[RootOfUnity], n: int) -> bool:
    """Executable form of the divisibility bound for alpha = sum(roots).

    True iff alpha = 0, or alpha/n is not an algebraic integer, or
    len(roots) >= |n| -- i.e. the lemma's conclusion holds on this instance.
    """
    if n == 0:
        raise ValueError("n must be a nonzero integer")
    if len(roots) >= abs(n):
        return True
    coords = sum_integral_coords(roots)
    if not coords:
        return True  # alpha = 0
    return any(v % n for v in coords.values())


# ---------------------------------------------------------------------------
# Classification of quadratic two-term combinations a*eta + b*theta.


_FIELD_BY_SQUAREFREE = {
    -1: "Q(i)",
    -2: "Q(sqrt-2)",
    -3: "Q(sqrt-3)",
    2: "Q(sqrt2)",
    3: "Q(sqrt3)",
    5: "Q(sqrt5)",
}

KNOWN_QUADRATIC_FIELDS = ("Q",) + tuple(_FIELD_BY_SQUAREFREE.values())

CASE_LABELS = ("1a", "1b", "1c", "2a", "2b", "3", "4", "5", "6a", "6b", "7")


@dataclass(frozen=True)
class TwoTermClassification:
    degree: int
    field: str
    case: Optional[str]
    alpha: CyclotomicNumber = field(repr=False, compare=False)


def _squarefree_part(n: int) -> int:
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    for p, a in _factorize(n):
        if a % 2:
            out *= p
    return sign * out


def _case_matches(label: str, a: Fraction, eta: RootOfUnity, b: Fraction, theta: RootOfUnity) -> bool:
    inv = eta.inverse()
    if label == "1a":
        return eta.order <= 2 and theta.order <= 2
    if label == "1b":
        return eta.order == 3 and theta == inv and a == b
    if label == "1c":
        return theta == -eta and a == b
    if label == "2a":
        return eta == RootOfUnity(4, 1) and theta in (ONE, RootOfUnity(4, 1))
    if label == "2b":
        return eta.order == 12 and theta == -inv and a == b
    if label == "3":
        return eta.order == 3 and theta.order in (1, 3)
    if label == "4":
        return eta.order == 8 and theta == -inv and a == b
    if label == "5":
        return eta.order == 8 and theta == inv and a == b
    if label == "6a":
        return eta.order == 12 and theta == inv and a == b
    if label == "6b":
        return eta.order == 12 and theta == -(eta ** 3) and a == 2 * b
    if label == "7":
        return eta.order == 5 and theta == inv and a == b
    raise ValueError(label)


def classify_two_term(a, b, eta: RootOfUnity, theta: RootOfUnity) -> Optional[TwoTermClassification]:
    """Identify the field and lemma case of alpha = a*eta + b*theta.

    Returns None when alpha has degree > 2 over Q.  Otherwise the generated
    field is named, and the matching enumerated case is searched over the 8
    allowed transformations (swap of the two terms, two sign flips); the
    lexicographically first matching label is reported, None if none match
    (the classification lemma predicts that never happens).
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("both coefficients must be nonzero")
    alpha = embed(eta) * a + embed(theta) * b
    degree = minimal_degree(alpha)
    if degree > 2:
        return None
    if degree == 1:
        fieldname = "Q"
    else:
        mp = minimal_polynomial(alpha)
        p, q = mp[1], mp[0]
        disc = p * p - 4 * q
        square_core = _squarefree_part(disc.numerator * disc.denominator)
        fieldname = _FIELD_BY_SQUAREFREE.get(square_core, f"Q(sqrt({square_core}))")

    candidates = []
    for swap in (False, True):
        aa, ee, bb, tt = (b, theta, a, eta) if swap else (a, eta, b, theta)
        for flip_first in (False, True):
            a1, e1 = (-aa, -ee) if flip_first else (aa, ee)
            for flip_second in (False, True):
                b1, t1 = (-bb, -tt) if flip_second else (bb, tt)
                for label in CASE_LABELS:
                    if _case_matches(label, a1, e1, b1, t1):
                        candidates.append(label)
    case = min(candidates) if candidates else None
    return TwoTermClassification(degree, fieldname, case, alpha)


# ---------------------------------------------------------------------------
# Finite audits.


@dataclass
class QuadraticAuditReport:
    max_order: int
    coefficients: tuple[Fraction, ...]
    pairs_checked: int
    quadratic_instances: int
    case_counts: dict[str, int]
    unclassified: list[tuple]
    unknown_fields: list[tuple]

    @property
    def passed(self) -> bool:
        return not self.unclassified and not self.unknown_fields


_DEFAULT_COEFFS = (1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 3, -3)


def audit_quadratic_classification(
    max_order: int = 30, coefficients: Sequence = _DEFAULT_COEFFS
) -> QuadraticAuditReport:
    """Exhaustive audit of the two-term classification over bounded orders.

    For every pair of roots of order <= max_order and every coefficient pair,
    each instance of degree <= 2 must classify into exactly one enumerated
    case with its field among the seven known ones.

    Degrees are prefiltered numerically: once three Galois-orbit values are
    pairwise separated by more than 1e-6 (evaluation error is ~1e-12), the
    degree is certainly >= 3.  Everything below that bar is settled exactly.
    """
    coefficients = tuple(Fraction(c) for c in coefficients)
    roots = all_roots_of_unity(max_order)
    powers = {n: [cmath.exp(2j * cmath.pi * k / n) for k in range(n)] for n in range(1, max_order + 1)}

    pairs_checked = 0
    quadratic = 0
    case_counts: dict[str, int] = defaultdict(int)
    unclassified: list[tuple] = []
    unknown_fields: list[tuple] = []
    ray_cache: dict[tuple, Optional[TwoTermClassification]] = {}

    for eta, theta in itertools.product(roots, repeat=2):
        ambient = _lcm(eta.order, theta.order)
        units = _units(ambient)
        pe, pt = powers[eta.order], powers[theta.order]
        ke, ne, kt, nt = eta.exponent, eta.order, theta.exponent, theta.order
        for a in coefficients:
            fa = float(a)
            for b in coefficients:
                pairs_checked += 1
                fb = float(b)
                reps: list[complex] = []
                for t in units:
                    v = fa * pe[ke * t % ne] + fb * pt[kt * t % nt]
                    for r in reps:
                        if abs(v - r) <= 1e-6:
                            break
                    else:
                        reps.append(v)
                        if len(reps) >= 3:
                            break
                if len(reps) >= 3:
                    continue
                ray = (a / b, eta, theta)
                if ray in ray_cache:
                    result = ray_cache[ray]
                else:
                    result = classify_two_term(a, b, eta, theta)
                    ray_cache[ray] = result
                if result is None:
                    continue  # exact degree > 2 despite the numeric merge
                quadratic += 1
                if result.case is None:
                    unclassified.append((a, b, eta, theta))
                else:
                    case_counts[result.case] += 1
                if result.field not in KNOWN_QUADRATIC_FIELDS:
                    unknown_fields.append((a, b, eta, theta, result.field))

    return QuadraticAuditReport(
        max_order=max_order,
        coefficients=coefficients,
        pairs_checked=pairs_checked,
        quadratic_instances=quadratic,
        case_counts=dict(case_counts),
        unclassified=unclassified,
        unknown_fields=unknown_fields,
    )


def audit_divisibility_bound(max_roots: int = 4, max_order: int = 12, max_n: int = 6) -> list[tuple]:
    """All multisets of <= max_roots roots of order <= max_order against all
    0 < |n| <= max_n; returns the violating instances (expected: none)."""
    roots = all_roots_of_unity(max_order)
    violations = []
    for k in range(1, max_roots + 1):
        for multiset in itertools.combinations_with_replacement(roots, k):
            coords = sum_integral_coords(multiset)
            if not coords:
                continue  # alpha = 0 satisfies the bound for every n
            for n in range(k + 1, max_n + 1):
                # |n| <= k passes trivially; only larger |n| can fail, and
                # then only if every coordinate is divisible by n.
                if not any(v % n for v in coords.values()):
                    violations.append((multiset, n))
                    violations.append((multiset, -n))
    return violations


def audit_three_root_sums(max_order: int = 30) -> list[tuple]:
    """Check that three roots of unity summing to 0 are proportional to
    (1, zeta_3, zeta_3^2); returns violating triples (expected: none)."""
    roots = all_roots_of_unity(max_order)
    values = [r.to_complex() for r in roots]
    zeta3 = RootOfUnity(3, 1)
    cubic_pair = {zeta3, zeta3 ** 2}
    violations = []
    n = len(roots)
    for i in range(n):
        for j in range(i + 1, n):
            partial = values[i] + values[j]
            if abs(partial) > 2.0 + 1e-9:
                continue
            for k in range(j + 1, n):
                if abs(partial + values[k]) > 0.5:
                    continue
                triple = (roots[i], roots[j], roots[k])
                if sum_integral_coords(triple):
                    continue  # nonzero sum, nothing to check
                ratios = {triple[1] / triple[0], triple[2] / triple[0]}
                if ratios != cubic_pair:
                    violations.append(triple)
    return violations
