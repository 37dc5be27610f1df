"""CM-points and the search for non-special lines through three of them.

The rational CM-points are the 169 pairs of class-number-one singular moduli;
lines through them are found exactly, by hashing the canonical primitive
integer line of every point pair.  Beyond the rational range, points are
embedded numerically at controlled precision, screened for near-collinear
triples, and certified exactly when all six coordinates live in Q or in a
single real quadratic field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Optional

from mpmath import mp, mpf, workprec

from .jfunction import TABLE1, PrecisionConfig, hilbert_class_polynomial, singular_modulus
from .quadratic_forms import is_discriminant, reduced_forms


@dataclass(frozen=True)
class Line:
    """Primitive integer line Ax + By + C = 0, first nonzero coefficient positive."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if (self.a, self.b) == (0, 0):
            raise ValueError("a line needs (A, B) != (0, 0)")
        g = gcd(gcd(abs(self.a), abs(self.b)), abs(self.c))
        a, b, c = self.a // g, self.b // g, self.c // g
        lead = a if a else b
        if lead < 0:
            a, b, c = -a, -b, -c
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def contains(self, x: int, y: int) -> bool:
        return self.a * x + self.b * y + self.c == 0

    def key(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def is_special_line(line: Line) -> bool:
    """Vertical, horizontal, or the diagonal x = y.

    Within a CM-point set a vertical line through two points necessarily sits
    at a singular modulus, so rejecting every vertical/horizontal line is the
    exact version of the special-line filter here.
    """
    if line.b == 0 or line.a == 0:
        return True
    return line.a == -line.b and line.c == 0


class SpecialLineFilter:
    """Predicate object rejecting x = const, y = const and x = y."""

    def __call__(self, line: Line) -> bool:
        return not is_special_line(line)


def rational_cm_points() -> list[tuple[int, int]]:
    """All 169 pairs of rational singular moduli, sorted."""
    values = sorted(TABLE1.values())
    return [(x, y) for x in values for y in values]


def line_through(p: tuple[int, int], q: tuple[int, int]) -> Line:
    """Canonical primitive integer line through two distinct rational points."""
    if p == q:
        raise ValueError("need two distinct points")
    (x1, y1), (x2, y2) = p, q
    return Line(y1 - y2, x2 - x1, x1 * y2 - x2 * y1)


def find_collinear_triples(
    points: Iterable[tuple[int, int]], line_filter: Optional[SpecialLineFilter] = None
) -> dict[Line, tuple[tuple[int, int], ...]]:
    """Every non-special line through >= 3 distinct input points, with its points.

    Hashes the canonical line of each point pair, so the cost is quadratic in
    the number of points.
    """
    if line_filter is None:
        line_filter = SpecialLineFilter()
    points = sorted(set(points))
    by_line: dict[Line, set] = {}
    for p, q in itertools.combinations(points, 2):
        line = line_through(p, q)
        by_line.setdefault(line, set()).add(p)
        by_line[line].add(q)
    return {
        line: tuple(sorted(members))
        for line, members in sorted(by_line.items(), key=lambda kv: kv[0].key())
        if len(members) >= 3 and line_filter(line)
    }


# ---------------------------------------------------------------------------
# Numeric screening beyond the rational range.


@dataclass(frozen=True)
class EmbeddedPoint:
    """A CM-point with coordinates given by (discriminant, reduced-form index)."""

    x_disc: int
    x_index: int
    y_disc: int
    y_index: int


@dataclass(frozen=True)
class ScreenCandidate:
    points: tuple[EmbeddedPoint, EmbeddedPoint, EmbeddedPoint]
    det_bound: float
    exact_verified: bool
    line: Optional[Line]  # exact line when all coordinates are rational

    def to_json(self) -> dict:
        return {
            "points": [
                [p.x_disc, p.x_index, p.y_disc, p.y_index] for p in self.points
            ],
            "det_bound": self.det_bound,
            "exact_verified": self.exact_verified,
            "line": list(self.line.key()) if self.line else None,
        }


@dataclass(frozen=True)
class _QuadraticValue:
    """u + v*sqrt(d) with rational u, v and squarefree d > 1 (v = 0 means rational)."""

    u: Fraction
    v: Fraction
    d: int


def _squarefree_decompose(n: int) -> tuple[int, int]:
    """n = s^2 * d with d squarefree; returns (s, d), n > 0."""
    s, d = 1, n
    f = 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            s *= f
        f += 1
    return s, d


def _exact_coordinates(disc: int) -> Optional[list[_QuadraticValue]]:
    """Exact singular moduli of disc as quadratic values, for h(disc) <= 2.

    For h = 2 the class polynomial X^2 + AX + C has the two real moduli as
    roots (-A +- sqrt(A^2 - 4C)) / 2, ordered to match the reduced-form list
    (principal form first has the largest absolute value).
    """
    forms = reduced_forms(disc)
    if len(forms) == 1:
        return [_QuadraticValue(Fraction(TABLE1[disc]), Fraction(0), 1)]
    if len(forms) != 2:
        return None
    poly = hilbert_class_polynomial(disc)
    const, middle = poly.coefficients[0], poly.coefficients[1]
    square = middle * middle - 4 * const
    if square <= 0:
        return None
    s, d = _squarefree_decompose(square)
    if d == 1:
        return None  # rational roots cannot occur for h = 2, defensive only
    root_plus = _QuadraticValue(Fraction(-middle, 2), Fraction(s, 2), d)
    root_minus = _QuadraticValue(Fraction(-middle, 2), Fraction(-s, 2), d)
    # principal modulus is the largest in absolute value; map it to form index 0
    plus_val = float(root_plus.u) + float(root_plus.v) * d ** 0.5
    minus_val = float(root_minus.u) + float(root_minus.v) * d ** 0.5
    if abs(plus_val) >= abs(minus_val):
        return [root_plus, root_minus]
    return [root_minus, root_plus]


def _quadratic_det(xs: list[_QuadraticValue], ys: list[_QuadraticValue]) -> Optional[bool]:
    """Exact zero test of the collinearity determinant when all coordinates lie
    in Q or in a single Q(sqrt(d)); None when fields are mixed."""
    ds = {v.d for v in xs + ys if v.v != 0}
    if len(ds) > 1:
        return None
    d = ds.pop() if ds else 1

    def mul(p: tuple[Fraction, Fraction], q: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
        return (p[0] * q[0] + d * p[1] * q[1], p[0] * q[1] + p[1] * q[0])

    def sub(p, q):
        return (p[0] - q[0], p[1] - q[1])

    x = [(v.u, v.v) for v in xs]
    y = [(v.u, v.v) for v in ys]
    # det [[1,1,1],[x1,x2,x3],[y1,y2,y3]]
    t1 = mul(sub(x[1], x[0]), sub(y[2], y[0]))
    t2 = mul(sub(x[2], x[0]), sub(y[1], y[0]))
    det = sub(t1, t2)
    return det == (Fraction(0), Fraction(0))


def numeric_screen(
    max_disc: int, cfg: PrecisionConfig = PrecisionConfig(128), tol: Fraction = Fraction(1, 10 ** 20)
) -> list[ScreenCandidate]:
    """Enumerate CM-points with both |discriminants| <= max_disc and report
    every distinct non-special triple whose collinearity determinant has
    absolute value below tol.

    Only real singular moduli enter (a real line through two real points
    cannot pass through a point with a non-real coordinate).  Triples are
    prefiltered in double precision with an explicit rounding-error bound,
    then confirmed at working precision; candidates whose six coordinates
    all lie in Q or one real quadratic field are settled exactly and flagged
    exact_verified.
    """
    import numpy as np

    if max_disc < 3:
        raise ValueError("max_disc must be at least 3")
    discs = [-n for n in range(3, max_disc + 1) if is_discriminant(-n)]
    modulus_keys: list[tuple[int, int]] = []
    modulus_values: list[mpf] = []
    with workprec(cfg.working_bits):
        for d in discs:
            for idx, form in enumerate(reduced_forms(d)):
                value = singular_modulus(d, form, cfg)
                if abs(value.imag) < mpf(2) ** (-cfg.working_bits // 2):
                    modulus_keys.append((d, idx))
                    modulus_values.append(value.real)

    n_mod = len(modulus_keys)
    point_keys = [(ix, iy) for ix in range(n_mod) for iy in range(n_mod)]
    xs = np.array([float(modulus_values[ix]) for ix, _ in point_keys])
    ys = np.array([float(modulus_values[iy]) for _, iy in point_keys])
    n_pts = len(point_keys)

    # Double-precision determinants carry an absolute error below
    # ~16 * max|coord|^2 * 2^-52; anything coarsely larger is a certain reject.
    scale = max(1.0, float(np.max(np.abs(xs))), float(np.max(np.abs(ys))))
    coarse = max(16.0 * scale * scale * 2.0 ** -52 * 8, float(tol) * 2)

    survivors: list[tuple[int, int, int]] = []
    for i in range(n_pts - 2):
        dx = xs[i + 1:] - xs[i]
        dy = ys[i + 1:] - ys[i]
        dets = np.outer(dx, dy)
        dets -= dets.T  # antisymmetric: entry (j, k) is the det of (i, j, k)
        np.fill_diagonal(dets, np.inf)
        hits = np.argwhere(np.abs(dets) < coarse)
        for j, k in hits:
            if j < k:
                survivors.append((i, i + 1 + int(j), i + 1 + int(k)))

    exact_cache: dict[int, Optional[list[_QuadraticValue]]] = {}

    def exact_coord(disc: int):
        if disc not in exact_cache:
            exact_cache[disc] = _exact_coordinates(disc)
        return exact_cache[disc]

    tol_mp = mpf(tol.numerator) / tol.denominator
    out = []
    with workprec(cfg.working_bits):
        for i, j, k in survivors:
            triple_keys = [point_keys[t] for t in (i, j, k)]
            if len({kx for kx, _ in triple_keys}) == 1:
                continue  # vertical line x = singular modulus: special
            if len({ky for _, ky in triple_keys}) == 1:
                continue  # horizontal line: special
            if all(kx == ky for kx, ky in triple_keys):
                continue  # all three on the diagonal x = y: special
            vals = [(modulus_values[kx], modulus_values[ky]) for kx, ky in triple_keys]
            (x1, y1), (x2, y2), (x3, y3) = vals
            det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
            if abs(det) >= tol_mp:
                continue
            pts = tuple(
                EmbeddedPoint(modulus_keys[kx][0], modulus_keys[kx][1], modulus_keys[ky][0], modulus_keys[ky][1])
                for kx, ky in triple_keys
            )
            exact = None
            line = None
            xcoords = [exact_coord(p.x_disc) for p in pts]
            ycoords = [exact_coord(p.y_disc) for p in pts]
            if all(v is not None for v in xcoords + ycoords):
                xvals = [xcoords[n][pts[n].x_index] for n in range(3)]
                yvals = [ycoords[n][pts[n].y_index] for n in range(3)]
                exact = _quadratic_det(xvals, yvals)
                if exact and all(v.v == 0 for v in xvals + yvals):
                    rational_pts = [(int(xvals[n].u), int(yvals[n].u)) for n in range(3)]
                    line = line_through(rational_pts[0], rational_pts[1])
            out.append(
                ScreenCandidate(points=pts, det_bound=float(abs(det)), exact_verified=bool(exact), line=line)
            )
    out.sort(key=lambda c: [(t.x_disc, t.x_index, t.y_disc, t.y_index) for t in c.points])
    return out
