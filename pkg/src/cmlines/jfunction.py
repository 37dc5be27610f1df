"""Numerical j-function machinery: q-expansion, singular moduli, class polynomials.

The Fourier coefficients of j are computed once, exactly, as the quotient of
integer power series E4(q)^3 / (Delta(q)/q) with Delta = q * prod (1-q^n)^24.
Numerical evaluation sums the expansion at binary precision chosen from an
explicit tail bound; class polynomials are certified by rounding each
coefficient to a nearby integer within a configured tolerance, escalating
precision when the rounding is not clean.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log, pi, sqrt
from typing import Optional, Union

from mpmath import mp, mpc, mpf, workprec

from .quadratic_forms import ReducedForm, Tau, class_number, reduced_forms, tau_of_form

J_BOUND_CONSTANT = 2079  # | |j(tau)| - e^(2 pi Im tau) | <= 2079 for Im tau >= sqrt(3)/2

# The thirteen discriminants of class number one and their (rational integer)
# singular moduli; every other singular modulus is irrational.
TABLE1: dict[int, int] = {
    -3: 0,
    -4: 1728,
    -7: -3375,
    -8: 8000,
    -11: -32768,
    -12: 54000,
    -16: 287496,
    -19: -884736,
    -27: -12288000,
    -28: 16581375,
    -43: -884736000,
    -67: -147197952000,
    -163: -262537412640768000,
}


class PrecisionError(RuntimeError):
    """Raised when integer certification fails after the allowed escalations."""


@dataclass(frozen=True)
class PrecisionConfig:
    working_bits: int = 256
    rounding_tolerance: Fraction = Fraction(1, 2 ** 32)

    def __post_init__(self) -> None:
        if self.working_bits < 64:
            raise ValueError("working_bits must be at least 64")

    def escalate(self) -> "PrecisionConfig":
        return PrecisionConfig(self.working_bits * 2, self.rounding_tolerance)


@dataclass(frozen=True)
class ClassPolynomial:
    """Monic integer polynomial with the singular moduli of one discriminant as roots."""

    discriminant: int
    coefficients: tuple[int, ...]  # ascending, constant term first

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def middle_coefficient(self) -> int:
        if self.degree != 2:
            raise ValueError("middle coefficient is defined for degree 2 only")
        return self.coefficients[1]


# -- exact Fourier coefficients ------------------------------------------------

_coeff_lock = threading.Lock()
_coeffs: list[int] = []


def _sigma3(n: int) -> int:
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def _series_mul(p: list[int], q: list[int], n_terms: int) -> list[int]:
    out = [0] * n_terms
    for i, pi in enumerate(p[:n_terms]):
        if pi:
            top = min(n_terms - i, len(q))
            for j in range(top):
                out[i + j] += pi * q[j]
    return out


def _euler_product(n_terms: int) -> list[int]:
    # prod (1 - q^n) by the pentagonal number theorem.
    out = [0] * n_terms
    out[0] = 1
    k = 1
    while True:
        p1 = k * (3 * k - 1) // 2
        p2 = k * (3 * k + 1) // 2
        if p1 >= n_terms and p2 >= n_terms:
            break
        sign = -1 if k % 2 else 1
        if p1 < n_terms:
            out[p1] += sign
        if p2 < n_terms:
            out[p2] += sign
        k += 1
    return out


def _series_inverse(p: list[int], n_terms: int) -> list[int]:
    assert p[0] == 1
    inv = [0] * n_terms
    inv[0] = 1
    for n in range(1, n_terms):
        acc = 0
        for k in range(1, min(n, len(p) - 1) + 1):
            if p[k]:
                acc += p[k] * inv[n - k]
        inv[n] = -acc
    return inv


def _compute_j_coefficients(count: int) -> list[int]:
    """First `count` coefficients c_(-1), c_0, ... of j = E4^3 / Delta."""
    n_terms = count
    e4 = [1] + [240 * _sigma3(n) for n in range(1, n_terms)]
    e4_cubed = _series_mul(_series_mul(e4, e4, n_terms), e4, n_terms)
    eta = _euler_product(n_terms)
    eta24 = eta
    for _ in range(3):  # eta^2, eta^4, eta^8
        eta24 = _series_mul(eta24, eta24, n_terms)
    eta24 = _series_mul(eta24, _series_mul(eta24, eta24, n_terms), n_terms)  # eta^24
    return _series_mul(e4_cubed, _series_inverse(eta24, n_terms), n_terms)


def j_coefficients(n_max: int) -> list[int]:
    """Coefficients c_(-1) .. c_(n_max) of the Fourier expansion of j."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    needed = n_max + 2
    with _coeff_lock:
        if len(_coeffs) < needed:
            _coeffs[:] = _compute_j_coefficients(max(needed, 2 * len(_coeffs)))
        return _coeffs[:needed]


# -- numerical evaluation -------------------------------------------------------


def _truncation_order(im_tau: float, bits: int) -> int:
    # Need sum_{n>N} c_n |q|^n < 2^-(bits+16) with |q| = e^(-2 pi Im tau) and
    # c_n < e^(4 pi sqrt(n)); take the first N whose next term bound is below
    # target and decays (the ratio test applies from n > (2/Im tau)^2 on).
    target = (bits + 16) * log(2.0)
    n = max(1, int((2.0 / im_tau) ** 2) + 1)
    while 2 * pi * im_tau * n - 4 * pi * sqrt(n) < target:
        n += 1
    return n


def eval_j(tau, cfg: PrecisionConfig = PrecisionConfig()) -> mpc:
    """j(tau) for Im tau > 0, within 2^(-working_bits/2) for Im tau >= sqrt(3)/2."""
    bits = cfg.working_bits
    with workprec(bits + 32):
        tau = mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        n_max = _truncation_order(float(tau.imag), bits)
        coeffs = j_coefficients(n_max)
        q = mp.e ** (2j * mp.pi * tau)
        acc = mpc(0)
        for c in reversed(coeffs):  # Horner from the top coefficient down
            acc = acc * q + c
        return acc / q


def tau_to_mpc(tau: Tau, bits: int) -> mpc:
    with workprec(bits + 32):
        re = mpf(tau.re.numerator) / tau.re.denominator
        im = mp.sqrt(-tau.disc) * tau.im_coeff.numerator / tau.im_coeff.denominator
        return mpc(re, im)


def singular_modulus(d: int, form: ReducedForm, cfg: PrecisionConfig = PrecisionConfig()) -> mpc:
    """j evaluated at the root of the form, i.e. one singular modulus of d."""
    tau = tau_of_form(form, d)
    return eval_j(tau_to_mpc(tau, cfg.working_bits), cfg)


def default_precision(d: int) -> PrecisionConfig:
    """Working precision that in practice certifies the class polynomial of d."""
    h = class_number(d)
    bits = 64 + ceil(h * pi * sqrt(-d) / log(2.0))
    return PrecisionConfig(max(bits, 64))


def hilbert_class_polynomial(
    d: int, cfg: Optional[PrecisionConfig] = None, max_escalations: int = 4
) -> ClassPolynomial:
    """The monic integer polynomial whose roots are the singular moduli of d.

    Every coefficient of the complex product prod (X - j_i) must round to an
    integer within cfg.rounding_tolerance, otherwise the precision is doubled
    and the computation retried; exhausting the retries signals a bug.
    """
    if cfg is None:
        cfg = default_precision(d)
    forms = reduced_forms(d)
    for _ in range(max_escalations + 1):
        bits = cfg.working_bits
        with workprec(bits + 32):
            tol = mpf(cfg.rounding_tolerance.numerator) / cfg.rounding_tolerance.denominator
            roots = [singular_modulus(d, f, cfg) for f in forms]
            poly = [mpc(1)]
            for r in roots:
                nxt = [mpc(0)] * (len(poly) + 1)
                for i, c in enumerate(poly):
                    nxt[i + 1] += c
                    nxt[i] -= c * r
                poly = nxt
            ints = []
            ok = True
            for c in poly:
                nearest = int(mp.nint(c.real))
                if abs(c.real - nearest) > tol or abs(c.imag) > tol:
                    ok = False
                    break
                ints.append(nearest)
            if ok:
                assert ints[-1] == 1
                return ClassPolynomial(d, tuple(ints))
        cfg = cfg.escalate()
    raise PrecisionError(f"class polynomial of {d} did not certify after {max_escalations} escalations")


def check_j_bound(d: int, cfg: PrecisionConfig = PrecisionConfig()) -> bool:
    """Whether every form of d satisfies | |j(tau)| - e^(2 pi Im tau) | <= 2079.

    Numerical slack 2^(-working_bits/4) is added on top of the constant.
    """
    slack = mpf(2) ** (-cfg.working_bits // 4)
    with workprec(cfg.working_bits + 32):
        for form in reduced_forms(d):
            tau = tau_to_mpc(tau_of_form(form, d), cfg.working_bits)
            value = abs(eval_j(tau, cfg))
            if abs(value - mp.e ** (2 * mp.pi * tau.imag)) > J_BOUND_CONSTANT + slack:
                return False
    return True


# -- class polynomial cache ------------------------------------------------------


def cache_path(directory: Union[str, os.PathLike], d: int) -> str:
    return os.path.join(directory, f"hcp_{-d}.json")


def load_cached_hcp(directory: Union[str, os.PathLike], d: int) -> Optional[ClassPolynomial]:
    """Read hcp_<|d|>.json if present and well-formed, else None."""
    path = cache_path(directory, d)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except (OSError, ValueError):
        return None
    if payload.get("disc") != d:
        return None
    coeffs = tuple(int(c) for c in payload["coefficients"])
    if payload.get("h") != len(coeffs) - 1:
        return None
    return ClassPolynomial(d, coeffs)


def store_hcp(directory: Union[str, os.PathLike], poly: ClassPolynomial) -> str:
    """Atomically write the cache record (temp file then rename)."""
    os.makedirs(directory, exist_ok=True)
    path = cache_path(directory, poly.discriminant)
    payload = {
        "disc": poly.discriminant,
        "h": poly.degree,
        "coefficients": [str(c) for c in poly.coefficients],
    }
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            json.dump(payload, handle)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def hilbert_class_polynomial_cached(
    d: int, directory: Optional[Union[str, os.PathLike]] = None, cfg: Optional[PrecisionConfig] = None
) -> ClassPolynomial:
    if directory is not None:
        cached = load_cached_hcp(directory, d)
        if cached is not None:
            return cached
    poly = hilbert_class_polynomial(d, cfg)
    if directory is not None:
        store_hcp(directory, poly)
    return poly
