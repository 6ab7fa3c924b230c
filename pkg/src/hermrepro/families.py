"""Auxiliary polynomial families and their coefficient ladders.

``q_poly(k, s)`` is the product ``prod_{r<k} (2x + 2s - r)``; the shift ``s``
is rational so the same family serves integer offsets (``s = i/2``) and the
parametrized right-hand sides (``s = i/2 + tau``).

``gamma`` lists are the monomial coefficients of a family member evaluated at
``-x``.  The alpha ladders are built from the unshifted gammas only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import Poly, poly_eval, poly_mul

__all__ = [
    "GammaTable",
    "AlphaTable",
    "RhsVector",
    "q_poly",
    "gamma_table",
    "gamma_by_expansion",
    "gamma_shift_identity",
    "alpha1",
    "alpha1_row",
    "alpha1_closed",
    "alpha2",
    "alpha2_row",
    "alpha",
    "qtilde_poly",
    "qhat_poly",
    "rhs_vector",
    "IntegralityWarning",
]


class IntegralityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GammaTable:
    k: int
    shift: Fraction
    values: tuple  # values[n] multiplies x**n in q_poly(k, shift)(-x)

    def __getitem__(self, n: int) -> Fraction:
        return self.values[n]


@dataclass(frozen=True)
class AlphaTable:
    """Triangular table; ``rows[k]`` holds entries for ell = family..k."""

    family: int
    rows: dict

    def __getitem__(self, kl) -> Fraction:
        k, ell = kl
        return self.rows[k][ell - self.family]

    def row(self, k: int) -> tuple:
        return self.rows[k]

    @property
    def kmax(self) -> int:
        return max(self.rows)


@dataclass(frozen=True)
class RhsVector:
    d: int
    k: int
    tau: Fraction
    entries: tuple


def q_poly(k: int, shift=0) -> Poly:
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    shift = Fraction(shift)
    p = Poly.const(1)
    for r in range(k):
        p = poly_mul(p, Poly((2 * shift - r, 2)))
    return p


@lru_cache(maxsize=None)
def _gamma(k: int, shift: Fraction) -> tuple:
    i = 2 * shift
    if k == 0:
        return (Fraction(1),)
    prev = _gamma(k - 1, shift)
    c = i - (k - 1)
    out = [c * prev[0]]
    for n in range(1, k):
        out.append(-2 * prev[n - 1] + c * prev[n])
    out.append(-2 * prev[k - 1])
    return tuple(out)


def gamma_table(k: int, shift=0) -> GammaTable:
    """Coefficients of ``q_poly(k, shift)(-x)`` from the three-term degree recursion."""
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    shift = Fraction(shift)
    return GammaTable(k, shift, _gamma(k, shift))


def gamma_by_expansion(k: int, shift=0) -> tuple:
    """Same coefficients as :func:`gamma_table`, by expanding the product directly."""
    p = q_poly(k, shift)
    return tuple((-1) ** n * p.coeff(n) for n in range(k + 1))


def gamma_shift_identity(k: int, n: int, shift) -> Fraction:
    """Shifted gamma from unshifted ones via the binomial re-centring sum."""
    if not 0 <= n <= k:
        raise ValueError(f"need 0 <= n <= k, got n={n}, k={k}")
    shift = Fraction(shift)
    g = _gamma(k, Fraction(0))
    return sum(
        ((-1) ** (r + n) * g[r] * math.comb(r, n) * shift ** (r - n) for r in range(n, k + 1)),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def alpha1_row(k: int) -> tuple:
    """Row k (ell = 1..k) of the first alpha ladder, by back-substitution."""
    if k < 1:
        raise ValueError(f"alpha1 rows start at k=1, got {k}")
    g = lambda kk: _gamma(kk, Fraction(0))  # noqa: E731
    a = {1: Fraction(2 * k)}
    sign = (-1) ** k
    for n in range(k - 1, 0, -1):
        acc = n * g(k)[n]
        for j in range(1, k - n + 1):
            acc -= (-1) ** j * a[j] * g(k - j)[n - 1]
        a[k - n + 1] = sign * Fraction(2) ** (1 - n) * acc
    row = tuple(a[ell] for ell in range(1, k + 1))
    _soft_integrality(1, k, row)
    return row


@lru_cache(maxsize=None)
def alpha2_row(k: int) -> tuple:
    """Row k (ell = 2..k) of the second-derivative alpha ladder."""
    if k < 2:
        raise ValueError(f"alpha2 rows start at k=2, got {k}")
    g = lambda kk: _gamma(kk, Fraction(0))  # noqa: E731
    a = {2: Fraction(4 * k * (k - 1))}
    sign = (-1) ** k
    for n in range(k - 1, 1, -1):
        acc = n * (n - 1) * g(k)[n]
        for j in range(2, k - n + 2):
            acc -= (-1) ** j * a[j] * g(k - j)[n - 2]
        a[k - n + 2] = sign * Fraction(2) ** (2 - n) * acc
    return tuple(a[ell] for ell in range(2, k + 1))


def _soft_integrality(family: int, k: int, row: tuple) -> None:
    if any(x.denominator != 1 for x in row):
        import warnings

        warnings.warn(f"alpha{family} row k={k} has non-integer entries: {row}",
                      IntegralityWarning, stacklevel=3)


def alpha1(kmax: int) -> AlphaTable:
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1, got {kmax}")
    return AlphaTable(1, {k: alpha1_row(k) for k in range(1, kmax + 1)})


def alpha2(kmax: int) -> AlphaTable:
    if kmax < 2:
        raise ValueError(f"kmax must be >= 2, got {kmax}")
    return AlphaTable(2, {k: alpha2_row(k) for k in range(2, kmax + 1)})


def alpha(family: int, k: int, ell: int) -> Fraction:
    """Single ladder entry; family 1 pairs with the first derivative, 2 with the second."""
    if family == 1:
        return alpha1_row(k)[ell - 1]
    if family == 2:
        return alpha2_row(k)[ell - 2]
    raise ValueError(f"no alpha ladder for family {family}")


def alpha1_closed(kmax: int) -> AlphaTable:
    """First alpha ladder from the conjectured factorial/sum rules.

    Kept apart from :func:`alpha1` and never used by the reproduction checker.
    """
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1, got {kmax}")
    rows: dict = {}
    for k in range(1, kmax + 1):
        row = {1: Fraction(2 * k)}
        if k >= 2:
            row[k] = Fraction(2 * math.factorial(k - 1))
        for ell in range(2, k):
            inner = sum((rows[i + 1][ell - 2] for i in range(ell, k - 1)), Fraction(0))
            row[ell] = 2 * (ell + 1) * math.factorial(ell - 1) + (ell - 1) * inner
        rows[k] = tuple(row[ell] for ell in range(1, k + 1))
    return AlphaTable(1, rows)


def _weighted_q_sum(family: int, k: int, shift: Fraction) -> Poly:
    out = Poly()
    for n in range(family, k + 1):
        out = out + q_poly(k - n, shift).scale((-1) ** n * alpha(family, k, n))
    return out


def qtilde_poly(k: int, shift=0) -> Poly:
    """``sum_{n=1..k} (-1)^n alpha1[k,n] q_{k-n}``; zero for k=0."""
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    return _weighted_q_sum(1, k, Fraction(shift)) if k >= 1 else Poly()


def qhat_poly(k: int, shift=0) -> Poly:
    """``sum_{n=2..k} (-1)^n alpha2[k,n] q_{k-n}``; zero for k<2."""
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    return _weighted_q_sum(2, k, Fraction(shift)) if k >= 2 else Poly()


def _falling(tau: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for r in range(k):
        out *= tau - r
    return out


def rhs_vector(d: int, k: int, tau) -> RhsVector:
    """Target of the z=+1 degree-k condition for parametrization ``tau``."""
    if d not in (2, 3):
        raise ValueError(f"order d must be 2 or 3, got {d}")
    if k < 1:
        raise ValueError(f"degree must be >= 1, got {k}")
    tau = Fraction(tau)
    x0 = -tau / 2
    first = 2 * poly_eval(q_poly(k, tau), x0)
    if first != 2 * _falling(tau, k):
        raise AssertionError(f"q_{k} evaluation disagrees with falling factorial at tau={tau}")
    entries = [first, poly_eval(qtilde_poly(k, tau), x0)]
    if d == 3:
        entries.append(poly_eval(qhat_poly(k, tau), x0) / 2)
    return RhsVector(d, k, tau, tuple(entries))
