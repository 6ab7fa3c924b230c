"""Algebraic polynomial-reproduction conditions on the symbol at z = +-1.

For degree ``k`` and order ``d`` the z=-1 residual is

    A^(k)(-1) e1 + sum_{s=2..d} sum_{l=s-1..k} alpha^{s-1}[k,l] A^(k-l)(-1) e_s

and the z=+1 residual uses ``(-1)^l alpha`` and subtracts :func:`rhs_vector`.
A scheme reproduces degree m iff it reproduces constants and every residual
for k = 1..m vanishes.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import format_rational, is_zero_vec, unit_vector, vec_add, vec_scale, vec_sub
from .families import alpha, rhs_vector
from .symbol import HermiteMask, falling, symbol_deriv

log = logging.getLogger(__name__)

__all__ = [
    "ReproductionError",
    "ConstantsCheck",
    "DegreeResidual",
    "ReproductionReport",
    "check_constants",
    "degree_residual",
    "infer_tau",
    "certify",
    "column_weight",
    "DEFAULT_KMAX",
]

DEFAULT_KMAX = 8


class ReproductionError(ValueError):
    pass


def _fmt_vec(v) -> str:
    return "[" + ", ".join(format_rational(x) for x in v) + "]"


@dataclass(frozen=True)
class ConstantsCheck:
    ok: bool
    residual_minus: tuple  # A(-1) e1
    residual_plus: tuple  # A(1) e1 - 2 e1


@dataclass(frozen=True)
class DegreeResidual:
    k: int
    minus: tuple
    plus: tuple

    @property
    def passed(self) -> bool:
        return is_zero_vec(self.minus) and is_zero_vec(self.plus)


@dataclass
class ReproductionReport:
    d: int
    tau: Fraction
    constants: ConstantsCheck
    residuals: list
    kmax: int
    notes: list = field(default_factory=list)

    @property
    def constants_ok(self) -> bool:
        return self.constants.ok

    @property
    def certified_degree(self) -> Optional[int]:
        """Largest m with constants and degrees 1..m passing; None if constants fail."""
        if not self.constants.ok:
            return None
        m = 0
        for r in self.residuals:
            if not r.passed:
                break
            m = r.k
        return m

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "tau": format_rational(self.tau),
            "kmax": self.kmax,
            "constants": {
                "ok": self.constants.ok,
                "minus": [format_rational(x) for x in self.constants.residual_minus],
                "plus": [format_rational(x) for x in self.constants.residual_plus],
            },
            "residuals": [
                {
                    "k": r.k,
                    "minus": [format_rational(x) for x in r.minus],
                    "plus": [format_rational(x) for x in r.plus],
                    "passed": r.passed,
                }
                for r in self.residuals
            ],
            "certified_degree": self.certified_degree,
            "notes": list(self.notes),
        }

    def format_table(self) -> str:
        deg = self.certified_degree
        lines = [f"certified degree: {'none' if deg is None else deg}, tau: {format_rational(self.tau)}"]
        rows = [("k", "minus residual", "plus residual", "verdict")]
        c = self.constants
        rows.append(("0", _fmt_vec(c.residual_minus), _fmt_vec(c.residual_plus), "pass" if c.ok else "FAIL"))
        for r in self.residuals:
            rows.append((str(r.k), _fmt_vec(r.minus), _fmt_vec(r.plus), "pass" if r.passed else "FAIL"))
        widths = [max(len(row[i]) for row in rows) for i in range(4)]
        for row in rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def check_constants(mask: HermiteMask) -> ConstantsCheck:
    e1 = unit_vector(mask.d, 1)
    minus = symbol_deriv(mask, 0, -1) @ e1
    plus = vec_sub(symbol_deriv(mask, 0, 1) @ e1, vec_scale(2, e1))
    return ConstantsCheck(is_zero_vec(minus) and is_zero_vec(plus), minus, plus)


def _condition_lhs(derivs: list, d: int, k: int, z: int) -> tuple:
    """Left side of the degree-k condition, ``derivs[j]`` being A^(j)(z)."""
    out = derivs[k].col(0)
    for s in range(2, d + 1):
        fam = s - 1
        for ell in range(fam, k + 1):
            a = alpha(fam, k, ell)
            if z == 1 and ell % 2:
                a = -a
            out = vec_add(out, vec_scale(a, derivs[k - ell].col(s - 1)))
    return out


def degree_residual(mask: HermiteMask, tau, k: int, _derivs=None) -> DegreeResidual:
    if k < 1:
        raise ValueError(f"degree must be >= 1, got {k}")
    tau = Fraction(tau)
    if _derivs is None:
        _derivs = {z: [symbol_deriv(mask, j, z) for j in range(k + 1)] for z in (-1, 1)}
    minus = _condition_lhs(_derivs[-1], mask.d, k, -1)
    plus = vec_sub(_condition_lhs(_derivs[1], mask.d, k, 1), rhs_vector(mask.d, k, tau).entries)
    return DegreeResidual(k, minus, plus)


def infer_tau(mask: HermiteMask) -> Fraction:
    """Parametrization solving the first component of the k=1 z=+1 condition."""
    if not check_constants(mask).ok:
        raise ReproductionError("mask does not reproduce constants; tau cannot be inferred")
    d1 = symbol_deriv(mask, 1, 1)
    a1 = symbol_deriv(mask, 0, 1)
    tau = (d1[0, 0] - 2 * a1[0, 1]) / 2
    if mask.tau_hint is not None and mask.tau_hint != tau:
        log.warning("inferred tau %s differs from mask tau hint %s",
                    format_rational(tau), format_rational(mask.tau_hint))
    return tau


def certify(mask: HermiteMask, tau=None, kmax: int = DEFAULT_KMAX) -> ReproductionReport:
    """Evaluate all conditions up to ``kmax`` and report the reproduced degree.

    Residuals past the first failing degree are still recorded.
    """
    if kmax < 0:
        raise ValueError(f"kmax must be >= 0, got {kmax}")
    notes = []
    if tau is None:
        tau = infer_tau(mask)
        if mask.tau_hint is not None and mask.tau_hint != tau:
            notes.append(f"inferred tau {format_rational(tau)} differs from mask hint "
                         f"{format_rational(mask.tau_hint)}")
    tau = Fraction(tau)
    derivs = {z: [symbol_deriv(mask, j, z) for j in range(kmax + 1)] for z in (-1, 1)}
    residuals = [degree_residual(mask, tau, k, derivs) for k in range(1, kmax + 1)]
    return ReproductionReport(mask.d, tau, check_constants(mask), residuals, kmax, notes)


def column_weight(d: int, k: int, z: int, l: int, col: int) -> Fraction:
    """Coefficient of ``A_l[r][col]`` in component r of the degree-k residual at z.

    Degree 0 means the constants condition.  Built from falling factorials and
    alpha coefficients directly, without forming any symbol.
    """
    def zp(e):
        return 1 if z == 1 or e % 2 == 0 else -1

    if k == 0:
        return Fraction(zp(l)) if col == 0 else Fraction(0)
    if col == 0:
        return Fraction(falling(l, k) * zp(l - k))
    fam = col
    if fam > d - 1:
        return Fraction(0)
    w = Fraction(0)
    for ell in range(fam, k + 1):
        a = alpha(fam, k, ell)
        if z == 1 and ell % 2:
            a = -a
        w += a * falling(l, k - ell) * zp(l - k + ell)
    return w
