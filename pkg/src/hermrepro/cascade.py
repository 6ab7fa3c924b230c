"""The refinement operator itself, run exactly on finite windows.

One step maps level-n data to level n+1 by

    D^(n+1) f_{n+1}(i) = sum_j A_{i-2j} D^n f_n(j),   D = diag(1, 1/2, ..., 2^-(d-1)).

Windows shrink at each step (no padding): an output index is kept only when
every ``j`` with ``lo <= i - 2j <= hi`` lies inside the input window.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import Poly, format_rational, poly_eval, unit_vector
from .symbol import HermiteMask

__all__ = [
    "WindowError",
    "HermiteSequence",
    "diag_scale",
    "refine",
    "sample_poly",
    "OracleVerdict",
    "oracle_reproduces",
    "default_window",
    "basic_limit_samples",
    "samples_to_csv",
]


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class HermiteSequence:
    d: int
    level: int
    base: int
    values: tuple  # values[t] is the d-vector at index base + t

    def __post_init__(self):
        if not self.values:
            raise WindowError("empty window")
        if any(len(v) != self.d for v in self.values):
            raise ValueError(f"all vectors must have length {self.d}")

    @property
    def last(self) -> int:
        return self.base + len(self.values) - 1

    def indices(self) -> range:
        return range(self.base, self.last + 1)

    def __getitem__(self, j: int) -> tuple:
        if not self.base <= j <= self.last:
            raise IndexError(f"index {j} outside window [{self.base}, {self.last}]")
        return self.values[j - self.base]


def diag_scale(d: int) -> tuple:
    return tuple(Fraction(1, 2 ** s) for s in range(d))


def _required_width(mask: HermiteMask) -> int:
    return (mask.hi - mask.lo + 1) // 2 + 1


def refine(mask: HermiteMask, seq: HermiteSequence) -> HermiteSequence:
    if seq.d != mask.d:
        raise ValueError(f"mask order {mask.d} does not match data order {seq.d}")
    d, n = mask.d, seq.level
    lo, hi = mask.lo, mask.hi
    first, last = 2 * seq.base + hi, 2 * seq.last + lo
    if first > last:
        raise WindowError(
            f"window of {len(seq.values)} entries too narrow for mask support [{lo}, {hi}]; "
            f"need at least {_required_width(mask)}")
    dn = [s ** n for s in diag_scale(d)]
    dinv = [Fraction(2) ** ((n + 1) * s) for s in range(d)]
    scaled = [tuple(a * b for a, b in zip(dn, v)) for v in seq.values]
    mats = [(l, m.to_rows()) for l, m in mask.items() if not m.is_zero()]
    out = []
    for i in range(first, last + 1):
        acc = [Fraction(0)] * d
        for l, rows in mats:
            if (i - l) % 2:
                continue
            g = scaled[(i - l) // 2 - seq.base]
            for r in range(d):
                row = rows[r]
                acc[r] += sum(row[c] * g[c] for c in range(d) if row[c])
        out.append(tuple(a * b for a, b in zip(dinv, acc)))
    return HermiteSequence(d, n + 1, first, tuple(out))


def _hermite_values(p: Poly, d: int, x: Fraction) -> tuple:
    vals = []
    q = p
    for _ in range(d):
        vals.append(poly_eval(q, x))
        q = q.derivative()
    return tuple(vals)


def sample_poly(p: Poly, d: int, tau, window: tuple) -> HermiteSequence:
    """Level-0 data ``[p(j+tau), p'(j+tau), ...]`` for j in ``window`` (inclusive)."""
    a, b = window
    tau = Fraction(tau)
    return HermiteSequence(d, 0, a, tuple(_hermite_values(p, d, j + tau) for j in range(a, b + 1)))


@dataclass(frozen=True)
class OracleVerdict:
    passed: bool
    degree: Optional[int] = None  # monomial degree that failed
    level: Optional[int] = None
    index: Optional[int] = None
    expected: Optional[tuple] = None
    got: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.passed

    def describe(self) -> str:
        if self.passed:
            return "PASS"
        exp = "[" + ", ".join(format_rational(x) for x in self.expected) + "]"
        got = "[" + ", ".join(format_rational(x) for x in self.got) + "]"
        return (f"FAIL at level {self.level}, index {self.index} for x^{self.degree}: "
                f"expected {exp}, got {got}")


def default_window(mask: HermiteMask) -> tuple:
    """A symmetric window that never runs out however many levels are refined."""
    w = mask.hi - mask.lo + 2
    return (-w, w)


def oracle_reproduces(mask: HermiteMask, tau, degree: int, levels: int,
                      window: Optional[tuple] = None) -> OracleVerdict:
    """Run the cascade on every monomial up to ``degree`` and compare exactly."""
    if degree < 0 or levels < 0:
        raise ValueError("degree and levels must be non-negative")
    tau = Fraction(tau)
    window = window or default_window(mask)
    seq_len = window[1] - window[0] + 1
    for _ in range(levels):
        seq_len = 2 * (seq_len - 1) + mask.lo - mask.hi + 1
        if seq_len < 1:
            raise WindowError(f"window {window} exhausted before {levels} levels")
    for m in range(degree + 1):
        p = Poly((0,) * m + (1,))
        seq = sample_poly(p, mask.d, tau, window)
        for level in range(1, levels + 1):
            seq = refine(mask, seq)
            h = Fraction(1, 2 ** level)
            for j in seq.indices():
                want = _hermite_values(p, mask.d, (j + tau) * h)
                got = seq[j]
                if got != want:
                    return OracleVerdict(False, m, level, j, want, got)
    return OracleVerdict(True)


def basic_limit_samples(mask: HermiteMask, s: int, levels: int, tau=None) -> list:
    """Dyadic samples ``((i + tau)/2^n, f_n(i))`` of the cascade started from e_s at 0."""
    if not 1 <= s <= mask.d:
        raise ValueError(f"component must be in 1..{mask.d}, got {s}")
    if tau is None:
        tau = mask.tau_hint if mask.tau_hint is not None else 0
    tau = Fraction(tau)
    w = mask.hi - mask.lo + 1
    zero = (Fraction(0),) * mask.d
    seq = HermiteSequence(mask.d, 0, -w, tuple(
        unit_vector(mask.d, s) if j == 0 else zero for j in range(-w, w + 1)))
    for _ in range(levels):
        seq = refine(mask, seq)
    h = Fraction(1, 2 ** levels)
    return [((j + tau) * h, seq[j]) for j in seq.indices()]


def samples_to_csv(samples: Sequence, d: int, decimal: bool = False) -> str:
    """CSV with header ``t,f,f1[,f2]``; exact ``p/q`` unless ``decimal``."""
    def fmt(x: Fraction) -> str:
        return f"{float(x):.17g}" if decimal else format_rational(x)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "f"] + [f"f{r}" for r in range(1, d)])
    for t, v in samples:
        writer.writerow([fmt(t)] + [fmt(x) for x in v])
    return buf.getvalue()
