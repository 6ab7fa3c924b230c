"""Mask synthesis: solve the reproduction conditions for unknown mask entries.

Template entries are affine expressions in named unknowns, written as a sum
of terms, each either a rational ``p/q`` or ``[coef*]?name``::

    "1/2"   "?a1"   "-?a2"   "1/4*?mu"   "1/2 - 1/2*?mu"

All conditions are linear in the mask entries for fixed ``tau``, so the
system rows are just the condition weights of each entry
(:func:`hermrepro.reproduction.column_weight`) pushed through the templates.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import Infeasible, Matrix, Parametric, Unique, format_rational, parse_rational, solve_linear
from .cascade import oracle_reproduces
from .families import rhs_vector
from .reproduction import certify, column_weight
from .symbol import HermiteMask, MaskFormatError, parse_matrix_rows, read_header

__all__ = [
    "Affine",
    "parse_affine",
    "MaskTemplate",
    "template_from_doc",
    "load_template",
    "LinearSystem",
    "build_system",
    "ConstructionResult",
    "ConstructionCheckError",
    "construct",
]


class ConstructionCheckError(RuntimeError):
    """A constructed mask failed its own verification; indicates a bug."""


@dataclass(frozen=True)
class Affine:
    const: Fraction = Fraction(0)
    terms: tuple = ()  # ((name, coef), ...), names unique

    def coef(self, name: str) -> Fraction:
        return dict(self.terms).get(name, Fraction(0))

    def names(self) -> list:
        return [n for n, _ in self.terms]

    def evaluate(self, values: dict) -> Fraction:
        return self.const + sum((c * values[n] for n, c in self.terms), Fraction(0))


_TERM = re.compile(r"\s*([+-])?\s*(?:([0-9]+(?:/[0-9]+)?)\s*(\*)?\s*)?(\?[A-Za-z_][A-Za-z0-9_]*)?\s*")


def parse_affine(text: str) -> Affine:
    if not isinstance(text, str) or not text.strip():
        raise ValueError(f"empty template entry {text!r}")
    pos, const, terms = 0, Fraction(0), {}
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        sign, num, star, var = m.groups()
        if m.end() == pos or (num is None and var is None):
            raise ValueError(f"cannot parse template entry {text!r} at position {pos}")
        if sign is None and not first:
            raise ValueError(f"missing operator in template entry {text!r}")
        if star and var is None:
            raise ValueError(f"dangling '*' in template entry {text!r}")
        if num is not None and var is not None and not star:
            raise ValueError(f"expected '*' between coefficient and unknown in {text!r}")
        c = parse_rational(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        if var is None:
            const += c
        else:
            terms[var[1:]] = terms.get(var[1:], Fraction(0)) + c
        pos = m.end()
        first = False
    return Affine(const, tuple((n, c) for n, c in terms.items() if c != 0))


@dataclass(frozen=True)
class MaskTemplate:
    d: int
    entries: dict  # offset -> tuple of d*d Affine, row-major
    unknowns: tuple
    name: Optional[str] = None

    def instantiate(self, values: dict, name: Optional[str] = None) -> HermiteMask:
        mats = {l: Matrix(self.d, self.d, tuple(e.evaluate(values) for e in es))
                for l, es in self.entries.items()}
        return HermiteMask(self.d, mats, name or self.name)


def template_from_doc(doc) -> MaskTemplate:
    d, name, mats = read_header(doc, {"d", "name", "unknowns", "matrices"})
    entries = {}
    seen = []
    for key, rows in mats.items():
        try:
            l = int(key)
        except ValueError:
            raise MaskFormatError(f"matrix key {key!r} is not a decimal integer offset") from None
        if l in entries:
            raise MaskFormatError(f"offset {l} given twice")
        entries[l] = tuple(parse_matrix_rows(rows, d, f"offset {l}", cell=parse_affine))
    for l in sorted(entries):
        for e in entries[l]:
            seen.extend(n for n in e.names() if n not in seen)
    declared = doc.get("unknowns")
    if declared is None:
        unknowns = tuple(seen)
    else:
        if not isinstance(declared, list) or not all(isinstance(n, str) for n in declared):
            raise MaskFormatError("'unknowns' must be a list of names")
        if len(set(declared)) != len(declared):
            raise MaskFormatError("'unknowns' lists a name twice")
        missing = [n for n in seen if n not in declared]
        if missing:
            raise MaskFormatError(f"undeclared unknown(s): {', '.join(missing)}")
        unknowns = tuple(declared)
    return MaskTemplate(d, dict(sorted(entries.items())), unknowns, name)


def load_template(data) -> MaskTemplate:
    if isinstance(data, bytes):
        data = data.decode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MaskFormatError(f"malformed JSON: {exc}") from None
    return template_from_doc(doc)


@dataclass(frozen=True)
class LinearSystem:
    matrix: Matrix
    rhs: tuple
    names: tuple
    row_labels: tuple  # (k, z, component) per row

    def __iter__(self):
        return iter((self.matrix, self.rhs, self.names))


def build_system(template: MaskTemplate, tau, m: int) -> LinearSystem:
    """All scalar equations for constants and degrees 1..m, over the unknowns.

    Row order: k ascending, z=-1 before z=+1, component ascending.
    """
    if m < 0:
        raise ValueError(f"degree must be >= 0, got {m}")
    tau = Fraction(tau)
    d = template.d
    col = {n: i for i, n in enumerate(template.unknowns)}
    rows, rhs, labels = [], [], []
    for k in range(m + 1):
        for z in (-1, 1):
            if z == -1:
                target = (Fraction(0),) * d
            elif k == 0:
                target = (Fraction(2),) + (Fraction(0),) * (d - 1)
            else:
                target = rhs_vector(d, k, tau).entries
            weights = {(l, c): column_weight(d, k, z, l, c)
                       for l in template.entries for c in range(d)}
            for r in range(d):
                coeffs = [Fraction(0)] * len(col)
                const = Fraction(0)
                for l, es in template.entries.items():
                    for c in range(d):
                        w = weights[(l, c)]
                        if not w:
                            continue
                        e = es[r * d + c]
                        const += w * e.const
                        for n, a in e.terms:
                            coeffs[col[n]] += w * a
                rows.append(coeffs)
                rhs.append(target[r] - const)
                labels.append((k, z, r + 1))
    if not col:
        mat = Matrix(len(rows), 1, (Fraction(0),) * len(rows))
    else:
        mat = Matrix.from_rows(rows)
    return LinearSystem(mat, tuple(rhs), template.unknowns, tuple(labels))


@dataclass
class ConstructionResult:
    status: str  # "solved" | "parametric" | "infeasible"
    mask: Optional[HermiteMask] = None
    values: dict = field(default_factory=dict)
    free_names: list = field(default_factory=list)
    constraints_used: int = 0
    nullspace: list = field(default_factory=list)  # basis vectors keyed by name
    inconsistent_row: Optional[tuple] = None

    def to_dict(self) -> dict:
        from .symbol import mask_to_doc

        out = {
            "status": self.status,
            "constraints_used": self.constraints_used,
            "free_names": list(self.free_names),
            "values": {n: format_rational(v) for n, v in self.values.items()},
        }
        if self.mask is not None:
            out["mask"] = mask_to_doc(self.mask)
        if self.inconsistent_row is not None:
            k, z, r = self.inconsistent_row
            out["inconsistent_row"] = {"k": k, "z": z, "component": r}
        return out


def construct(template: MaskTemplate, tau, m: int, bindings: Optional[dict] = None,
              verify_levels: int = 2) -> ConstructionResult:
    """Solve for the unknowns; free names not bound default to zero.

    Bindings become extra equations appended after the reproduction rows.
    Every returned mask is re-certified and run through the cascade oracle.
    """
    tau = Fraction(tau)
    bindings = {k: Fraction(v) for k, v in (bindings or {}).items()}
    unknown = [n for n in bindings if n not in template.unknowns]
    if unknown:
        raise ValueError(f"binding names not in template: {', '.join(unknown)}")
    system = build_system(template, tau, m)
    names = system.names

    if not names:
        bad = next((r for r, v in enumerate(system.rhs) if v != 0), None)
        base = Unique(()) if bad is None else Infeasible(bad)
    else:
        base = solve_linear(system.matrix, system.rhs)
    if isinstance(base, Infeasible):
        return ConstructionResult("infeasible", constraints_used=system.matrix.rows,
                                  inconsistent_row=system.row_labels[base.row])
    free = [names[c] for c in base.free_columns] if isinstance(base, Parametric) else []

    rows = [list(system.matrix.row(r)) for r in range(system.matrix.rows)]
    rhs = list(system.rhs)
    labels = list(system.row_labels)
    for n, v in bindings.items():
        rows.append([Fraction(int(x == n)) for x in names])
        rhs.append(v)
        labels.append(("bind", n, 0))
    sol = solve_linear(Matrix.from_rows(rows), rhs) if bindings else base
    if isinstance(sol, Infeasible):
        return ConstructionResult("infeasible", constraints_used=len(rows),
                                  free_names=free, inconsistent_row=labels[sol.row])

    if isinstance(sol, Unique):
        status, x, nulls, left = "solved", sol.solution, [], []
    else:
        status, x = "parametric", sol.particular
        left = [names[c] for c in sol.free_columns]
        nulls = [dict(zip(names, v)) for v in sol.nullspace]
    values = dict(zip(names, x))
    mask = template.instantiate(values)

    report = certify(mask, tau, kmax=m)
    deg = report.certified_degree
    if deg is None or deg < m:
        raise ConstructionCheckError(f"constructed mask certifies degree {deg}, wanted {m}")
    verdict = oracle_reproduces(mask, tau, m, verify_levels)
    if not verdict:
        raise ConstructionCheckError(f"constructed mask fails the cascade: {verdict.describe()}")
    return ConstructionResult(status, mask, values, left if status == "parametric" else free,
                              len(rows), nulls)
