"""Matrix masks, their Laurent symbols and exact derivatives at z = +-1."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .algebra import Matrix, format_rational, parse_rational

__all__ = [
    "MaskFormatError",
    "HermiteMask",
    "falling",
    "symbol_deriv",
    "subsymbol_deriv",
    "load_mask",
    "save_mask",
    "mask_to_doc",
    "mask_from_doc",
]


class MaskFormatError(ValueError):
    pass


def falling(l: int, k: int) -> int:
    """Falling factorial ``l (l-1) ... (l-k+1)``; 1 for k=0."""
    out = 1
    for r in range(k):
        out *= l - r
    return out


@dataclass(frozen=True, eq=False)
class HermiteMask:
    """Finitely supported sequence of d x d matrices, keyed by integer offset.

    Offsets missing from ``matrices`` stand for zero matrices.
    """

    d: int
    matrices: Mapping[int, Matrix]
    name: Optional[str] = None
    tau_hint: Optional[Fraction] = None

    def __post_init__(self):
        mats = {int(l): m for l, m in sorted(self.matrices.items())}
        object.__setattr__(self, "matrices", mats)
        if self.tau_hint is not None:
            object.__setattr__(self, "tau_hint", Fraction(self.tau_hint))
        if self.d not in (2, 3):
            raise ValueError(f"order d must be 2 or 3, got {self.d}")
        if not mats:
            raise ValueError("mask has no matrices")
        for l, m in mats.items():
            if (m.rows, m.cols) != (self.d, self.d):
                raise ValueError(f"matrix at offset {l} is {m.rows}x{m.cols}, expected {self.d}x{self.d}")
        if all(m.is_zero() for m in mats.values()):
            raise ValueError("mask has no nonzero matrix")

    @property
    def lo(self) -> int:
        return min(self.matrices)

    @property
    def hi(self) -> int:
        return max(self.matrices)

    def __getitem__(self, l: int) -> Matrix:
        m = self.matrices.get(l)
        return m if m is not None else Matrix.zeros(self.d, self.d)

    def items(self):
        return self.matrices.items()

    def nonzero_offsets(self) -> list:
        return [l for l, m in self.matrices.items() if not m.is_zero()]

    def padded(self, lo: int, hi: int) -> HermiteMask:
        """Same mask with explicit zero matrices filling ``[lo, hi]``."""
        mats = dict(self.matrices)
        for l in range(lo, hi + 1):
            mats.setdefault(l, Matrix.zeros(self.d, self.d))
        return HermiteMask(self.d, mats, self.name, self.tau_hint)

    def shifted(self, s: int) -> HermiteMask:
        """Mask with ``A'_l = A_{l-s}``, i.e. symbol multiplied by ``z**s``."""
        return HermiteMask(self.d, {l + s: m for l, m in self.matrices.items()},
                           self.name, None if self.tau_hint is None else self.tau_hint + s)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HermiteMask):
            return NotImplemented
        offs = set(self.nonzero_offsets()) | set(other.nonzero_offsets())
        return self.d == other.d and all(self[l] == other[l] for l in offs)

    __hash__ = None


def _zpow(z: int, e: int) -> int:
    if z == 1:
        return 1
    return -1 if e % 2 else 1


def _check_z(z) -> int:
    if z not in (1, -1):
        raise ValueError(f"symbol evaluation supports z = +1 or -1 only, got {z}")
    return int(z)


def symbol_deriv(mask: HermiteMask, k: int, z: int) -> Matrix:
    """k-th derivative of ``sum_l A_l z**l`` at ``z = +-1``."""
    if k < 0:
        raise ValueError(f"derivative order must be >= 0, got {k}")
    z = _check_z(z)
    acc = Matrix.zeros(mask.d, mask.d)
    for l, a in mask.items():
        w = falling(l, k) * _zpow(z, l - k)
        if w:
            acc = acc + w * a
    return acc


def subsymbol_deriv(mask: HermiteMask, parity: str, k: int, z: int) -> Matrix:
    """Like :func:`symbol_deriv` restricted to even or odd offsets."""
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if k < 0:
        raise ValueError(f"derivative order must be >= 0, got {k}")
    z = _check_z(z)
    want = 0 if parity == "even" else 1
    acc = Matrix.zeros(mask.d, mask.d)
    for l, a in mask.items():
        if l % 2 != want:
            continue
        w = falling(l, k) * _zpow(z, l - k)
        if w:
            acc = acc + w * a
    return acc


# -- JSON ----------------------------------------------------------------------

_MASK_KEYS = {"d", "name", "tau", "matrices"}


def mask_to_doc(mask: HermiteMask) -> dict:
    doc: dict = {"d": mask.d}
    if mask.name is not None:
        doc["name"] = mask.name
    if mask.tau_hint is not None:
        doc["tau"] = format_rational(mask.tau_hint)
    doc["matrices"] = {
        str(l): [[format_rational(x) for x in m.row(r)] for r in range(m.rows)]
        for l, m in mask.items()
    }
    return doc


def save_mask(mask: HermiteMask) -> bytes:
    """Canonical document: one top-level field per line, one matrix per line."""
    doc = mask_to_doc(mask)
    lines = [f'  "{k}": {json.dumps(v)},' for k, v in doc.items() if k != "matrices"]
    mats = [f'    "{l}": {json.dumps(rows)}' for l, rows in doc["matrices"].items()]
    lines.append('  "matrices": {\n' + ",\n".join(mats) + "\n  }")
    return ("{\n" + "\n".join(lines) + "\n}\n").encode()


def _parse_offset(key: str) -> int:
    try:
        return int(key)
    except (TypeError, ValueError):
        raise MaskFormatError(f"matrix key {key!r} is not a decimal integer offset") from None


def parse_matrix_rows(rows, d: int, where: str, cell=parse_rational):
    """Validate a ``d x d`` nested list and convert each cell with ``cell``."""
    if not isinstance(rows, list) or len(rows) != d or any(
            not isinstance(r, list) or len(r) != d for r in rows):
        raise MaskFormatError(f"{where}: matrix is not {d}x{d}")
    out = []
    for r, row in enumerate(rows):
        for c, text in enumerate(row):
            if not isinstance(text, str):
                raise MaskFormatError(f"{where}: entry ({r},{c}) must be a string, got {text!r}")
            try:
                out.append(cell(text))
            except ValueError as exc:
                raise MaskFormatError(f"{where}: entry ({r},{c}): {exc}") from None
    return out


def read_header(doc, allowed: set) -> tuple:
    if not isinstance(doc, dict):
        raise MaskFormatError("top-level JSON value must be an object")
    extra = set(doc) - allowed
    if extra:
        raise MaskFormatError(f"unknown field(s): {', '.join(sorted(extra))}")
    d = doc.get("d")
    if d not in (2, 3) or isinstance(d, bool):
        raise MaskFormatError(f"'d' must be 2 or 3, got {d!r}")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise MaskFormatError("'name' must be a string")
    mats = doc.get("matrices")
    if not isinstance(mats, dict) or not mats:
        raise MaskFormatError("'matrices' must be a non-empty object")
    return d, name, mats


def mask_from_doc(doc) -> HermiteMask:
    d, name, mats = read_header(doc, _MASK_KEYS)
    tau = None
    if "tau" in doc:
        try:
            tau = parse_rational(doc["tau"])
        except ValueError as exc:
            raise MaskFormatError(f"'tau': {exc}") from None
    matrices = {}
    for key, rows in mats.items():
        l = _parse_offset(key)
        if l in matrices:
            raise MaskFormatError(f"offset {l} given twice")
        entries = parse_matrix_rows(rows, d, f"offset {l}")
        matrices[l] = Matrix(d, d, tuple(entries))
    try:
        return HermiteMask(d, matrices, name, tau)
    except ValueError as exc:
        raise MaskFormatError(str(exc)) from None


def load_mask(data) -> HermiteMask:
    """Parse a mask document from bytes or str."""
    if isinstance(data, bytes):
        data = data.decode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MaskFormatError(f"malformed JSON: {exc}") from None
    return mask_from_doc(doc)
