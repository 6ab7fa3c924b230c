"""Exact scalar, matrix and polynomial arithmetic over the rationals.

Scalars are :class:`fractions.Fraction`.  Matrices and polynomials are small
immutable value types; nothing here ever rounds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]
Number = Union[int, Fraction]

__all__ = [
    "Rational",
    "rat",
    "parse_rational",
    "format_rational",
    "Matrix",
    "mat_mul",
    "mat_add",
    "mat_scale",
    "mat_vec",
    "vec",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "is_zero_vec",
    "unit_vector",
    "Poly",
    "poly_mul",
    "poly_add",
    "poly_eval",
    "poly_compose_affine",
    "Unique",
    "Parametric",
    "Infeasible",
    "solve_linear",
]


def rat(num: int, den: int = 1) -> Fraction:
    """Build a rational in lowest terms; ``rat(-3, -6) == 1/2``."""
    if den == 0:
        raise ZeroDivisionError(f"rational with zero denominator: {num}/0")
    return Fraction(num, den)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (integers only, no decimals)."""
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    s = text.strip()
    parts = s.split("/")
    if len(parts) > 2 or not _is_int(parts[0]) or (len(parts) == 2 and not parts[1].strip().isdigit()):
        raise ValueError(f"unparsable rational {text!r}")
    if len(parts) == 1:
        return Fraction(int(parts[0]))
    den = int(parts[1])
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(parts[0]), den)


def _is_int(s: str) -> bool:
    s = s.strip()
    if s[:1] in "+-":
        s = s[1:]
    return s.isdigit()


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- vectors are plain tuples of Fractions ------------------------------------

def vec(*xs: Number) -> tuple:
    return tuple(Fraction(x) for x in xs)


def vec_add(u: Sequence, v: Sequence) -> tuple:
    if len(u) != len(v):
        raise ValueError(f"vector length mismatch: {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    if len(u) != len(v):
        raise ValueError(f"vector length mismatch: {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Number, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def is_zero_vec(u: Iterable) -> bool:
    return all(a == 0 for a in u)


def unit_vector(d: int, s: int) -> tuple:
    """Canonical vector e_s of length d, with 1-based ``s``."""
    return tuple(Fraction(int(r == s - 1)) for r in range(d))


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix of Fractions."""

    rows: int
    cols: int
    entries: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]]) -> Matrix:
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix needs at least one row and one column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), ncols, tuple(Fraction(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence[Number]) -> Matrix:
        n = len(values)
        return cls(n, n, tuple(Fraction(values[r]) if r == c else Fraction(0)
                               for r in range(n) for c in range(n)))

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> tuple:
        return self.entries[r * self.cols:(r + 1) * self.cols]

    def col(self, c: int) -> tuple:
        return self.entries[c::self.cols]

    def to_rows(self) -> list:
        return [list(self.row(r)) for r in range(self.rows)]

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def __add__(self, other: Matrix) -> Matrix:
        return mat_add(self, other)

    def __sub__(self, other: Matrix) -> Matrix:
        return mat_add(self, mat_scale(-1, other))

    def __neg__(self) -> Matrix:
        return mat_scale(-1, self)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return mat_vec(self, other)

    def __rmul__(self, c: Number) -> Matrix:
        return mat_scale(c, self)

    def __str__(self) -> str:
        cells = [[format_rational(x) for x in self.row(r)] for r in range(self.rows)]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + " ".join(c.rjust(width) for c in row) + "]" for row in cells)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = []
    for r in range(a.rows):
        arow = a.row(r)
        for c in range(b.cols):
            out.append(sum((x * y for x, y in zip(arow, b.col(c))), Fraction(0)))
    return Matrix(a.rows, b.cols, tuple(out))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError(f"cannot add {a.rows}x{a.cols} and {b.rows}x{b.cols}")
    return Matrix(a.rows, a.cols, tuple(x + y for x, y in zip(a.entries, b.entries)))


def mat_scale(c: Number, a: Matrix) -> Matrix:
    return Matrix(a.rows, a.cols, tuple(c * x for x in a.entries))


def mat_vec(a: Matrix, v: Sequence) -> tuple:
    if a.cols != len(v):
        raise ValueError(f"cannot apply {a.rows}x{a.cols} matrix to length-{len(v)} vector")
    return tuple(sum((x * y for x, y in zip(a.row(r), v)), Fraction(0)) for r in range(a.rows))


# -- polynomials ---------------------------------------------------------------

def _trim(coeffs: Iterable) -> tuple:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial; ``coeffs[n]`` multiplies ``x**n``.

    The zero polynomial has no coefficients and ``degree`` None.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def const(cls, c: Number) -> Poly:
        return cls((c,))

    @classmethod
    def x(cls) -> Poly:
        return cls((0, 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else None

    def coeff(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def __call__(self, x: Number) -> Fraction:
        return poly_eval(self, x)

    def __add__(self, other: Poly) -> Poly:
        return poly_add(self, other)

    def __sub__(self, other: Poly) -> Poly:
        return poly_add(self, other.scale(-1))

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c: Number) -> Poly:
        return Poly(tuple(c * a for a in self.coeffs))

    def derivative(self) -> Poly:
        return Poly(tuple(n * a for n, a in enumerate(self.coeffs))[1:])

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for n in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[n]
            if a == 0:
                continue
            mono = "" if n == 0 else ("x" if n == 1 else f"x^{n}")
            if mono and abs(a) == 1:
                body = mono
            else:
                body = format_rational(abs(a)) + ("*" + mono if mono else "")
            terms.append(("-" if a < 0 else "+") + " " + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p.coeffs), len(q.coeffs))
    return Poly(tuple(p.coeff(i) + q.coeff(i) for i in range(n)))


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p.coeffs or not q.coeffs:
        return Poly()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a:
            for j, b in enumerate(q.coeffs):
                out[i + j] += a * b
    return Poly(tuple(out))


def poly_eval(p: Poly, x: Number) -> Fraction:
    acc = Fraction(0)
    for a in reversed(p.coeffs):
        acc = acc * x + a
    return acc


def poly_compose_affine(p: Poly, a: Number, b: Number) -> Poly:
    """Return the polynomial ``x -> p(a*x + b)`` (Horner in polynomial form)."""
    inner = Poly((b, a))
    acc = Poly()
    for c in reversed(p.coeffs):
        acc = poly_add(poly_mul(acc, inner), Poly.const(c))
    return acc


# -- linear systems ------------------------------------------------------------

@dataclass(frozen=True)
class Unique:
    solution: tuple


@dataclass(frozen=True)
class Parametric:
    particular: tuple
    nullspace: tuple  # tuple of basis vectors
    pivot_columns: tuple
    free_columns: tuple


@dataclass(frozen=True)
class Infeasible:
    row: int  # index (in the input) of a row that reduces to 0 = c, c != 0


def solve_linear(a: Matrix, b: Sequence[Number]):
    """Solve ``a @ x == b`` exactly by Gauss-Jordan elimination.

    Pivots are the first nonzero entry in each column, so the result is
    deterministic.  Returns :class:`Unique`, :class:`Parametric` (with free
    variables set to zero in the particular solution) or :class:`Infeasible`.
    """
    if a.rows < 1:
        raise ValueError("system needs at least one equation")
    if len(b) != a.rows:
        raise ValueError(f"right-hand side has {len(b)} entries for {a.rows} equations")
    m = [list(a.row(r)) + [Fraction(b[r])] for r in range(a.rows)]
    origin = list(range(a.rows))
    n = a.cols
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        origin[r], origin[p] = origin[p], origin[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][n] != 0:
            return Infeasible(origin[i])

    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = m[i][n]
    if len(pivots) == n:
        return Unique(tuple(x))

    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][fc]
        basis.append(tuple(v))
    return Parametric(tuple(x), tuple(basis), tuple(pivots), tuple(free))
