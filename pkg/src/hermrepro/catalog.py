"""Parametric Hermite schemes with known reproduction behaviour.

Each family comes as a mask constructor and, where useful for synthesis, a
template whose unknown entries are named.
"""
from __future__ import annotations

from fractions import Fraction

from .algebra import Matrix, parse_rational
from .symbol import HermiteMask

__all__ = [
    "merrien",
    "derham",
    "extended",
    "extended_relations",
    "primal3",
    "primal3_constraints",
    "FAMILIES",
    "build_family",
    "TEMPLATES",
]

F = Fraction
HALF = F(1, 2)


def merrien(lam, mu) -> HermiteMask:
    """Interpolatory two-point scheme on offsets -1..1."""
    lam, mu = F(lam), F(mu)
    return HermiteMask(2, {
        -1: Matrix.from_rows([[HALF, lam], [(1 - mu) / 2, mu / 4]]),
        0: Matrix.from_rows([[1, 0], [0, HALF]]),
        1: Matrix.from_rows([[HALF, -lam], [(mu - 1) / 2, mu / 4]]),
    }, name="merrien", tau_hint=F(0))


def derham(lam, mu) -> HermiteMask:
    """Dual (tau = -1/2) corner-cutting companion of :func:`merrien`, offsets -2..1."""
    lam, mu = F(lam), F(mu)
    e = F(1, 8)
    p = 2 + 4 * lam * (1 - mu)
    q = 6 - 4 * lam * (1 - mu)
    r = 4 - 2 * mu - 2 * mu ** 2
    s_out = mu ** 2 + 8 * lam * (1 - mu)
    s_in = mu ** 2 - 8 * lam * (1 - mu) + 2 * mu
    mats = {
        -2: [[p, 4 * lam + 2 * lam * mu], [r, s_out]],
        -1: [[q, 8 * lam - 2 * lam * mu], [r, s_in]],
        0: [[q, -8 * lam + 2 * lam * mu], [-r, s_in]],
        1: [[p, -4 * lam - 2 * lam * mu], [-r, s_out]],
    }
    return HermiteMask(2, {l: e * Matrix.from_rows(m) for l, m in mats.items()},
                       name="derham", tau_hint=-HALF)


def extended_relations(b2, b3) -> dict:
    """Remaining coefficients of the width-7 interpolatory scheme for degree 5."""
    b2, b3 = F(b2), F(b3)
    b1 = F(1, 128) - 3 * b2
    b4 = F(1, 1408) - F(384, 1408) * b3
    a1 = HALF - b1
    a3 = 24 * b4 + 9 * b3 + F(3, 4)
    a4 = F(1, 4) - b4 - a3 / 2 - F(3, 2) * b3
    a2 = -F(1, 8) - 3 * b2 - 2 * b1
    return {"a1": a1, "a2": a2, "a3": a3, "a4": a4, "b1": b1, "b2": b2, "b3": b3, "b4": b4}


def _extended_mask(c: dict, name="extended") -> HermiteMask:
    return HermiteMask(2, {
        -3: Matrix.from_rows([[c["b1"], c["b2"]], [c["b3"], c["b4"]]]),
        -1: Matrix.from_rows([[c["a1"], c["a2"]], [c["a3"], c["a4"]]]),
        0: Matrix.from_rows([[1, 0], [0, HALF]]),
        1: Matrix.from_rows([[c["a1"], -c["a2"]], [-c["a3"], c["a4"]]]),
        3: Matrix.from_rows([[c["b1"], -c["b2"]], [-c["b3"], c["b4"]]]),
    }, name=name, tau_hint=F(0))


def extended(b2, b3) -> HermiteMask:
    return _extended_mask(extended_relations(b2, b3))


_D3 = (F(1), HALF, F(1, 4))


def primal3(lam1, lam2, lam3, mu1, mu2, mu3, eps1, eps2, eps3) -> HermiteMask:
    """Order-3 interpolatory scheme: A_-1 = D P, A_0 = D, A_1 = D P' (checkerboard signs)."""
    p = [[F(lam1), F(lam2), F(lam3)], [F(mu1), F(mu2), F(mu3)], [F(eps1), F(eps2), F(eps3)]]
    flip = [[x if (r + c) % 2 == 0 else -x for c, x in enumerate(row)] for r, row in enumerate(p)]

    def scaled(rows):
        return Matrix.from_rows([[_D3[r] * x for x in row] for r, row in enumerate(rows)])

    return HermiteMask(3, {-1: scaled(p), 0: Matrix.diag(_D3), 1: scaled(flip)},
                       name="primal3", tau_hint=F(0))


def primal3_constraints(mu1, eps2, lam2, cubic_from="mu1") -> dict:
    """Full parameter set reproducing cubics from the three free parameters.

    ``cubic_from`` selects which of mu1/mu2 drives mu3; only "mu1" yields
    cubic reproduction (the "mu2" reading is kept for comparison tests).
    """
    mu1, eps2, lam2 = F(mu1), F(eps2), F(lam2)
    mu2 = (1 - mu1) / 2
    driver = {"mu1": mu1, "mu2": mu2}[cubic_from]
    return {
        "lam1": HALF, "lam2": lam2, "lam3": (-1 - 8 * lam2) / 16,
        "mu1": mu1, "mu2": mu2, "mu3": (2 * driver - 3) / 24,
        "eps1": F(0), "eps2": eps2, "eps3": (1 - eps2) / 2,
    }


def _primal3_family(**kw) -> HermiteMask:
    free = {k: kw.pop(k) for k in ("mu1", "eps2", "lam2") if k in kw}
    params = primal3_constraints(free.get("mu1", F(1, 3)), free.get("eps2", F(1, 5)),
                                 free.get("lam2", F(1, 7)))
    params.update(kw)
    return primal3(**params)


# name -> (builder, default params); builders accept the listed names as keywords
FAMILIES = {
    "merrien": (merrien, {"lam": F(-1, 8), "mu": F(-1, 2)}),
    "derham": (derham, {"lam": F(-1, 8), "mu": F(-1, 2)}),
    "extended": (extended, {"b2": F(1, 384), "b3": F(0)}),
    "primal3": (_primal3_family, {"mu1": F(1, 3), "eps2": F(1, 5), "lam2": F(1, 7)}),
}

_PRIMAL3_DEPENDENT = ("lam1", "lam3", "mu2", "mu3", "eps1", "eps3")


def build_family(family: str, params: dict | None = None) -> HermiteMask:
    """Instantiate a named family; ``params`` values may be rationals or "p/q" strings."""
    try:
        builder, defaults = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}") from None
    allowed = set(defaults) | (set(_PRIMAL3_DEPENDENT) if family == "primal3" else set())
    kw = dict(defaults)
    for k, v in (params or {}).items():
        if k not in allowed:
            raise ValueError(f"family {family!r} has no parameter {k!r}")
        kw[k] = parse_rational(v) if isinstance(v, str) else F(v)
    return builder(**kw)


# Templates use the entry grammar of hermrepro.construct: "p/q", "?x", "-?x", "c*?x", sums.
TEMPLATES = {
    "merrien": {
        "d": 2, "name": "merrien-template", "unknowns": ["lam", "mu"],
        "matrices": {
            "-1": [["1/2", "?lam"], ["1/2 - 1/2*?mu", "1/4*?mu"]],
            "0": [["1", "0"], ["0", "1/2"]],
            "1": [["1/2", "-?lam"], ["-1/2 + 1/2*?mu", "1/4*?mu"]],
        },
    },
    "extended": {
        "d": 2, "name": "extended-template",
        "unknowns": ["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"],
        "matrices": {
            "-3": [["?b1", "?b2"], ["?b3", "?b4"]],
            "-1": [["?a1", "?a2"], ["?a3", "?a4"]],
            "0": [["1", "0"], ["0", "1/2"]],
            "1": [["?a1", "-?a2"], ["-?a3", "?a4"]],
            "3": [["?b1", "-?b2"], ["-?b3", "?b4"]],
        },
    },
    "primal3": {
        "d": 3, "name": "primal3-template",
        "unknowns": ["lam1", "lam2", "lam3", "mu1", "mu2", "mu3", "eps1", "eps2", "eps3"],
        "matrices": {
            "-1": [["?lam1", "?lam2", "?lam3"],
                   ["1/2*?mu1", "1/2*?mu2", "1/2*?mu3"],
                   ["1/4*?eps1", "1/4*?eps2", "1/4*?eps3"]],
            "0": [["1", "0", "0"], ["0", "1/2", "0"], ["0", "0", "1/4"]],
            "1": [["?lam1", "-?lam2", "?lam3"],
                  ["-1/2*?mu1", "1/2*?mu2", "-1/2*?mu3"],
                  ["1/4*?eps1", "-1/4*?eps2", "1/4*?eps3"]],
        },
    },
}
