from fractions import Fraction as F

import pytest

from hermrepro.algebra import Matrix
from hermrepro.catalog import (
    FAMILIES,
    TEMPLATES,
    build_family,
    derham,
    extended,
    extended_relations,
    merrien,
    primal3,
    primal3_constraints,
)
from hermrepro.construct import template_from_doc
from hermrepro.reproduction import certify, check_constants
from hermrepro.symbol import load_mask, save_mask, symbol_deriv

from conftest import random_rationals


def test_merrien_display():
    m = merrien(F(-1, 8), F(-1, 2))
    assert (m.lo, m.hi, m.d, m.tau_hint) == (-1, 1, 2, 0)
    assert m[0] == Matrix.from_rows([[1, 0], [0, F(1, 2)]])
    assert m[-1] == Matrix.from_rows([[F(1, 2), F(-1, 8)], [F(3, 4), F(-1, 8)]])
    lam, mu = F(2, 3), F(5, 7)
    a1 = merrien(lam, mu)[1]
    assert a1.col(0) == (F(1, 2), (mu - 1) / 2)


def test_derham_display(rng):
    for lam, mu in zip(random_rationals(rng, 4), random_rationals(rng, 4)):
        m = derham(lam, mu)
        assert (m.lo, m.hi, m.tau_hint) == (-2, 1, F(-1, 2))
        expected = Matrix.from_rows([[2 + 4 * lam * (1 - mu), 4 * lam + 2 * lam * mu],
                                     [4 - 2 * mu - 2 * mu ** 2, mu ** 2 + 8 * lam * (1 - mu)]])
        assert m[-2] == F(1, 8) * expected
        assert symbol_deriv(m, 0, 1).col(0) == (2, 0)


def test_extended_relations_and_display():
    c = extended_relations(F(1, 384), 0)
    assert (c["a1"], c["a2"], c["a3"], c["a4"]) == (F(1, 2), F(-17, 128), F(135, 176), F(-189, 1408))
    assert c["b1"] == 0
    m = extended(F(1, 384), 0)
    assert (m.lo, m.hi) == (-3, 3)
    assert m[0] == Matrix.from_rows([[1, 0], [0, F(1, 2)]])
    for l in (1, 3):
        a, b = m[-l], m[l]
        assert (b[0, 0], b[0, 1], b[1, 0], b[1, 1]) == (a[0, 0], -a[0, 1], -a[1, 0], a[1, 1])


def test_primal3_display():
    p = primal3_constraints(F(1, 3), F(1, 5), F(1, 7))
    m = primal3(**p)
    assert m[0] == Matrix.diag([1, F(1, 2), F(1, 4)])
    assert m[-1].row(1) == (F(1, 6), F(1, 6), p["mu3"] / 2)
    assert m[1].row(0) == (F(1, 2), F(-1, 7), p["lam3"])
    assert m[1].row(2) == (0, F(-1, 20), p["eps3"] / 4)


def test_constraint_examples():
    p = primal3_constraints(F(1, 3), 0, F(-1, 8))
    assert p["mu2"] == F(1, 3)
    assert p["mu3"] == F(-7, 72)
    assert p["lam3"] == 0
    assert (p["lam1"], p["eps1"]) == (F(1, 2), 0)


def test_primal3_violating_linear_constraint():
    p = primal3_constraints(F(2, 9), F(3, 5), F(-4, 7))
    p["mu2"] = F(5, 11)
    assert certify(primal3(**p), tau=0).certified_degree == 0


def test_cubic_constraint_variants(rng):
    # Only the mu1-driven formula gives cubic reproduction for generic mu1.
    for mu1, eps2, lam2 in zip(random_rationals(rng, 4, avoid=(F(1, 3),)), random_rationals(rng, 4),
                               random_rationals(rng, 4)):
        good = primal3(**primal3_constraints(mu1, eps2, lam2, cubic_from="mu1"))
        other = primal3(**primal3_constraints(mu1, eps2, lam2, cubic_from="mu2"))
        assert certify(good).certified_degree == 3
        assert certify(other).certified_degree == 2


@pytest.mark.parametrize("name", list(FAMILIES))
def test_family_round_trip(name):
    m = build_family(name)
    assert load_mask(save_mask(m)) == m


def test_merrien_constants_random(rng):
    for lam, mu in zip(random_rationals(rng, 8), random_rationals(rng, 8)):
        assert check_constants(merrien(lam, mu)).ok


def test_build_family_params():
    m = build_family("merrien", {"lam": "-1/8", "mu": F(2, 5)})
    assert m == merrien(F(-1, 8), F(2, 5))
    p = build_family("primal3", {"mu3": "0"})
    assert p[-1][1, 2] == 0
    with pytest.raises(ValueError, match="unknown family"):
        build_family("loop")
    with pytest.raises(ValueError, match="no parameter"):
        build_family("merrien", {"eps": 1})


@pytest.mark.parametrize("name", list(TEMPLATES))
def test_templates_instantiate_to_family(name):
    t = template_from_doc(TEMPLATES[name])
    if name == "merrien":
        values = {"lam": F(-1, 8), "mu": F(-1, 2)}
        expected = merrien(F(-1, 8), F(-1, 2))
    elif name == "extended":
        values = extended_relations(F(1, 384), 0)
        expected = extended(F(1, 384), 0)
    else:
        values = primal3_constraints(F(1, 3), F(1, 5), F(1, 7))
        expected = primal3(**values)
    assert t.instantiate(values) == expected
