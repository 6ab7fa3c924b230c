import importlib
import json
from fractions import Fraction as F

import pytest

from hermrepro.algebra import mat_vec
from hermrepro.catalog import TEMPLATES, extended, extended_relations, merrien, primal3_constraints
from hermrepro.construct import (
    ConstructionCheckError,
    build_system,
    construct,
    load_template,
    parse_affine,
    template_from_doc,
)
from hermrepro.reproduction import certify
from hermrepro.symbol import MaskFormatError

from conftest import random_rationals


def tmpl(name):
    return template_from_doc(TEMPLATES[name])


@pytest.mark.parametrize("text,const,terms", [
    ("1/2", F(1, 2), ()),
    ("?a1", 0, (("a1", 1),)),
    ("-?a2", 0, (("a2", -1),)),
    ("1/4*?mu", 0, (("mu", F(1, 4)),)),
    ("1/2 - 1/2*?mu", F(1, 2), (("mu", F(-1, 2)),)),
    ("?x + ?x - 3", -3, (("x", 2),)),
    ("?x - ?x", 0, ()),
])
def test_parse_affine(text, const, terms):
    a = parse_affine(text)
    assert a.const == const and a.terms == terms


@pytest.mark.parametrize("text", ["", "2?x", "?x ?y", "1/2*", "?", "1/0", "* ?x", "0.5"])
def test_parse_affine_rejects(text):
    with pytest.raises(ValueError):
        parse_affine(text)


def test_template_doc_errors():
    doc = dict(TEMPLATES["merrien"])
    with pytest.raises(MaskFormatError, match="undeclared"):
        template_from_doc({**doc, "unknowns": ["lam"]})
    with pytest.raises(MaskFormatError, match="twice"):
        template_from_doc({**doc, "unknowns": ["lam", "mu", "lam"]})
    with pytest.raises(MaskFormatError, match="offset 0"):
        template_from_doc({**doc, "matrices": {**doc["matrices"], "0": [["1", "2?q"], ["0", "1"]]}})
    with pytest.raises(MaskFormatError, match="unknown field"):
        template_from_doc({**doc, "symmetry": "even"})
    t = load_template(json.dumps({k: v for k, v in doc.items() if k != "unknowns"}))
    assert t.unknowns == ("lam", "mu")


def test_merrien_system_degree1_unconstrained():
    a, b, names = build_system(tmpl("merrien"), 0, 1)
    assert names == ("lam", "mu")
    assert all(x == 0 for x in a.entries)
    assert all(x == 0 for x in b)


def test_merrien_system_labels():
    s = build_system(tmpl("merrien"), 0, 2)
    assert s.matrix.rows == 12
    assert s.row_labels[:4] == ((0, -1, 1), (0, -1, 2), (0, 1, 1), (0, 1, 2))
    assert s.row_labels[-1] == (2, 1, 2)


def test_merrien_degree2_forces_lambda():
    res = construct(tmpl("merrien"), 0, 2)
    assert res.status == "parametric"
    assert res.free_names == ["mu"]
    assert res.values["lam"] == F(-1, 8)
    res = construct(tmpl("merrien"), 0, 3)
    assert res.status == "solved"
    assert res.mask == merrien(F(-1, 8), F(-1, 2))


def test_merrien_degree4_infeasible():
    res = construct(tmpl("merrien"), 0, 4)
    assert res.status == "infeasible"
    assert res.mask is None
    assert res.inconsistent_row[0] == 4


def test_extended_binding_reproduces_catalog():
    res = construct(tmpl("extended"), 0, 5, {"b2": F(1, 384), "b3": 0})
    assert res.status == "solved"
    assert res.mask == extended(F(1, 384), 0)
    assert certify(res.mask, 0).certified_degree >= 5


def test_extended_solution_set(rng):
    t = tmpl("extended")
    a, b, names = build_system(t, 0, 5)
    res = construct(t, 0, 5)
    assert res.status == "parametric"
    assert len(res.free_names) == 2 and len(res.nullspace) == 2
    for b2, b3 in zip(random_rationals(rng, 5), random_rationals(rng, 5)):
        rel = extended_relations(b2, b3)
        assert mat_vec(a, [rel[n] for n in names]) == b
        # and the pair (b2, b3) alone pins down a member of the family
        bound = construct(t, 0, 5, {"b2": b2, "b3": b3})
        assert bound.status == "solved" and bound.values == rel


def test_primal3_parametric(rng):
    t = tmpl("primal3")
    a, b, names = build_system(t, 0, 3)
    res = construct(t, 0, 3)
    assert res.status == "parametric"
    assert len(res.free_names) == 3
    v = res.values
    assert v == primal3_constraints(v["mu1"], v["eps2"], v["lam2"])
    for mu1, eps2, lam2 in zip(*(random_rationals(rng, 4) for _ in range(3))):
        p = primal3_constraints(mu1, eps2, lam2)
        assert mat_vec(a, [p[n] for n in names]) == b


def test_bindings_conflicting_with_constraints():
    res = construct(tmpl("merrien"), 0, 2, {"lam": 0})
    assert res.status == "infeasible"
    assert res.inconsistent_row == ("bind", "lam", 0)


def test_bindings_unknown_name():
    with pytest.raises(ValueError, match="not in template"):
        construct(tmpl("merrien"), 0, 2, {"nu": 1})


def test_fixed_template_without_unknowns():
    fixed = template_from_doc({"d": 2, "matrices": {
        "-1": [["1/2", "-1/8"], ["3/4", "-1/8"]], "0": [["1", "0"], ["0", "1/2"]],
        "1": [["1/2", "1/8"], ["-3/4", "-1/8"]]}})
    assert construct(fixed, 0, 3).status == "solved"
    assert construct(fixed, 0, 4).status == "infeasible"


def test_self_check_failure_is_raised(monkeypatch):
    mod = importlib.import_module("hermrepro.construct")
    from hermrepro.cascade import OracleVerdict

    broken = OracleVerdict(False, 0, 1, 0, (F(1), F(0)), (F(0), F(0)))
    monkeypatch.setattr(mod, "oracle_reproduces", lambda *a, **k: broken)
    with pytest.raises(ConstructionCheckError, match="fails the cascade"):
        construct(tmpl("merrien"), 0, 3)
