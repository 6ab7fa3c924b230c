from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermrepro.algebra import Matrix, Poly
from hermrepro.cascade import (
    HermiteSequence,
    WindowError,
    basic_limit_samples,
    default_window,
    diag_scale,
    oracle_reproduces,
    refine,
    sample_poly,
    samples_to_csv,
)
from hermrepro.catalog import FAMILIES, build_family, derham, merrien
from hermrepro.symbol import HermiteMask

from conftest import random_rationals, rationals

LAZY = HermiteMask(2, {0: Matrix.diag([1, F(1, 2)])})
X = Poly.x()


def test_diag_scale():
    assert diag_scale(3) == (1, F(1, 2), F(1, 4))


def test_lazy_refine():
    f0 = HermiteSequence(2, 0, -2, tuple((F(j), F(j * j)) for j in range(-2, 3)))
    f1 = refine(LAZY, f0)
    assert (f1.base, f1.last) == (-4, 4)
    for j in range(-2, 3):
        assert f1[2 * j] == f0[j]
    for i in (-3, -1, 1, 3):
        assert f1[i] == (0, 0)


def test_merrien_quadratic_at_one():
    m = merrien(F(-1, 8), F(-1, 2))
    f1 = refine(m, sample_poly(X * X, 2, 0, (-6, 6)))
    assert f1[1] == (F(1, 4), F(1))
    for i in f1.indices():
        assert f1[i] == (F(i, 2) ** 2, F(i))


def test_derham_linear():
    m = derham(F(-1, 8), F(-1, 2))
    f1 = refine(m, sample_poly(X, 2, F(-1, 2), (-6, 6)))
    assert f1[0] == (F(-1, 4), F(1))
    for i in f1.indices():
        assert f1[i] == ((i - F(1, 2)) / 2, F(1))


def test_sample_poly_examples():
    assert all(v == (1, 0) for v in sample_poly(Poly.const(1), 2, F(3, 7), (-3, 3)).values)
    assert sample_poly(X, 2, 0, (-2, 2)).values == tuple((F(j), F(1)) for j in range(-2, 3))
    assert sample_poly(X * X, 2, F(-1, 2), (0, 0))[0] == (F(1, 4), F(-1))
    assert sample_poly(X * X, 3, 0, (1, 1))[1] == (1, 2, 2)


def test_window_errors():
    m = derham(0, 0)
    with pytest.raises(WindowError, match="need at least"):
        refine(m, sample_poly(X, 2, 0, (0, 0)))
    with pytest.raises(WindowError, match="exhausted"):
        oracle_reproduces(m, F(-1, 2), 1, 5, (0, 1))
    with pytest.raises(ValueError):
        refine(m, sample_poly(X, 3, 0, (-5, 5)))
    with pytest.raises(WindowError):
        HermiteSequence(2, 0, 0, ())


vecs = st.tuples(rationals(), rationals())


@settings(max_examples=30, deadline=None)
@given(st.lists(vecs, min_size=9, max_size=9), st.lists(vecs, min_size=9, max_size=9),
       rationals(), rationals(), st.integers(0, 2))
def test_linearity(u, v, a, b, level):
    m = merrien(F(-1, 8), F(2, 5))
    su = HermiteSequence(2, level, -4, tuple(u))
    sv = HermiteSequence(2, level, -4, tuple(v))
    combo = HermiteSequence(2, level, -4, tuple(
        (a * x[0] + b * y[0], a * x[1] + b * y[1]) for x, y in zip(u, v)))
    ru, rv, rc = refine(m, su), refine(m, sv), refine(m, combo)
    for i in rc.indices():
        assert rc[i] == tuple(a * p + b * q for p, q in zip(ru[i], rv[i]))


@pytest.mark.parametrize("name", list(FAMILIES))
def test_shift_equivariance(name, rng):
    m = build_family(name)
    vals = tuple(tuple(random_rationals(rng, m.d)) for _ in range(12))
    a = refine(m, HermiteSequence(m.d, 1, -5, vals))
    b = refine(m, HermiteSequence(m.d, 1, -4, vals))
    assert b.base == a.base + 2
    for i in a.indices():
        assert b[i + 2] == a[i]


@pytest.mark.parametrize("name", ["merrien", "extended", "primal3"])
def test_interpolation_invariant(name, rng):
    m = build_family(name)
    assert m[0] == Matrix.diag(diag_scale(m.d))
    assert all(a.is_zero() for l, a in m.items() if l % 2 == 0 and l != 0)
    seq = HermiteSequence(m.d, 0, -8, tuple(tuple(random_rationals(rng, m.d)) for _ in range(17)))
    for _ in range(2):
        nxt = refine(m, seq)
        for i in seq.indices():
            if nxt.base <= 2 * i <= nxt.last:
                assert nxt[2 * i] == seq[i]
        seq = nxt


def test_oracle_examples():
    m = merrien(F(-1, 8), F(-1, 2))
    assert oracle_reproduces(m, 0, 3, 3, (-20, 20)).passed
    bad = oracle_reproduces(m, 0, 4, 3, (-20, 20))
    assert not bad.passed and bad.degree == 4
    assert bad.describe().startswith("FAIL at level 1, index ")
    assert oracle_reproduces(derham(F(-1, 8), F(-1, 2)), F(-1, 2), 3, 3).passed
    assert not oracle_reproduces(derham(F(-1, 8), F(-1, 2)), 0, 1, 2)


def test_default_window_survives_many_levels():
    m = derham(F(-1, 8), F(-1, 2))
    a, b = default_window(m)
    seq = sample_poly(X, 2, F(-1, 2), (a, b))
    for _ in range(8):
        seq = refine(m, seq)
    assert len(seq.values) > 0


@pytest.mark.parametrize("s", [1, 2])
def test_basic_limit_at_zero(s):
    m = merrien(F(-1, 8), F(-1, 2))
    for n in (1, 3, 5):
        samples = dict(basic_limit_samples(m, s, n))
        assert samples[F(0)] == tuple(F(1) if r == s - 1 else F(0) for r in range(2))
    lazy = dict(basic_limit_samples(LAZY, s, 4))
    assert lazy[F(0)] == tuple(F(1) if r == s - 1 else F(0) for r in range(2))
    assert all(v == (0, 0) for t, v in lazy.items() if t != 0)


def test_basic_limit_primal3():
    m = build_family("primal3")
    for s in (1, 2, 3):
        samples = dict(basic_limit_samples(m, s, 3))
        assert samples[F(0)] == tuple(F(int(r == s - 1)) for r in range(3))


def test_zero_data_stays_zero():
    m = derham(F(1, 3), F(2, 7))
    seq = HermiteSequence(2, 0, -6, ((F(0), F(0)),) * 13)
    for _ in range(3):
        seq = refine(m, seq)
        assert all(v == (0, 0) for v in seq.values)


def test_basic_limit_bad_component():
    with pytest.raises(ValueError):
        basic_limit_samples(LAZY, 3, 1)


def test_csv_format():
    samples = [(F(-1, 2), (F(1, 3), F(0))), (F(0), (F(1), F(-2)))]
    assert samples_to_csv(samples, 2) == "t,f,f1\n-1/2,1/3,0\n0,1,-2\n"
    dec = samples_to_csv(samples, 2, decimal=True).splitlines()
    assert dec[1] == "-0.5,0.33333333333333331,0"
    three = samples_to_csv([(F(0), (F(1), F(0), F(0)))], 3)
    assert three.splitlines()[0] == "t,f,f1,f2"
