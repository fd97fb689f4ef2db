from fractions import Fraction
from math import prod

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcaforms.coxeter import ParamPoint, build_coxeter, canonical_label
from rcaforms.irreps import (get_irrep, h_c_lambda, inner_product, irreps_of, standard_character,
                             theta_poly)
from rcaforms.series import evaluate

ORDERS = {"A1": 2, "A2": 6, "A3": 24, "B2": 8, "B3": 48, "G2": 12, "I2(4)": 8, "I2(5)": 10, "I2(8)": 16}
SMALL = ["A1", "A2", "B2", "G2", "I2(5)", "A3"]


@pytest.mark.parametrize("label,order", ORDERS.items())
def test_group_order_and_degrees(label, order):
    W = build_coxeter(label)
    assert W.order == order
    assert prod(W.degrees) == order
    assert len(W.reflections) == sum(d - 1 for d in W.degrees)


def test_d4_is_the_largest_supported():
    W = build_coxeter("D4")
    assert W.order == 192 and len(W.reflections) == 12


def test_label_spellings():
    assert canonical_label("I2_5") == canonical_label("I2(5)")
    assert build_coxeter("I2_4").label == "I2(4)"


@pytest.mark.parametrize("label", SMALL)
def test_reflections_fix_their_hyperplane(label):
    W = build_coxeter(label)
    for r in W.reflections:
        S = W.element_float(r.element)
        a = np.array([float(v) for v in r.root])
        av = np.array([float(v) for v in r.coroot])
        assert a @ av == pytest.approx(2)
        assert np.allclose(S, np.eye(W.rank) - np.outer(av, a))
        assert np.allclose(S @ S, np.eye(W.rank))


@pytest.mark.parametrize("label", SMALL + ["B3"])
def test_irreps_orthogonality(label):
    W = build_coxeter(label)
    reps = irreps_of(W)
    assert sum(l.dim ** 2 for l in reps) == W.order
    for i, a in enumerate(reps):
        assert a.check_orthogonal() and a.check_coxeter_relations()
        for j, b in enumerate(reps):
            ip = inner_product(W, a.character, b.character)
            assert float(ip) == pytest.approx(1.0 if i == j else 0.0, abs=1e-9)


def test_irrep_aliases():
    W = build_coxeter("A2")
    assert get_irrep(W, "std").dim == 2
    with pytest.raises(KeyError):
        get_irrep(W, "nonexistent")


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_theta_at_one(label):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        total = 0
        for pi in irreps_of(W):
            th = theta_poly(W, lam, pi)
            assert evaluate(th, 1) == lam.dim * pi.dim ** 2
            total += evaluate(th, 1)
        assert total == lam.dim * W.order


def test_theta_b2_reflection_example():
    W = build_coxeter("B2")
    refl = get_irrep(W, "refl")
    assert sum(evaluate(theta_poly(W, refl, pi), 1) for pi in irreps_of(W)) == 16


def test_theta_a1():
    # coinvariants of A1 are 1, x: triv in degree 0, sgn in degree 1
    W = build_coxeter("A1")
    triv, sgn = get_irrep(W, "triv"), get_irrep(W, "sgn")
    assert theta_poly(W, triv, triv) == [1]
    assert theta_poly(W, triv, sgn) == [0, 1]


def test_standard_character_identity_is_hilbert_series():
    W = build_coxeter("A2")
    lam = get_irrep(W, "std")
    s = standard_character(W, lam, 0, 6)
    assert [int(v) for v in s.coeffs[:6]] == [2 * (n + 1) for n in range(6)]


def test_lowest_weight():
    W = build_coxeter("A1")
    assert h_c_lambda(W, get_irrep(W, "triv"), "1/4") == Fraction(1, 4)
    assert h_c_lambda(W, get_irrep(W, "sgn"), "1/4") == Fraction(3, 4)


@given(st.fractions(min_value=-3, max_value=3, max_denominator=50))
def test_param_point_exact_roundtrip(q):
    W = build_coxeter("B2")
    c = ParamPoint.of(W, str(q))
    assert c.values == (q, q) and c.is_exact and c.is_real


@given(st.floats(-2, 2, allow_nan=False))
def test_param_point_float_is_decimal_exact(x):
    W = build_coxeter("A1")
    assert ParamPoint.of(W, x).values == (Fraction(repr(x)),)


def test_param_point_arity():
    with pytest.raises(ValueError):
        ParamPoint.of(build_coxeter("A2"), "0.1,0.2")
