from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcaforms.cherednik import graded_module
from rcaforms.coxeter import ParamPoint, build_coxeter
from rcaforms.exact import ExactMatrix, to_float
from rcaforms.forms import (asymmetry, beta_gram, gamma_adjointness_check, monomial_norms,
                            radical_per_degree, sign_beta_vs_gamma, symbolic_class_pencil)
from rcaforms.irreps import get_irrep, irreps_of


def rank1_norm_poly(n, sign=1):
    """Coefficients (in c) of prod_{k<=n} (k - sign c (1 - (-1)^k)), computed from the product directly."""
    poly = [Fraction(1)]
    for k in range(1, n + 1):
        lin = [Fraction(k), Fraction(-sign * (1 - (-1) ** k))]
        out = [Fraction(0)] * (len(poly) + 1)
        for i, a in enumerate(poly):
            for j, b in enumerate(lin):
                out[i + j] += a * b
        poly = out
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def test_rank1_norm_oracle_sample():
    # (1 - 2c)(2)(3 - 2c)(4)(5 - 2c)(6) expanded by hand
    assert rank1_norm_poly(6) == [720, -2208, 1728, -384]


@pytest.mark.parametrize("irrep,sign", [("triv", 1), ("sgn", -1)])
def test_rank1_symbolic_gram(irrep, sign):
    W = build_coxeter("A1")
    lam = get_irrep(W, irrep)
    for n in range(0, 16):
        G = beta_gram(W, lam, symbolic_class_pencil(W), n)
        coeffs = [G.coefficient((k,)).entries()[0, 0] if not G.coefficient((k,)).is_zero() else 0
                  for k in range(G.degree() + 1)]
        assert coeffs == rank1_norm_poly(n, sign)


@given(st.fractions(min_value=-2, max_value=2, max_denominator=20), st.integers(0, 10))
def test_rank1_numeric_gram(c, n):
    W = build_coxeter("A1")
    G = beta_gram(W, get_irrep(W, "triv"), ParamPoint.of(W, c), n)
    expected = sum(a * c ** k for k, a in enumerate(rank1_norm_poly(n)))
    assert G.entries()[0, 0] == expected


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_gram_at_zero_is_monomial_norms(label):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        for n in range(4):
            G = to_float(beta_gram(W, lam, ParamPoint.of(W, "0"), n))
            assert np.allclose(G, np.diag(monomial_norms(W, lam, n)))


def test_a2_degree_one():
    W = build_coxeter("A2")
    G = beta_gram(W, get_irrep(W, "triv"), ParamPoint.of(W, "1/7"), 1)
    assert G == ExactMatrix.identity(2).scale(1 - Fraction(3, 7))


@pytest.mark.parametrize("label,c", [("A2", "2/7"), ("B2", "1/3,-1/4"), ("A3", "1/5")])
def test_gram_symmetric_and_split_independent(label, c):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        for n in range(1, 4):
            G1 = beta_gram(W, lam, c, n, split="first")
            G2 = beta_gram(W, lam, c, n, split="last")
            assert asymmetry(G1) == 0.0
            assert G1 == G2


def test_gram_w_invariant():
    W = build_coxeter("B2")
    lam = get_irrep(W, "refl")
    mod = graded_module(W, lam)
    for n in range(1, 4):
        G = beta_gram(W, lam, "1/3,2/5", n)
        for w in range(W.order):
            A = mod.w_action(w, n)
            assert A.T @ G @ A == G


@pytest.mark.parametrize("irrep,c", [("triv", "1/2"), ("sgn", "-1/2")])
def test_rank1_radical(irrep, c):
    W = build_coxeter("A1")
    lam = get_irrep(W, irrep)
    dims = [radical_per_degree(W, lam, c, n).dim for n in range(6)]
    assert dims == [0, 1, 1, 1, 1, 1]


def test_generic_radical_is_zero():
    W = build_coxeter("B2")
    for lam in irreps_of(W):
        assert all(radical_per_degree(W, lam, "0.137,0.291", n).dim == 0 for n in range(5))


@pytest.mark.parametrize("label,c", [("A2", "0.3"), ("B2", "0.3,0.7"), ("A2", "-0.45")])
def test_sign_beta_equals_sign_gamma(label, c):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        b, g = sign_beta_vs_gamma(W, lam, c, 4)
        assert b == g


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_gamma_adjointness(label):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        assert gamma_adjointness_check(W, lam, "2/9" if W.n_classes == 1 else "2/9,1/3", 4) == 0.0


def test_gamma_rank1_degree_two():
    # gamma(x, x) = 1 - 2c for A1 triv
    from rcaforms.forms import gaussian_gram
    W = build_coxeter("A1")
    G = gaussian_gram(W, get_irrep(W, "triv"), "1/3", 1)
    assert G.entries()[1, 1] == Fraction(1, 3)
