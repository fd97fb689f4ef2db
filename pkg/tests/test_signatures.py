from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rcaforms.coxeter import build_coxeter
from rcaforms.irreps import get_irrep, irreps_of, theta_poly
from rcaforms.series import inverse_series, mul_trunc, poly_mul
from rcaforms.signatures import (FitError, RationalFit, asymptotic_from_sequence, asymptotic_signature,
                                 cesaro_estimate, epsilon_decomposition, isotypic_ratio, isotypic_sch,
                                 rational_fit, sch_sequence)


@pytest.mark.parametrize("label", ["A1", "A2", "B2"])
def test_signature_at_zero_is_dimension(label):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        s = sch_sequence(W, lam, "0", 8, "Delta")
        assert s.values == s.dims


def test_rank1_signatures():
    W = build_coxeter("A1")
    triv = get_irrep(W, "triv")
    assert sch_sequence(W, triv, "1", 10, "Delta").values == [1] + [-1] * 10
    half = sch_sequence(W, triv, "1/2", 10, "L")
    assert half.values == [1] + [0] * 10 and half.dims == [1] + [0] * 10


@given(st.fractions(min_value=-3, max_value=3, max_denominator=16))
def test_rank1_signature_matches_product_sign(c):
    # sign of prod_{k<=n} (k - c(1 - (-1)^k)) for the trivial irrep
    W = build_coxeter("A1")
    s = sch_sequence(W, get_irrep(W, "triv"), c, 12, "Delta").values
    prod = Fraction(1)
    for n in range(13):
        if n:
            prod *= n - c * (1 - (-1) ** n)
        assert s[n] == (prod > 0) - (prod < 0)


def test_isotypic_components_sum():
    W = build_coxeter("B2")
    lam = get_irrep(W, "refl")
    total = sch_sequence(W, lam, "0.3,0.7", 8, "L").values
    parts = [isotypic_sch(W, lam, pi, "0.3,0.7", 8).values for pi in irreps_of(W)]
    assert [sum(p[n] for p in parts) for n in range(9)] == total


@pytest.mark.parametrize("label", ["A1", "A2", "B2"])
def test_isotypic_at_zero_is_theta_series(label):
    W = build_coxeter(label)
    N = 10
    denom = [1]
    for d in W.degrees:
        denom = poly_mul(denom, [1] + [0] * (d - 1) + [-1])
    inv = inverse_series(denom, N + 1)
    for lam in irreps_of(W):
        for pi in irreps_of(W):
            expected = mul_trunc(theta_poly(W, lam, pi), inv, N + 1)
            got = isotypic_sch(W, lam, pi, "0", N, "Delta").values
            assert got == [int(v) for v in expected]


def test_rank1_sgn_isotypic_odd_degrees():
    W = build_coxeter("A1")
    s = isotypic_sch(W, get_irrep(W, "triv"), get_irrep(W, "sgn"), "0", 7, "Delta").values
    assert s == [0, 1, 0, 1, 0, 1, 0, 1]


def test_rational_fit_examples():
    W = build_coxeter("A1")
    triv = get_irrep(W, "triv")
    f = rational_fit(sch_sequence(W, triv, "0", 20, "Delta"), None)
    assert (f.r, f.p) == (1, [1])
    f = rational_fit(sch_sequence(W, triv, "1", 20, "Delta"), None)
    assert (f.r, f.p) == (1, [1, -2])
    f = rational_fit(sch_sequence(W, triv, "1/2", 20, "L"), None)
    assert (f.r, f.p) == (0, [1])


def test_rational_fit_fails_loudly():
    with pytest.raises(FitError):
        rational_fit([2 ** n for n in range(30)], None)


def test_asymptotic_signature_pole_mismatch():
    with pytest.raises(ValueError):
        asymptotic_signature(RationalFit(1, [1], 10), RationalFit(2, [1], 10))


@pytest.mark.parametrize("c,a", [("1/4", 1), ("1", -1), ("0", 1), ("3/2", Fraction(-1, 3)), ("-1/4", 1)])
def test_rank1_asymptotic(c, a):
    W = build_coxeter("A1")
    res = asymptotic_from_sequence(sch_sequence(W, get_irrep(W, "triv"), c, 24, "L"))
    assert res.method == "rational-fit" and res.a == a


def test_estimate_mode_is_labelled():
    a, err = cesaro_estimate([1, -1, 1, -1] * 10, [1] * 40)
    assert -1 <= a <= 1 and err >= 0


def test_epsilon_at_rank1_wall():
    W = build_coxeter("A1")
    eps = epsilon_decomposition(W, get_irrep(W, "triv"), "1/2", 10)
    assert eps.factors == [("triv", 0), ("sgn", 1)]
    assert eps.eps == [1, -1]


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_isotypic_ratio_at_zero(label):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        for pi in irreps_of(W):
            assert isotypic_ratio(W, lam, pi, "0", 20) == Fraction(pi.dim ** 2, W.order)


def test_ratio_at_one_cancels_common_zeros():
    from rcaforms.signatures import ratio_at_one
    # (1 - t)(1 + t) / ((1 - t)(2 + t)) -> 2/3
    assert ratio_at_one([1, 0, -1], [2, -1, -1]) == Fraction(2, 3)
