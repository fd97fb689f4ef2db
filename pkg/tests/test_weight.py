import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import gamma

from rcaforms.coxeter import build_coxeter
from rcaforms.irreps import get_irrep
from rcaforms.monodromy import invariant_form
from rcaforms.polys import Poly
from rcaforms.weight import (ResonanceError, asymptotic_invariance_check, basis_vector, delta_shift,
                             equivariance_residual, frobenius_wall_solution, gaussian_mass, homogeneity_check,
                             homogeneity_degree, normalization, quadrature_verify, support_report,
                             trivial_weight, two_sided_transport, weight_from_monodromy)


def test_rank1_gaussian_mass_closed_form():
    # int |x|^{-2c} e^{-x^2/2} dx = 2^{1/2 - c} Gamma(1/2 - c)
    W = build_coxeter("A1")
    for c in (-0.7, 0.0, 0.2, 0.45):
        assert gaussian_mass(W, c) == pytest.approx(2 ** (0.5 - c) * gamma(0.5 - c), rel=1e-10)


def test_rank2_gaussian_mass_matches_plain_quadrature():
    W = build_coxeter("A2")
    c = -0.3  # integrand is bounded, so a plain 2-d quadrature is a fair oracle
    ang, _ = quad(lambda t: np.prod(np.abs(W.roots_float @ [math.cos(t), math.sin(t)]) ** 0.6), 0, 2 * math.pi,
                  limit=400)
    radial, _ = quad(lambda r: r ** (1 + 1.8) * math.exp(-r * r / 2), 0, np.inf)
    assert gaussian_mass(W, c) == pytest.approx(ang * radial, rel=1e-8)


@pytest.mark.parametrize("label,c", [("A1", "0.2"), ("A2", "0.15"), ("B2", "0.1,0.3"), ("A2", "-0.3")])
def test_trivial_weight_closed_form(label, c):
    W = build_coxeter(label)
    lam = get_irrep(W, "triv")
    B = invariant_form(W, lam, c).B
    mu = normalization(W, lam, c, B).mu
    rng = np.random.default_rng(11)
    for _ in range(4):
        x = rng.normal(size=W.rank)
        K = weight_from_monodromy(W, lam, c, B, x, mu=mu).K
        assert K[0, 0] == pytest.approx(trivial_weight(W, c, x), rel=1e-6)


@pytest.mark.parametrize("c", ["0.2", "-0.6", "1"])
def test_rank1_normalization_is_gamma_value(c):
    # K_raw(x) = |x|^{-2c}, and mu is its analytically continued Gaussian mass
    W = build_coxeter("A1")
    lam = get_irrep(W, "triv")
    mu = normalization(W, lam, c, invariant_form(W, lam, c).B).mu
    cf = float(c)
    assert mu.real == pytest.approx(2 ** (0.5 - cf) * gamma(0.5 - cf), rel=1e-8)
    if c == "1":
        assert mu.real < 0


@pytest.mark.parametrize("label,irrep,c", [("B2", "refl", "0.15,0.3"), ("A2", "std", "0.2"),
                                           ("A3", "refl", "0.1")])
def test_homogeneity(label, irrep, c):
    W = build_coxeter(label)
    lam = get_irrep(W, irrep)
    B = invariant_form(W, lam, c).B
    x = W.basepoint * 0.8 + 0.1
    samples = [weight_from_monodromy(W, lam, c, B, t * x) for t in (0.5, 0.8, 1.3, 2.0)]
    rep = homogeneity_check(samples, homogeneity_degree(W, lam, c).real)
    assert rep.deviation < 1e-6


def test_equivariance_and_support():
    W = build_coxeter("B2")
    lam = get_irrep(W, "refl")
    c = "0.12,0.2"
    B = invariant_form(W, lam, c).B
    x = np.array([0.7, -0.3])
    res = equivariance_residual(W, lam, lambda y: weight_from_monodromy(W, lam, c, B, y).K, x)
    assert res < 1e-8
    rep = support_report(W, lam, c, B)
    assert rep.full_support and rep.equivariance < 1e-8


def test_two_sided_transport_agrees_with_monodromy():
    W = build_coxeter("I2(4)")
    lam = get_irrep(W, "refl")
    c = "0.12,0.2"
    B = invariant_form(W, lam, c).B
    x0 = W.basepoint
    s0 = weight_from_monodromy(W, lam, c, B, x0)
    x1 = x0 * 1.4 + np.array([0.02, 0.01])
    moved = two_sided_transport(W, lam, c, s0, x1)
    direct = weight_from_monodromy(W, lam, c, B, x1)
    assert np.allclose(moved.K, direct.K, rtol=1e-7, atol=1e-9)


def test_wall_off_blocks_and_negative_control():
    W = build_coxeter("I2(4)")
    lam = get_irrep(W, "refl")
    c = "0.12,0.2"
    B = invariant_form(W, lam, c).B
    for i in range(2):
        rep = asymptotic_invariance_check(W, lam, c, i, B)
        assert rep.relative_off < 1e-6 and rep.constancy < 1e-6
    Bbad = B + 0.3 * np.array([[0.0, 1.0], [1.0, 0.0]])
    worst = max(asymptotic_invariance_check(W, lam, c, i, Bbad).relative_off for i in range(2))
    assert worst > 1e-2


def test_frobenius_resonance_is_refused():
    W = build_coxeter("I2(4)")
    with pytest.raises(ResonanceError):
        frobenius_wall_solution(W, get_irrep(W, "refl"), "0.5,0.2", 0)


@settings(max_examples=10)
@given(st.floats(-2.4, 2.4))
def test_delta_shift_is_least(c):
    W = build_coxeter("A1")
    N = delta_shift(W, c)
    assert 2 * N - 2 * abs(c) > -1 and (N == 0 or 2 * (N - 1) - 2 * abs(c) <= -1)


@pytest.mark.parametrize("c", ["0.2", "-0.3", "0.45"])
def test_rank1_quadrature_gamma_identity(c):
    W = build_coxeter("A1")
    lam = get_irrep(W, "triv")
    x = basis_vector(W, lam, 0, Poly.monomial((1,)))
    r = quadrature_verify(W, lam, c, x, x)
    assert r.exact.real == pytest.approx(1 - 2 * float(c))
    assert r.relative_error < 1e-6


def test_rank2_quadrature_against_gram():
    W = build_coxeter("I2(4)")
    lam = get_irrep(W, "refl")
    c = "0.12,0.2"
    P = basis_vector(W, lam, 0, Poly.monomial((1, 1)))
    Q = basis_vector(W, lam, 1, Poly.monomial((2, 0)))
    for A, Bv in ((P, P), (P, Q), (Q, Q)):
        assert quadrature_verify(W, lam, c, A, Bv).relative_error < 1e-4
