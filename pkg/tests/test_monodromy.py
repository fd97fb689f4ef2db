import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rcaforms.coxeter import build_coxeter
from rcaforms.irreps import get_irrep, irreps_of
from rcaforms.monodromy import (braid_generators, half_loop_path, hecke_check, hecke_parameters,
                                invariance_residual, invariant_form, invariant_form_solve, kz_form_on_L)


@pytest.mark.parametrize("c", ["1/4", "0.1", "-0.3"])
def test_rank1_eigenvalues(c):
    W = build_coxeter("A1")
    q = hecke_parameters(W, c)[0]
    assert q == pytest.approx(cmath.exp(-2j * cmath.pi * float(Fraction(c))))
    (T_triv,) = braid_generators(W, get_irrep(W, "triv"), c)
    (T_sgn,) = braid_generators(W, get_irrep(W, "sgn"), c)
    assert T_triv[0, 0] == pytest.approx(1, abs=1e-9)
    assert T_sgn[0, 0] == pytest.approx(-q, abs=1e-9)


@pytest.mark.parametrize("label,c", [("A2", "0.21"), ("B2", "0.15,0.3"), ("I2(5)", "-0.2"),
                                     ("A3", "0.33"), ("G2", "0.1,-0.25")])
def test_hecke_relations(label, c):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        Ts = braid_generators(W, lam, c)
        assert hecke_check(W, Ts, c).max_residual < 1e-8


@settings(max_examples=5)
@given(st.floats(-0.45, 0.45))
def test_hecke_random_parameter(c):
    W = build_coxeter("A2")
    lam = get_irrep(W, "std")
    Ts = braid_generators(W, lam, c)
    assert hecke_check(W, Ts, c).max_residual < 1e-8


def test_zero_parameter_gives_reflections():
    W = build_coxeter("B2")
    lam = get_irrep(W, "refl")
    Ts = braid_generators(W, lam, "0")
    for i, T in enumerate(Ts):
        assert np.allclose(T, lam.matrices_float[W.reflections[i].element], atol=1e-9)
    form = invariant_form(W, lam, "0")
    assert np.allclose(form.B, np.eye(2), atol=1e-8)


@pytest.mark.parametrize("label,c", [("A2", "0.3"), ("B2", "0.15,0.3"), ("I2(5)", "0.35"), ("A3", "0.2")])
def test_invariant_form(label, c):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        form = invariant_form(W, lam, c)
        assert form.solution_dim == 1
        assert form.residual < 1e-8
        assert form.antihermitian < 1e-6
        assert np.trace(form.B).real == pytest.approx(lam.dim)


def test_invariant_form_complex_parameter():
    W = build_coxeter("A2")
    lam = get_irrep(W, "std")
    c = "0.2+0.1j"
    Ts = braid_generators(W, lam, c)
    Ts_dag = braid_generators(W, lam, "0.2-0.1j")
    form = invariant_form_solve(Ts, Ts_dag, hermitize=False)
    assert invariance_residual(form.B, Ts, Ts_dag) < 1e-8


def test_kz_form_inertia():
    B = np.diag([2.0, -1.0, 1e-12])
    rep = kz_form_on_L(B)
    assert (rep.inertia.p, rep.inertia.q, rep.dim_kz_L) == (1, 1, 2)
    assert kz_form_on_L(B, -1).inertia.p == 1


def test_half_loop_avoids_walls():
    W = build_coxeter("B2")
    for i in range(W.rank):
        assert half_loop_path(W, i).clearance(W) > 1e-3
