from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcaforms.exact import ExactMatrix, nullspace, rank
from rcaforms.inertia import Inertia, inertia, inertia_exact
from rcaforms.polys import Poly, monomials
from rcaforms.scalars import QSqrt
from rcaforms.series import inverse_series, mul_trunc

small = st.integers(-6, 6)


def _sym(n, vals):
    A = np.zeros((n, n), dtype=object)
    k = 0
    for i in range(n):
        for j in range(i, n):
            A[i, j] = A[j, i] = vals[k]
            k += 1
    return A


sym_matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(small, min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2).map(lambda v: _sym(n, v)))


@given(sym_matrices)
def test_exact_inertia_matches_eigenvalues(A):
    I = inertia_exact(ExactMatrix.from_entries(A.tolist()))
    ev = np.linalg.eigvalsh(A.astype(float))
    tol = 1e-9 * max(1.0, np.abs(ev).max())
    assert (I.p, I.q, I.z) == (int((ev > tol).sum()), int((ev < -tol).sum()), int((np.abs(ev) <= tol).sum()))


@given(sym_matrices, st.data())
def test_inertia_invariant_under_congruence(A, data):
    n = A.shape[0]
    # unit upper-triangular P keeps the congruence class
    upper = data.draw(st.lists(small, min_size=n * n, max_size=n * n))
    P = np.eye(n, dtype=object)
    for i in range(n):
        for j in range(i + 1, n):
            P[i, j] = upper[i * n + j]
    G = ExactMatrix.from_entries(A.tolist())
    Pm = ExactMatrix.from_entries(P.tolist())
    assert inertia_exact(Pm.T @ G @ Pm) == inertia_exact(G)


def test_inertia_quadratic_field():
    s3 = QSqrt(0, 1, 3)
    G = ExactMatrix.from_entries([[1, s3], [s3, 2]])  # det = 2 - 3 < 0
    assert inertia(G) == Inertia(1, 1, 0)
    G = ExactMatrix.from_entries([[2, s3], [s3, 2]])  # det = 1
    assert inertia(G) == Inertia(2, 0, 0)
    G = ExactMatrix.from_entries([[3, s3], [s3, 1]])  # det = 0
    assert inertia(G) == Inertia(1, 0, 1)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_qsqrt_field_operations(a, b, c, d):
    x, y = QSqrt(a, b, 2), QSqrt(c, d, 2)
    assert float(x * y) == pytest.approx(float(x) * float(y), rel=1e-12, abs=1e-9)
    if y != 0:
        assert (x / y) * y == x
    assert x.sign() == (0 if x == 0 else (1 if float(x) > 0 else -1))


def test_nullspace_and_rank():
    M = ExactMatrix.from_entries([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(M) == 2
    K = nullspace(M)
    assert K.shape == (3, 1)
    assert (M @ K).is_zero()


@given(st.integers(1, 3), st.integers(0, 5))
def test_monomial_count(nvars, deg):
    from math import comb
    assert len(monomials(nvars, deg)) == comb(nvars + deg - 1, deg)


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_linear_division_roundtrip(form, coeffs):
    if not any(form):
        return
    q = Poly({(2, 0): coeffs[0], (1, 1): coeffs[1], (0, 2): coeffs[2]}, 2)
    assert (q * Poly.linear(form)).divide_linear(form) == q


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=5))
def test_series_inverse(p):
    if p[0] == 0:
        p[0] = 1
    p = [Fraction(v) for v in p]
    inv = inverse_series(p, 12)
    prod = mul_trunc(p, inv, 12)
    assert prod == [1] + [0] * 11
