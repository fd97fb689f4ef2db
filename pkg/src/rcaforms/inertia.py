"""Inertia (p, q, z) of symmetric / Hermitian matrices, exact or floating point."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import ExactMatrix
from .scalars import sign


@dataclass(frozen=True)
class Inertia:
    p: int
    q: int
    z: int

    @property
    def signature(self) -> int:
        return self.p - self.q

    @property
    def rank(self) -> int:
        return self.p + self.q


def inertia(G, tol_factor: float = 1.0) -> Inertia:
    """Dispatch: exact LDL^T for ExactMatrix, eigenvalue counts for arrays."""
    if isinstance(G, ExactMatrix):
        return inertia_exact(G)
    return inertia_float(np.asarray(G), tol_factor)


def inertia_float(G: np.ndarray, tol_factor: float = 1.0) -> Inertia:
    n = G.shape[0]
    if n == 0:
        return Inertia(0, 0, 0)
    H = (G + G.conj().T) / 2
    ev = np.linalg.eigvalsh(H)
    thr = tol_factor * n * np.finfo(float).eps * max(np.abs(ev).max(), np.finfo(float).tiny)
    p = int(np.sum(ev > thr))
    q = int(np.sum(ev < -thr))
    return Inertia(p, q, n - p - q)


def scaled_inertia_float(G: np.ndarray, tol_factor: float = 1.0) -> Inertia:
    """Float inertia after the congruence D^{-1/2} G D^{-1/2} with D = |diag G|.

    Congruence preserves inertia and evens out the factorial growth of Gram entries.
    """
    d = np.abs(np.real(np.diag(G))).astype(float)
    d[d == 0] = 1.0
    s = 1.0 / np.sqrt(d)
    return inertia_float(G * np.outer(s, s), tol_factor)


def inertia_exact(G: ExactMatrix) -> Inertia:
    n = G.shape[0]
    if n == 0:
        return Inertia(0, 0, 0)
    if G.b is None:
        return _inertia_integer(G.a.copy())
    certified = _inertia_quadratic_certified(G)
    if certified is not None:
        return certified
    return _inertia_field(G.entries())


def _inertia_quadratic_certified(G: ExactMatrix) -> Inertia | None:
    """Inertia over Q(sqrt d): exact rank plus eigenvalue signs certified by Weyl's bound.

    The rank comes from the rational 2n x 2n matrix [[a, d b], [b, a]], whose rank is twice
    that of a + b sqrt(d). Returns None when the float gap is too small to certify.
    """
    from .exact import _int_rank

    n = G.shape[0]
    a, b = G.a, G.b
    big = np.empty((2 * n, 2 * n), dtype=object)
    big[:n, :n] = a
    big[:n, n:] = b * G.d
    big[n:, :n] = b
    big[n:, n:] = a
    r = _int_rank(big) // 2
    H = G.to_float()
    H = (H + H.T) / 2
    dg = np.abs(np.diag(H))
    dg[dg == 0] = 1.0
    s = 1.0 / np.sqrt(dg)
    H = H * np.outer(s, s)
    ev = np.linalg.eigvalsh(H)
    bound = 64 * n * np.finfo(float).eps * max(np.linalg.norm(H), 1.0)
    order = np.argsort(-np.abs(ev))
    top = ev[order[:r]]
    if r and np.abs(top).min() <= 2 * bound:
        return None
    if r < n and np.abs(ev[order[r:]]).max() > bound:
        return None
    p = int((top > 0).sum())
    return Inertia(p, r - p, n - r)


def _inertia_integer(A: np.ndarray) -> Inertia:
    """Fraction-free symmetric elimination (Bareiss) with diagonal pivoting.

    When every remaining diagonal entry vanishes but an off-diagonal entry a_ij
    does not, the congruence e_i -> e_i + e_j makes the diagonal nonzero; this
    is a unimodular change, so Bareiss divisions stay exact.  The LDL^T pivots are
    ratios of successive leading minors, so their signs are sign(m_k * m_{k-1}).
    """
    n = A.shape[0]
    p = q = 0
    prev = 1
    active = list(range(n))
    M = A
    while M.shape[0]:
        m = M.shape[0]
        diag = [M[i, i] for i in range(m)]
        cand = [i for i in range(m) if diag[i] != 0]
        if not cand:
            off = None
            for i in range(m):
                for j in range(i + 1, m):
                    if M[i, j] != 0:
                        off = (i, j)
                        break
                if off:
                    break
            if off is None:
                return Inertia(p, q, n - p - q)
            i, j = off
            M[i] = M[i] + M[j]
            M[:, i] = M[:, i] + M[:, j]
            cand = [i]
        # smallest pivot keeps intermediate integers small
        k = min(cand, key=lambda i: abs(M[i, i]))
        piv = M[k, k]
        if (piv > 0) == (prev > 0):
            p += 1
        else:
            q += 1
        rest = [i for i in range(m) if i != k]
        if not rest:
            break
        col = M[rest, k]
        S = M[np.ix_(rest, rest)] * piv - np.outer(col, col)
        if prev != 1:
            S = S // prev
        prev = piv
        M = S
    return Inertia(p, q, n - p - q)


def _inertia_field(A: np.ndarray) -> Inertia:
    """Symmetric elimination over an exact ordered field (entries Fraction or QSqrt)."""
    n = A.shape[0]
    p = q = 0
    M = A.copy()
    while M.shape[0]:
        m = M.shape[0]
        cand = [i for i in range(m) if M[i, i] != 0]
        if not cand:
            off = None
            for i in range(m):
                for j in range(i + 1, m):
                    if M[i, j] != 0:
                        off = (i, j)
                        break
                if off:
                    break
            if off is None:
                return Inertia(p, q, n - p - q)
            i, j = off
            M[i] = M[i] + M[j]
            M[:, i] = M[:, i] + M[:, j]
            cand = [i]
        k = cand[0]
        piv = M[k, k]
        if sign(piv) > 0:
            p += 1
        else:
            q += 1
        rest = [i for i in range(m) if i != k]
        if not rest:
            break
        col = M[rest, k]
        M = M[np.ix_(rest, rest)] - np.outer(col, col / piv if not hasattr(piv, "d") else np.array([v / piv for v in col], dtype=object))
    return Inertia(p, q, n - p - q)


def signature_exact_or_float(G) -> int:
    return inertia(G).signature


def float_rank_threshold(G: np.ndarray) -> float:
    n = G.shape[0]
    if n == 0:
        return 0.0
    return n * np.finfo(float).eps * max(float(np.abs(G).max()), math.ulp(1.0))
