"""Jantzen filtration of Delta_{c0}(lam) along c(t) = c0 + t c1, and the wall-crossing identities."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cherednik import _add, _mm, _scale, _zeros, graded_module
from .coxeter import CoxeterDatum, ParamPoint
from .exact import ExactMatrix, hstack, rank, to_float
from .forms import beta_gram, gram_sequence, line_pencil
from .inertia import inertia
from .irreps import WIrrep
from .scalars import sign


class DegenerateDirection(ValueError):
    """det G(t) vanishes identically along the chosen direction."""


@dataclass
class JantzenLevel:
    degree: int
    level: int
    dim: int
    p: int
    q: int

    @property
    def signature(self) -> int:
        return self.p - self.q


@dataclass
class JantzenDegree:
    degree: int
    valuations: list[int]
    levels: list[JantzenLevel]
    basis: object  # columns P(0) e_i, ordered as valuations
    unit_signs: list[int]

    def filtration_basis(self, k: int):
        cols = [i for i, a in enumerate(self.valuations) if a >= k]
        if isinstance(self.basis, ExactMatrix):
            return self.basis[:, cols] if cols else ExactMatrix.zeros((self.basis.shape[0], 0))
        return self.basis[:, cols]

    @property
    def ord_det(self) -> int:
        return sum(self.valuations)

    def total_signature(self) -> int:
        return sum(l.signature for l in self.levels)

    def alternating_signature(self) -> int:
        return sum((-1) ** l.level * l.signature for l in self.levels)


def _scalar(M, i, j):
    return M[i, j] if isinstance(M, ExactMatrix) else M[i, j]


def _nonzero(x, tol) -> bool:
    if isinstance(x, (float, complex, np.floating)):
        return abs(x) > tol
    return x != 0


class _SeriesMatrix:
    """Symmetric matrix over Q[[t]] truncated mod t^K, as a list of coefficient matrices."""

    def __init__(self, coeffs: list, K: int, tol: float):
        exact = isinstance(coeffs[0], ExactMatrix)
        m = coeffs[0].shape[0]
        self.c = [coeffs[n] if n < len(coeffs) else _zeros(exact, (m, m)) for n in range(K)]
        self.K = K
        self.tol = tol
        self.exact = exact

    @property
    def m(self) -> int:
        return self.c[0].shape[0]

    def entry(self, n, i, j):
        return self.c[n][i, j]

    def valuation_matrix(self) -> np.ndarray:
        m = self.m
        val = np.full((m, m), self.K, dtype=int)
        for n in reversed(range(self.K)):
            M = self.c[n]
            if self.exact:
                mask = M.a != 0
                if M.b is not None:
                    mask |= M.b != 0
            else:
                mask = np.abs(to_float(M)) > self.tol
            val[mask] = n
        return val

    def congruence_add(self, i: int, j: int) -> None:
        """e_i -> e_i + e_j."""
        for n in range(self.K):
            M = self.c[n]
            if self.exact:
                E = ExactMatrix.identity(self.m).entries()
                E[j, i] = 1
                E = ExactMatrix.from_entries(E)
                self.c[n] = E.T @ M @ E
            else:
                E = np.eye(self.m)
                E[j, i] = 1
                self.c[n] = E.T @ to_float(M) @ E

    def eliminate(self, k: int, v: int):
        """Pivot on (k, k) = t^v u; return (u coefficients, quotient constants q_j = g_jk/g_kk at t=0)."""
        K, m = self.K, self.m
        u = [self.c[v + n][k, k] if v + n < K else 0 for n in range(K - v)]
        winv = _series_inverse(u)
        # column k divided by t^v, for the remaining rows
        rest = [i for i in range(m) if i != k]
        col = [self.c[v + n][rest, [k]] if v + n < K else None for n in range(K - v)]
        q0 = [x / u[0] if not isinstance(x, (float, complex)) else x / u[0]
              for x in (col[0].entries()[:, 0] if self.exact else to_float(col[0])[:, 0])]
        # d = col * u^{-1} as a series vector
        L = K - v
        d = []
        for n in range(L):
            acc = None
            for a in range(n + 1):
                if col[a] is None or winv[n - a] == 0:
                    continue
                term = _scale(col[a], winv[n - a])
                acc = term if acc is None else _add(acc, term)
            d.append(acc)
        new = []
        for n in range(K):
            M = self.c[n][rest, :][:, rest] if self.exact else to_float(self.c[n])[np.ix_(rest, rest)]
            # subtract t^v * sum_{a+b = n - v} d_a col_b^T
            if n >= v:
                for a in range(n - v + 1):
                    b = n - v - a
                    if d[a] is None or col[b] is None:
                        continue
                    M = _add(M, _scale(_mm(d[a], col[b].T), -1))
            new.append(M)
        self.c = new
        return u, q0


def _series_inverse(u: list) -> list:
    inv = [None] * len(u)
    inv[0] = 1 / u[0] if isinstance(u[0], (float, complex)) else Fraction(1) / u[0] if not hasattr(u[0], "d") else u[0] ** -1
    for n in range(1, len(u)):
        acc = 0
        for j in range(1, n + 1):
            if u[j] != 0:
                acc = acc + u[j] * inv[n - j]
        inv[n] = -acc * inv[0]
    return inv


def _gram_coefficients(datum: CoxeterDatum, irrep: WIrrep, c0, c1, d: int) -> list:
    G = beta_gram(datum, irrep, line_pencil(datum, c0, c1), d)
    deg = max(G.degree(), 0)
    return [G.coefficient((n,)) for n in range(deg + 1)], deg


def _nondegenerate_somewhere(coeffs: list, seed: int = 11) -> bool:
    rng = random.Random(seed)
    for _ in range(2):
        t = Fraction(rng.randint(1, 997), rng.randint(998, 4001))
        M = None
        for n, Cn in enumerate(coeffs):
            term = _scale(Cn, t ** n if isinstance(Cn, ExactMatrix) else float(t) ** n)
            M = term if M is None else _add(M, term)
        if isinstance(M, ExactMatrix):
            if rank(M) == M.shape[0]:
                return True
        else:
            A = to_float(M)
            if np.linalg.matrix_rank(A) == A.shape[0]:
                return True
    return False


def jantzen_filtration(datum: CoxeterDatum, irrep: WIrrep, c0, c1, d: int,
                       precision: int | None = None, tol: float = 1e-9) -> JantzenDegree:
    """Valuations, levels and induced-form inertia in degree d.

    Symmetric elimination over the local ring Q[[t]]: always pivot on an entry of least
    t-adic valuation, using e_i -> e_i + e_j when only off-diagonal entries attain it.
    """
    coeffs, deg = _gram_coefficients(datum, irrep, c0, c1, d)
    m = coeffs[0].shape[0]
    if m == 0:
        return JantzenDegree(d, [], [], coeffs[0], [])
    if not _nondegenerate_somewhere(coeffs):
        raise DegenerateDirection(f"det G(t) vanishes identically in degree {d}")
    bound = deg * m + 2
    K = precision or min(bound, 8)
    while True:
        try:
            return _diagonalize(coeffs, d, K, tol)
        except _PrecisionExhausted:
            if K >= bound:
                raise DegenerateDirection(f"det G(t) vanishes to order >= {K} in degree {d}")
            K = min(bound, 2 * K)


class _PrecisionExhausted(Exception):
    pass


def _diagonalize(coeffs, d: int, K: int, tol: float) -> JantzenDegree:
    S = _SeriesMatrix(coeffs, K, tol)
    m0 = S.m
    exact = S.exact
    if exact:
        P0 = [[Fraction(int(i == j)) for j in range(m0)] for i in range(m0)]
    else:
        P0 = np.eye(m0)
    P0 = np.array(P0, dtype=object) if exact else P0
    cols = list(range(m0))  # current basis vector j is column cols[j] of P0
    vals, signs, basis_cols = [], [], []
    while S.m:
        V = S.valuation_matrix()
        v = int(V.min())
        if v >= K:
            raise _PrecisionExhausted
        diag = [i for i in range(S.m) if V[i, i] == v]
        if diag:
            k = diag[0]
        else:
            i, j = map(int, np.argwhere(V == v)[0])
            S.congruence_add(i, j)
            P0[:, cols[i]] = P0[:, cols[i]] + P0[:, cols[j]]
            k = i
        u, q0 = S.eliminate(k, v)
        vals.append(v)
        signs.append(sign(u[0]) if exact else int(np.sign(u[0])))
        basis_cols.append(P0[:, cols[k]].copy())
        rest = [i for i in range(len(cols)) if i != k]
        for idx, j in enumerate(rest):
            if _nonzero(q0[idx], tol):
                P0[:, cols[j]] = P0[:, cols[j]] - q0[idx] * P0[:, cols[k]]
        cols = [cols[j] for j in rest]
    order = sorted(range(len(vals)), key=lambda i: vals[i])
    vals = [vals[i] for i in order]
    signs = [signs[i] for i in order]
    B = np.array([basis_cols[i] for i in order], dtype=object if exact else float).T
    basis = ExactMatrix.from_entries(B) if exact else B.astype(float)
    levels = []
    for k in sorted(set(vals)):
        sel = [s for a, s in zip(vals, signs) if a == k]
        levels.append(JantzenLevel(d, k, len(sel), sum(1 for s in sel if s > 0), sum(1 for s in sel if s < 0)))
    return JantzenDegree(d, vals, levels, basis, signs)


@dataclass
class JantzenSweep:
    degrees: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)


def jantzen_sweep(datum: CoxeterDatum, irrep: WIrrep, c0, c1, N: int) -> JantzenSweep:
    """Filtrations in degrees 0..N; degrees with a degenerate direction are skipped and reported."""
    out = JantzenSweep()
    for d in range(N + 1):
        try:
            out.degrees[d] = jantzen_filtration(datum, irrep, c0, c1, d)
        except DegenerateDirection as e:
            out.skipped[d] = str(e)
    return out


def jantzen_signatures(datum: CoxeterDatum, irrep: WIrrep, c0, c1, N: int) -> list[int]:
    """sum_k sign beta^(k) per degree: the signature of the form limit from the c1 side."""
    out = []
    for d in range(N + 1):
        out.append(jantzen_filtration(datum, irrep, c0, c1, d).total_signature())
    return out


def _in_span(B, V) -> bool:
    if V.shape[1] == 0:
        return True
    if B.shape[1] == 0:
        return V.is_zero() if isinstance(V, ExactMatrix) else not np.any(np.abs(V) > 1e-8)
    if isinstance(B, ExactMatrix) and isinstance(V, ExactMatrix):
        return rank(hstack([B, V])) == rank(B)
    B, V = to_float(B), to_float(V)
    return np.linalg.matrix_rank(np.hstack([B, V]), tol=1e-8) == np.linalg.matrix_rank(B, tol=1e-8)


@dataclass
class SubmoduleReport:
    closed: bool
    witness: tuple | None = None


def submodule_check(datum: CoxeterDatum, irrep: WIrrep, c0, filtration: dict) -> SubmoduleReport:
    """Check that each Delta^{>=k} is stable under x_j (up) and D_y at c0 (down)."""
    mod = graded_module(datum, irrep)
    c0 = ParamPoint.of(datum, c0)
    degrees = sorted(filtration)
    top = max((max(f.valuations, default=0) for f in filtration.values()), default=0)
    for k in range(1, top + 1):
        for d in degrees:
            B = filtration[d].filtration_basis(k)
            if B.shape[1] == 0:
                continue
            for j in range(mod.l):
                if d + 1 in filtration:
                    X = mod.mult_x(j, d)
                    img = X @ B if isinstance(B, ExactMatrix) and isinstance(X, ExactMatrix) else to_float(X) @ to_float(B)
                    if not _in_span(filtration[d + 1].filtration_basis(k), img):
                        return SubmoduleReport(False, ("x", j, d, k))
                if d - 1 in filtration and d >= 1:
                    D = mod.dunkl_basis(j, d).at(c0)
                    img = D @ B if isinstance(B, ExactMatrix) and isinstance(D, ExactMatrix) else to_float(D) @ to_float(B)
                    if not _in_span(filtration[d - 1].filtration_basis(k), img):
                        return SubmoduleReport(False, ("D", j, d, k))
    return SubmoduleReport(True)


@dataclass
class WallCrossingRow:
    degree: int
    sign_plus: int
    sign_minus: int
    predicted_plus: int
    predicted_minus: int
    sign_L: int
    predicted_L: int

    @property
    def ok(self) -> bool:
        return (self.sign_plus == self.predicted_plus and self.sign_minus == self.predicted_minus
                and self.sign_L == self.predicted_L)


@dataclass
class WallCrossingReport:
    rows: list[WallCrossingRow]
    scan_clean: bool
    skipped: dict

    @property
    def ok(self) -> bool:
        return self.scan_clean and all(r.ok for r in self.rows)

    def mismatches(self) -> list[WallCrossingRow]:
        return [r for r in self.rows if not r.ok]


def _point(datum, c0, c1, s):
    a = ParamPoint.of(datum, c0).values
    b = ParamPoint.of(datum, c1).values
    return ParamPoint(tuple(x + s * y for x, y in zip(a, b)))


def wall_crossing_check(datum: CoxeterDatum, irrep: WIrrep, c0, c1, s, N: int) -> WallCrossingReport:
    """Compare sign beta at c0 +- s c1 and the signature of L_{c0} with the Jantzen predictions.

    Both sides are always checked, so s and -s give the same report.
    """
    s = abs(ParamPoint.of(datum, s).values[0])
    if s == 0:
        raise ValueError("wall-crossing check needs s != 0")
    sweep = jantzen_sweep(datum, irrep, c0, c1, N)
    plus, minus = _point(datum, c0, c1, s), _point(datum, c0, c1, -s)
    seq_p = gram_sequence(datum, irrep, plus)
    seq_m = gram_sequence(datum, irrep, minus)
    seq_0 = gram_sequence(datum, irrep, ParamPoint.of(datum, c0))
    rows = []
    scan_clean = True
    for d, jd in sweep.degrees.items():
        sp = inertia(seq_p.gram(d))
        sm = inertia(seq_m.gram(d))
        s0 = inertia(seq_0.gram(d))
        if sp.z or sm.z:
            scan_clean = False
        # no other wall in (0, s]: the inertia must be constant on a geometric grid
        for j in range(1, 4):
            for sgn, ref in ((1, sp), (-1, sm)):
                pt = _point(datum, c0, c1, sgn * s / 2 ** j)
                if inertia(beta_gram(datum, irrep, pt, d)) != ref:
                    scan_clean = False
        rows.append(WallCrossingRow(
            d, sp.signature, sm.signature, jd.total_signature(), jd.alternating_signature(),
            s0.signature, sum(l.signature for l in jd.levels if l.level == 0)))
    return WallCrossingReport(rows, scan_clean, sweep.skipped)
