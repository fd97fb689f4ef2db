"""Graded pieces of the standard module C[h] (x) lam: multiplication, Dunkl operators, grading element."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coxeter import CoxeterDatum, ParamPoint
from .exact import ExactMatrix, hstack, to_float, zeros_like
from .irreps import WIrrep, h_c_lambda
from .polys import Poly, monomials


def _exact(*mats) -> bool:
    return all(isinstance(m, ExactMatrix) for m in mats)


def _kron(A, B):
    if _exact(A, B):
        from .exact import kron
        return kron(A, B)
    return np.kron(to_float(A), to_float(B))


def _add(A, B):
    if _exact(A, B):
        return A + B
    return to_float(A) + to_float(B)


def _mm(A, B):
    if _exact(A, B):
        return A @ B
    return to_float(A) @ to_float(B)


def _scale(A, x):
    if isinstance(A, ExactMatrix) and not isinstance(x, (float, complex)):
        return A.scale(x)
    return to_float(A) * (x if isinstance(x, complex) else float(x))


def _zeros(exact: bool, shape):
    return ExactMatrix.zeros(shape) if exact else np.zeros(shape)


def _eye(exact: bool, n: int):
    return ExactMatrix.identity(n) if exact else np.eye(n)


def _pick_columns(sources, choices, exact: bool, nrows: int):
    """Column j of the result is column choices[j][1] of sources[choices[j][0]]."""
    if not choices:
        return _zeros(exact, (nrows, 0))
    order = sorted(range(len(choices)), key=lambda j: choices[j][0])
    blocks = []
    for i in sorted({c[0] for c in choices}):
        cols = [choices[j][1] for j in order if choices[j][0] == i]
        blocks.append(sources[i][:, cols])
    stacked = hstack(blocks) if len(blocks) > 1 else blocks[0]
    inv = np.empty(len(order), dtype=np.int64)
    inv[np.array(order)] = np.arange(len(order))
    return stacked[:, list(inv)]


def _pick_rows(sources, choices, exact: bool, ncols: int):
    if not choices:
        return _zeros(exact, (0, ncols))
    T = _pick_columns([s.T for s in sources], choices, exact, ncols)
    return T.T


@dataclass
class OperatorPencil:
    """A0 + sum_k c_k A_k, one A_k per reflection class."""

    A0: object
    A: list

    def at(self, c):
        vals = c.values if isinstance(c, ParamPoint) else tuple(c)
        out = self.A0
        for ck, Ak in zip(vals, self.A):
            if ck != 0:
                out = _add(out, _scale(Ak, ck))
        if not isinstance(out, ExactMatrix) and any(isinstance(v, (float, complex)) for v in vals):
            return np.asarray(to_float(out))
        return out

    def affine(self, c0, c1):
        """(B0, B1) with value B0 + t B1 along c(t) = c0 + t c1."""
        B0 = self.at(c0)
        B1 = _zeros(isinstance(self.A0, ExactMatrix), self.A0.shape)
        vals = c1.values if isinstance(c1, ParamPoint) else tuple(c1)
        for ck, Ak in zip(vals, self.A):
            if ck != 0:
                B1 = _add(B1, _scale(Ak, ck))
        return B0, B1

    @property
    def shape(self):
        return self.A0.shape


class GradedModule:
    """Lazily built, lock-protected per-degree data for C[h] (x) lam."""

    def __init__(self, datum: CoxeterDatum, irrep: WIrrep):
        self.datum = datum
        self.irrep = irrep
        self.l = datum.rank
        self.exact = datum.exact and irrep.exact
        self.sym_exact = datum.exact
        self._lock = threading.RLock()
        self._cache: dict = {}

    # bookkeeping -------------------------------------------------------
    def _cached(self, key, build):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = build()
        with self._lock:
            return self._cache.setdefault(key, val)

    def monomials(self, n: int) -> list[tuple[int, ...]]:
        if n < 0:
            return []
        return self._cached(("mono", n), lambda: monomials(self.l, n))

    def mono_index(self, n: int) -> dict:
        return self._cached(("monoidx", n), lambda: {m: i for i, m in enumerate(self.monomials(n))})

    def dim_sym(self, n: int) -> int:
        return len(self.monomials(n))

    def dim(self, n: int) -> int:
        return self.dim_sym(n) * self.irrep.dim

    def basis_labels(self, n: int) -> list[tuple[tuple[int, ...], int]]:
        return [(m, a) for m in self.monomials(n) for a in range(self.irrep.dim)]

    def least_index(self, m) -> int:
        return next(i for i, e in enumerate(m) if e > 0)

    # polynomial-level operators ---------------------------------------
    def sym_mult(self, j: int, n: int):
        """x_j : Sym^n -> Sym^{n+1} (0/1 matrix)."""
        def build():
            src, dst = self.monomials(n), self.mono_index(n + 1)
            rows = [[0] * len(src) for _ in range(len(dst))]
            for col, m in enumerate(src):
                t = list(m)
                t[j] += 1
                rows[dst[tuple(t)]][col] = 1
            return self._mat(rows, (len(dst), len(src)))
        return self._cached(("X", j, n), build)

    def sym_partial(self, j: int, n: int):
        """d/dx_j : Sym^n -> Sym^{n-1}."""
        def build():
            src, dst = self.monomials(n), self.mono_index(n - 1)
            rows = [[0] * len(src) for _ in range(len(dst))]
            for col, m in enumerate(src):
                if m[j] == 0:
                    continue
                t = list(m)
                t[j] -= 1
                rows[dst[tuple(t)]][col] = m[j]
            return self._mat(rows, (len(dst), len(src)))
        return self._cached(("P", j, n), build)

    def _mat(self, rows, shape):
        if self.sym_exact:
            return ExactMatrix.from_entries(np.array(rows, dtype=object).reshape(shape)) if shape[0] * shape[1] else ExactMatrix.zeros(shape)
        return np.array(rows, dtype=float).reshape(shape)

    def linear_mult(self, form, n: int):
        """Multiplication by the linear form sum form[j] x_j : Sym^n -> Sym^{n+1}."""
        out = _zeros(self.sym_exact, (self.dim_sym(n + 1), self.dim_sym(n)))
        for j, f in enumerate(form):
            if f != 0:
                out = _add(out, _scale(self.sym_mult(j, n), f))
        return out

    def _reflection_matrix(self, refl_index: int):
        r = self.datum.reflections[refl_index]
        return self.datum.elements[r.element].matrix

    def _row(self, M, i: int) -> list:
        if isinstance(M, ExactMatrix):
            return list(M.entries()[i])
        return list(np.asarray(M)[i])

    def divided_difference(self, refl_index: int, n: int):
        """(P - s.P)/alpha_s : Sym^n -> Sym^{n-1}, by the twisted Leibniz rule.

        For P = x_i Q:  (P - sP)/alpha = coroot_i Q + (x_i o s) (Q - sQ)/alpha.
        """
        def build():
            if n == 0:
                return _zeros(self.sym_exact, (0, 1))
            r = self.datum.reflections[refl_index]
            S = self._reflection_matrix(refl_index)
            prev = self.divided_difference(refl_index, n - 1)
            sources = []
            for i in range(self.l):
                term = _scale(_eye(self.sym_exact, self.dim_sym(n - 1)), r.coroot[i])
                if n >= 2:
                    term = _add(term, _mm(self.linear_mult(self._row(S, i), n - 2), prev))
                sources.append(term)
            idx = self.mono_index(n - 1)
            choices = []
            for m in self.monomials(n):
                i = self.least_index(m)
                t = list(m)
                t[i] -= 1
                choices.append((i, idx[tuple(t)]))
            return _pick_columns(sources, choices, self.sym_exact, self.dim_sym(n - 1))
        return self._cached(("DD", refl_index, n), build)

    def divided_difference_by_division(self, refl_index: int, n: int):
        """Reference implementation: literal polynomial division by alpha_s."""
        r = self.datum.reflections[refl_index]
        S = self._reflection_matrix(refl_index)
        forms = [self._row(S, i) for i in range(self.l)]
        idx = self.mono_index(n - 1)
        cols = []
        for m in self.monomials(n):
            P = Poly.monomial(m)
            sP = P.linear_substitute(forms)
            Q = (P - sP).divide_linear(list(r.root))
            cols.append(Q.coefficient_vector(n - 1, idx) if not Q.is_zero() else [0] * len(idx))
        rows = [list(x) for x in zip(*cols)] if cols else []
        return self._mat(rows, (len(idx), len(cols)))

    def sym_action(self, element_index: int, n: int):
        """Matrix of P -> P o w^{-1} on Sym^n."""
        def build():
            if n == 0:
                return _eye(self.sym_exact, 1)
            W = self.datum.elements[element_index].matrix
            Winv = self.datum.elements[int(self.datum.inverse[element_index])].matrix
            prev = self.sym_action(element_index, n - 1)
            sources = [_mm(self.linear_mult(self._row(Winv, i), n - 1), prev) for i in range(self.l)]
            idx = self.mono_index(n - 1)
            choices = []
            for m in self.monomials(n):
                i = self.least_index(m)
                t = list(m)
                t[i] -= 1
                choices.append((i, idx[tuple(t)]))
            return _pick_columns(sources, choices, self.sym_exact, self.dim_sym(n))
        return self._cached(("SYM", element_index, n), build)

    # module-level operators --------------------------------------------
    def mult_x(self, j: int, n: int):
        return self._cached(("MX", j, n), lambda: _kron(self.sym_mult(j, n), _eye(self.irrep.exact, self.irrep.dim)))

    def w_action(self, element_index: int, n: int):
        return self._cached(("WA", element_index, n),
                            lambda: _kron(self.sym_action(element_index, n), self.irrep.matrix(element_index)))

    def dunkl_basis(self, j: int, n: int) -> OperatorPencil:
        """Pencil of D_{y_j}: degree n -> n-1, with y_j the j-th orthonormal basis vector."""
        def build():
            lam_id = _eye(self.irrep.exact, self.irrep.dim)
            if n == 0:
                z = _zeros(self.exact, (0, self.irrep.dim))
                return OperatorPencil(z, [z for _ in range(self.datum.n_classes)])
            A0 = _kron(self.sym_partial(j, n), lam_id)
            A = [_zeros(self.exact, A0.shape) for _ in range(self.datum.n_classes)]
            for r in self.datum.reflections:
                coef = r.root[j]
                if coef == 0:
                    continue
                term = _kron(self.divided_difference(r.index, n), self.irrep.reflection_matrix(r.index))
                A[r.cls] = _add(A[r.cls], _scale(term, -coef))
            return OperatorPencil(A0, A)
        return self._cached(("D", j, n), build)

    def dunkl(self, y, n: int) -> OperatorPencil:
        pencils = [self.dunkl_basis(j, n) for j in range(self.l)]
        A0 = None
        A = [None] * self.datum.n_classes
        for yj, p in zip(y, pencils):
            if yj == 0:
                continue
            A0 = _scale(p.A0, yj) if A0 is None else _add(A0, _scale(p.A0, yj))
            for k in range(len(A)):
                A[k] = _scale(p.A[k], yj) if A[k] is None else _add(A[k], _scale(p.A[k], yj))
        if A0 is None:
            p = pencils[0]
            A0 = _zeros(self.exact, p.A0.shape)
            A = [_zeros(self.exact, p.A0.shape) for _ in A]
        return OperatorPencil(A0, A)

    def reflection_sum(self, c, n: int):
        """sum_s c_s s acting diagonally on degree n."""
        c = ParamPoint.of(self.datum, c)
        out = _zeros(self.exact, (self.dim(n), self.dim(n)))
        for r in self.datum.reflections:
            cv = c.values[r.cls]
            if cv != 0:
                out = _add(out, _scale(self.w_action(r.element, n), cv))
        return out

    def grading_operator(self, c, n: int):
        """sum_j x_j D_{y_j} + l/2 - sum_s c_s s on degree n (orthonormal dual bases)."""
        c = ParamPoint.of(self.datum, c)
        d = self.dim(n)
        out = _scale(_eye(self.exact, d), Fraction(self.l, 2))
        if n >= 1:
            for j in range(self.l):
                out = _add(out, _mm(self.mult_x(j, n - 1), self.dunkl_basis(j, n).at(c)))
        return _add(out, _scale(self.reflection_sum(c, n), -1))


_MODULES: dict = {}
_MOD_LOCK = threading.Lock()


def graded_module(datum: CoxeterDatum, irrep: WIrrep) -> GradedModule:
    key = (datum.label, irrep.name)
    with _MOD_LOCK:
        mod = _MODULES.get(key)
        if mod is None:
            mod = GradedModule(datum, irrep)
            _MODULES[key] = mod
        return mod


# public operations ------------------------------------------------------

def mult_x(datum: CoxeterDatum, irrep: WIrrep, i: int, n: int):
    return graded_module(datum, irrep).mult_x(i, n)


def dunkl_matrix(datum: CoxeterDatum, irrep: WIrrep, y, n: int) -> OperatorPencil:
    return graded_module(datum, irrep).dunkl(y, n)


def grading_action(datum: CoxeterDatum, irrep: WIrrep, c, n: int):
    """Eigenvalue of the grading element on degree n, checked against the assembled operator."""
    mod = graded_module(datum, irrep)
    H = mod.grading_operator(c, n)
    expected = h_c_lambda(datum, irrep, c) + n
    target = _scale(_eye(mod.exact, mod.dim(n)), expected)
    if isinstance(H, ExactMatrix) and isinstance(target, ExactMatrix):
        ok = H == target
    else:
        ok = np.allclose(to_float(H), to_float(target), atol=1e-9 * max(1.0, abs(float(expected))))
    if not ok:
        raise ArithmeticError("grading element does not act by a scalar on this graded piece")
    return expected
