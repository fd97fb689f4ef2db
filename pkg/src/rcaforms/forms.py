"""Contravariant form beta and Gaussian pairing gamma as Gram matrices, plus radicals."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .cherednik import GradedModule, _add, _eye, _mm, _scale, _zeros, graded_module
from .coxeter import CoxeterDatum, ParamPoint
from .exact import ExactMatrix, block_diag, nullspace, to_float, vstack
from .inertia import Inertia, float_rank_threshold, inertia
from .irreps import WIrrep


class MatrixPoly:
    """Matrix with polynomial entries, stored as {exponent tuple: coefficient matrix}."""

    def __init__(self, terms: dict, nvars: int, shape):
        self.terms = {k: v for k, v in terms.items() if not _is_zero(v)}
        self.nvars = nvars
        self.shape = tuple(shape)

    @classmethod
    def constant(cls, M, nvars: int) -> "MatrixPoly":
        return cls({(0,) * nvars: M}, nvars, M.shape)

    @classmethod
    def from_pencil(cls, pencil, nvars: int, directions) -> "MatrixPoly":
        """A0 + sum_k (base_k + sum_v dir[v][k] x_v) A_k, from directions = (base, [dir_v])."""
        base, dirs = directions
        zero = (0,) * nvars
        terms = {zero: pencil.at(base)}
        for v, d in enumerate(dirs):
            key = tuple(1 if u == v else 0 for u in range(nvars))
            M = None
            for ck, Ak in zip(d, pencil.A):
                if ck != 0:
                    M = _scale(Ak, ck) if M is None else _add(M, _scale(Ak, ck))
            if M is not None:
                terms[key] = M
        return cls(terms, nvars, pencil.shape)

    def __matmul__(self, other: "MatrixPoly") -> "MatrixPoly":
        out: dict = {}
        for k1, A in self.terms.items():
            for k2, B in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                P = _mm(A, B)
                out[k] = P if k not in out else _add(out[k], P)
        return MatrixPoly(out, self.nvars, (self.shape[0], other.shape[1]))

    def __add__(self, other: "MatrixPoly") -> "MatrixPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = v if k not in out else _add(out[k], v)
        return MatrixPoly(out, self.nvars, self.shape)

    def map(self, fn) -> "MatrixPoly":
        terms = {k: fn(v) for k, v in self.terms.items()}
        shape = next(iter(terms.values())).shape if terms else fn_shape(fn, self.shape)
        return MatrixPoly(terms, self.nvars, shape)

    @property
    def T(self) -> "MatrixPoly":
        return MatrixPoly({k: v.T for k, v in self.terms.items()}, self.nvars, self.shape[::-1])

    def at(self, point):
        exact = all(isinstance(v, ExactMatrix) for v in self.terms.values())
        out = _zeros(exact, self.shape)
        for k, M in self.terms.items():
            coef = 1
            for x, e in zip(point, k):
                coef = coef * x ** e
            out = _add(out, _scale(M, coef))
        return out

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def coefficient(self, k):
        exact = all(isinstance(v, ExactMatrix) for v in self.terms.values())
        return self.terms.get(tuple(k), _zeros(exact, self.shape))

    def __eq__(self, other):
        if not isinstance(other, MatrixPoly):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(_mat_equal(self.coefficient(k), other.coefficient(k)) for k in keys)


def fn_shape(fn, shape):
    probe = fn(np.zeros(shape))
    return probe.shape


def _is_zero(M) -> bool:
    if isinstance(M, ExactMatrix):
        return M.is_zero()
    return not np.any(np.asarray(M))


def _mat_equal(A, B, tol: float = 1e-9) -> bool:
    if isinstance(A, ExactMatrix) and isinstance(B, ExactMatrix):
        return A == B
    a, b = to_float(A), to_float(B)
    return np.allclose(a, b, atol=tol * max(1.0, np.abs(a).max(initial=0), np.abs(b).max(initial=0)))


def _rows_by_split(module: GradedModule, n: int, products: list, split: str):
    """Row (m, a) of the degree-n Gram comes from row (m - e_i, a) of products[i]."""
    dl = module.irrep.dim
    idx = module.mono_index(n - 1)
    order = []
    for m in module.monomials(n):
        nz = [i for i, e in enumerate(m) if e > 0]
        i = nz[0] if split == "first" else nz[-1]
        t = list(m)
        t[i] -= 1
        base = idx[tuple(t)] * dl
        order.extend((i, base + a) for a in range(dl))
    return order


def _select_rows(mats: list, order: list):
    """Row j of the result is row order[j][1] of mats[order[j][0]]."""
    if isinstance(mats[0], MatrixPoly):
        keys = set().union(*(m.terms for m in mats))
        shape = (len(order), mats[0].shape[1])
        terms = {k: _select_rows([m.coefficient(k) for m in mats], order) for k in keys}
        return MatrixPoly(terms, mats[0].nvars, shape)
    from .cherednik import _pick_rows
    exact = all(isinstance(m, ExactMatrix) for m in mats)
    return _pick_rows(mats, order, exact, mats[0].shape[1])


@dataclass
class GramSequence:
    """Degree-wise Gram matrices of beta, extended lazily.

    `param` is either a ParamPoint (numeric Grams) or a tuple (base, directions) giving
    c = base + sum_v x_v * directions[v]; then Grams are MatrixPoly in the x_v.
    """

    module: GradedModule
    param: object
    numeric_float: bool = False
    split: str = "first"
    grams: list = field(default_factory=list)
    lock: threading.RLock = field(default_factory=threading.RLock)

    @property
    def symbolic(self) -> bool:
        return not isinstance(self.param, ParamPoint)

    def _dunkl(self, j: int, n: int):
        pencil = self.module.dunkl_basis(j, n)
        if self.symbolic:
            base, dirs = self.param
            return MatrixPoly.from_pencil(pencil, len(dirs), (base, dirs))
        M = pencil.at(self.param)
        return np.asarray(to_float(M)) if self.numeric_float else M

    def gram(self, n: int):
        with self.lock:
            while len(self.grams) <= n:
                self.grams.append(self._next(len(self.grams)))
            return self.grams[n]

    def _next(self, n: int):
        mod = self.module
        if n == 0:
            exact = mod.irrep.exact and not self.numeric_float
            G0 = _eye(exact, mod.irrep.dim)
            if self.symbolic:
                return MatrixPoly.constant(G0, len(self.param[1]))
            return G0
        prev = self.grams[n - 1]
        products = [prev @ self._dunkl(j, n) for j in range(mod.l)]
        return _select_rows(products, _rows_by_split(mod, n, products, self.split))


_GRAMS: dict = {}
_GRAM_LOCK = threading.Lock()


def _param_key(param):
    if isinstance(param, ParamPoint):
        return ("pt",) + tuple(str(v) for v in param.values)
    base, dirs = param
    return ("sym", tuple(str(v) for v in base), tuple(tuple(str(v) for v in d) for d in dirs))


def gram_sequence(datum: CoxeterDatum, irrep: WIrrep, param, numeric_float: bool = False,
                  split: str = "first") -> GramSequence:
    if not isinstance(param, tuple) or len(param) != 2 or isinstance(param, ParamPoint):
        param = ParamPoint.of(datum, param)
    key = (datum.label, irrep.name, _param_key(param), numeric_float, split)
    with _GRAM_LOCK:
        seq = _GRAMS.get(key)
        if seq is None:
            seq = GramSequence(graded_module(datum, irrep), param, numeric_float, split)
            _GRAMS[key] = seq
        return seq


def beta_gram(datum: CoxeterDatum, irrep: WIrrep, c, n: int, numeric_float: bool = False,
              split: str = "first"):
    """Gram matrix of beta on degree n.

    `c` may be a ParamPoint-like value or, for a polynomial family, a pair
    (base, directions) with c = base + sum_v x_v directions[v].
    """
    return gram_sequence(datum, irrep, c, numeric_float, split).gram(n)


def symbolic_class_pencil(datum: CoxeterDatum):
    """(base, directions) making each class parameter its own variable."""
    k = datum.n_classes
    return (tuple(0 for _ in range(k)), tuple(tuple(1 if u == v else 0 for u in range(k)) for v in range(k)))


def line_pencil(datum: CoxeterDatum, c0, c1):
    """(base, directions) for the deformation c(t) = c0 + t c1."""
    return (ParamPoint.of(datum, c0).values, (ParamPoint.of(datum, c1).values,))


def monomial_norms(datum: CoxeterDatum, irrep: WIrrep, n: int) -> list[int]:
    """Diagonal of the c = 0 Gram: multi-index factorials, repeated over the irrep basis."""
    mod = graded_module(datum, irrep)
    out = []
    for m in mod.monomials(n):
        v = 1
        for e in m:
            v *= factorial(e)
        out.extend([v] * irrep.dim)
    return out


def asymmetry(G) -> float:
    if isinstance(G, ExactMatrix):
        return 0.0 if G == G.T else float(np.abs(to_float(G - G.T)).max())
    G = np.asarray(G)
    return float(np.abs(G - G.conj().T).max(initial=0.0))


# Gaussian pairing -------------------------------------------------------

def _f_operator(module: GradedModule, c: ParamPoint, k: int, numeric_float: bool):
    """f = 1/2 sum_j D_j^2 : degree k -> k-2."""
    out = None
    for j in range(module.l):
        A = module.dunkl_basis(j, k - 1).at(c)
        B = module.dunkl_basis(j, k).at(c)
        if numeric_float:
            A, B = to_float(A), to_float(B)
        P = _mm(A, B)
        out = P if out is None else _add(out, P)
    return _scale(out, Fraction(1, 2))


def filtered_offsets(module: GradedModule, n: int) -> list[int]:
    offs = [0]
    for k in range(n + 1):
        offs.append(offs[-1] + module.dim(k))
    return offs


def exp_f_matrix(datum: CoxeterDatum, irrep: WIrrep, c, n: int, numeric_float: bool = False):
    """exp(f) on the direct sum of degrees 0..n; column blocks are sources."""
    mod = graded_module(datum, irrep)
    c = ParamPoint.of(datum, c)
    exact = mod.exact and not numeric_float
    dims = [mod.dim(k) for k in range(n + 1)]
    blocks = [[None] * (n + 1) for _ in range(n + 1)]
    for k in range(n + 1):
        blocks[k][k] = _eye(exact, dims[k])
        power = blocks[k][k]
        j = 1
        while k - 2 * j >= 0:
            power = _mm(_f_operator(mod, c, k - 2 * j + 2, numeric_float), power)
            blocks[k - 2 * j][k] = _scale(power, Fraction(1, factorial(j)))
            j += 1
    for r in range(n + 1):
        for s in range(n + 1):
            if blocks[r][s] is None:
                blocks[r][s] = _zeros(exact, (dims[r], dims[s]))
    return _assemble(blocks, exact)


def _assemble(blocks, exact: bool):
    if exact:
        from .exact import hstack
        return vstack([hstack(row) for row in blocks])
    return np.block([[to_float(b) for b in row] for row in blocks])


def filtered_beta(datum: CoxeterDatum, irrep: WIrrep, c, n: int, numeric_float: bool = False):
    seq = gram_sequence(datum, irrep, c, numeric_float)
    grams = [seq.gram(k) for k in range(n + 1)]
    if all(isinstance(g, ExactMatrix) for g in grams):
        return block_diag(grams)
    from scipy.linalg import block_diag as sp_block_diag
    return sp_block_diag(*[to_float(g) for g in grams])


def gaussian_gram(datum: CoxeterDatum, irrep: WIrrep, c, n: int, numeric_float: bool = False):
    """gamma(P, Q) = beta(exp(f)P, exp(f)Q) on degrees <= n."""
    E = exp_f_matrix(datum, irrep, c, n, numeric_float)
    B = filtered_beta(datum, irrep, c, n, numeric_float)
    if isinstance(E, ExactMatrix) and isinstance(B, ExactMatrix):
        return E.T @ B @ E
    E, B = to_float(E), to_float(B)
    return E.conj().T @ B @ E


def filtered_mult_x(module: GradedModule, j: int, n: int, exact: bool):
    """x_j from degrees <= n-1 into degrees <= n."""
    dims = [module.dim(k) for k in range(n + 1)]
    blocks = [[None] * n for _ in range(n + 1)]
    for r in range(n + 1):
        for s in range(n):
            if r == s + 1:
                M = module.mult_x(j, s)
                blocks[r][s] = M if exact else to_float(M)
            else:
                blocks[r][s] = _zeros(exact, (dims[r], dims[s]))
    return _assemble(blocks, exact)


def gamma_adjointness_check(datum: CoxeterDatum, irrep: WIrrep, c, n: int,
                            numeric_float: bool = False) -> float:
    """max |gamma(x_j P, Q) - gamma(P, x_j Q)| over degrees < n."""
    mod = graded_module(datum, irrep)
    G = gaussian_gram(datum, irrep, c, n, numeric_float)
    exact = isinstance(G, ExactMatrix)
    m = filtered_offsets(mod, n)[n]
    worst = 0.0
    for j in range(mod.l):
        X = filtered_mult_x(mod, j, n, exact)
        if exact:
            left = X.T @ G[:, list(range(m))]
            right = G[list(range(m)), :] @ X
            diff = left - right
            worst = max(worst, 0.0 if diff.is_zero() else float(np.abs(diff.to_float()).max()))
        else:
            G = to_float(G)
            diff = X.T @ G[:, :m] - G[:m, :] @ X
            worst = max(worst, float(np.abs(diff).max(initial=0.0)))
    return worst


# radicals ---------------------------------------------------------------

@dataclass
class Radical:
    degree: int
    dim: int
    basis: object  # columns spanning the kernel
    closed: bool


def _kernel(G, exact: bool):
    if exact:
        return nullspace(G)
    G = to_float(G)
    if G.size == 0:
        return np.zeros((G.shape[1], G.shape[1]))
    u, s, vh = np.linalg.svd(G)
    tol = float_rank_threshold(G)
    r = int((s > tol).sum())
    return vh[r:].conj().T


def _annihilates(G, K, exact: bool) -> bool:
    if K.shape[1] == 0 or G.shape[0] == 0:
        return True
    if exact:
        return (G @ K).is_zero()
    G, K = to_float(G), to_float(K)
    scale = max(1.0, np.abs(G).max())
    return bool(np.abs(G @ K).max() <= 1e-8 * scale)


def radical_per_degree(datum: CoxeterDatum, irrep: WIrrep, c, n: int,
                       numeric_float: bool = False, check: bool = True) -> Radical:
    """Kernel of the degree-n Gram, with a check that x_j and D_y keep it inside the radical."""
    c = ParamPoint.of(datum, c)
    seq = gram_sequence(datum, irrep, c, numeric_float)
    G = seq.gram(n)
    exact = isinstance(G, ExactMatrix)
    K = _kernel(G, exact)
    closed = True
    if check and K.shape[1]:
        mod = seq.module
        G_up = seq.gram(n + 1)
        for j in range(mod.l):
            X = mod.mult_x(j, n)
            closed &= _annihilates(G_up, X @ K if exact else to_float(X) @ to_float(K), exact)
            if n >= 1:
                D = mod.dunkl_basis(j, n).at(c)
                closed &= _annihilates(seq.gram(n - 1), D @ K if exact else to_float(D) @ to_float(K), exact)
        if not closed:
            raise ArithmeticError(
                f"radical in degree {n} is not closed under x and D; "
                "float rank was likely misjudged, retry in exact mode")
    return Radical(n, int(K.shape[1]), K, closed)


def beta_inertia(datum: CoxeterDatum, irrep: WIrrep, c, n: int, numeric_float: bool = False) -> Inertia:
    return inertia(beta_gram(datum, irrep, c, n, numeric_float))


def sign_beta_vs_gamma(datum: CoxeterDatum, irrep: WIrrep, c, n: int, numeric_float: bool = False):
    """(inertia of beta on degrees <= n, inertia of gamma on degrees <= n)."""
    return (inertia(filtered_beta(datum, irrep, c, n, numeric_float)),
            inertia(gaussian_gram(datum, irrep, c, n, numeric_float)))
