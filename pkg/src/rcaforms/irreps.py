"""Irreducible orthogonal representations of the supported Coxeter groups."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .coxeter import CoxeterDatum, ParamPoint, UnsupportedGroupError, dihedral_generators
from .exact import ExactMatrix, kron, to_float
from .scalars import QSqrt
from .series import GradedSeries, inverse_series, mul_trunc, poly_mul, trim


@dataclass(eq=False)
class WIrrep:
    name: str
    datum: CoxeterDatum
    generators: list          # one orthogonal matrix per simple reflection
    aliases: tuple = ()
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def dim(self) -> int:
        return self.generators[0].shape[0]

    @property
    def exact(self) -> bool:
        return isinstance(self.generators[0], ExactMatrix)

    @cached_property
    def matrices(self) -> list:
        """rho(w) for every group element, aligned with datum.elements."""
        out = []
        ident = ExactMatrix.identity(self.dim) if self.exact else np.eye(self.dim)
        for g in self.datum.elements:
            M = ident
            for i in g.word:
                M = M @ self.generators[i]
            out.append(M)
        return out

    def matrix(self, element_index: int):
        return self.matrices[element_index]

    @cached_property
    def matrices_float(self) -> list[np.ndarray]:
        return [to_float(M) for M in self.matrices]

    def reflection_matrix(self, refl_index: int):
        return self.matrices[self.datum.reflections[refl_index].element]

    @cached_property
    def character(self) -> list:
        """Character value per group element (exact Fraction when possible)."""
        out = []
        for M in self.matrices:
            tr = M.trace() if isinstance(M, ExactMatrix) else float(np.trace(M))
            if isinstance(tr, QSqrt):
                tr = tr.simplify()
            out.append(tr)
        return out

    @cached_property
    def class_character(self) -> list:
        return [self.character[cl[0]] for cl in self.datum.conjugacy_classes]

    def check_orthogonal(self) -> bool:
        for M in self.generators:
            P = M.T @ M
            if isinstance(P, ExactMatrix):
                if P != ExactMatrix.identity(self.dim):
                    return False
            elif not np.allclose(P, np.eye(self.dim), atol=1e-10):
                return False
        return True

    def check_coxeter_relations(self) -> bool:
        mat = self.datum.coxeter_matrix
        n = len(self.generators)
        for i in range(n):
            for j in range(n):
                P = self.generators[i] @ self.generators[j]
                Q = P
                for _ in range(mat[i][j] - 1):
                    Q = Q @ P
                if isinstance(Q, ExactMatrix):
                    if Q != ExactMatrix.identity(self.dim):
                        return False
                elif not np.allclose(Q, np.eye(self.dim), atol=1e-9):
                    return False
        return True

    def matches(self, name: str) -> bool:
        n = name.strip().lower()
        return n == self.name.lower() or n in (a.lower() for a in self.aliases)

    def __repr__(self):
        return f"WIrrep({self.name}, dim={self.dim}, W={self.datum.label})"


# construction -----------------------------------------------------------

def _linear_chars(datum: CoxeterDatum):
    """All 1-dimensional characters: a sign per reflection class."""
    refl_cls = {}
    for r in datum.reflections[: datum.rank]:
        refl_cls[r.index] = r.cls
    simple_cls = [datum.reflections[i].cls for i in range(datum.rank)]
    ncls = datum.n_classes
    out = []
    for signs in itertools.product([1, -1], repeat=ncls):
        if all(s == 1 for s in signs):
            name, aliases = "triv", ("trivial",)
        elif all(s == -1 for s in signs):
            name, aliases = "sgn", ("sign",)
        else:
            neg = [k for k, s in enumerate(signs) if s == -1]
            name = "sgn" + "".join(str(k + 1) for k in neg)
            aliases = ()
        gens = [ExactMatrix.from_entries([[signs[c]]]) for c in simple_cls]
        out.append((name, gens, aliases, signs))
    return out


def _tensor_gens(g1, g2):
    return [kron(a, b) for a, b in zip(g1, g2)]


def _dihedral_irreps(datum: CoxeterDatum):
    m = datum.m if datum.family == "I" else {"A": 3, "G": 6}[datum.family]
    out = []
    for name, gens, aliases, _ in _linear_chars(datum):
        out.append(WIrrep(name, datum, gens, aliases))
    for k in range(1, (m - 1) // 2 + 1):
        gens = dihedral_generators(m, k, exact=datum.exact)
        aliases = ("refl", "std") if k == 1 else ()
        out.append(WIrrep(f"rho{k}", datum, gens, aliases))
    return out


def _signs_of(linear, datum):
    return linear[1]


def _irreps_A3(datum: CoxeterDatum):
    lin = {name: (gens, al) for name, gens, al, _ in _linear_chars(datum)}
    refl = list(datum.simple)
    out = [WIrrep("triv", datum, lin["triv"][0], ("[4]",)),
           WIrrep("sgn", datum, lin["sgn"][0], ("[1,1,1,1]",)),
           WIrrep("refl", datum, refl, ("std", "[3,1]")),
           WIrrep("refl_sgn", datum, _tensor_gens(refl, lin["sgn"][0]), ("[2,1,1]",))]
    a, b = dihedral_generators(3, 1)
    out.append(WIrrep("pair", datum, [a, b, a], ("[2,2]",)))
    return out


def _irreps_B(datum: CoxeterDatum):
    lins = _linear_chars(datum)
    refl = list(datum.simple)
    out = [WIrrep(name, datum, gens, al) for name, gens, al, _ in lins]
    for name, gens, al, _ in lins:
        nm = "refl" if name == "triv" else f"refl_{name}"
        out.append(WIrrep(nm, datum, _tensor_gens(refl, gens), ("std",) if name == "triv" else ()))
    if datum.rank == 3:
        a, b = dihedral_generators(3, 1)
        one = ExactMatrix.identity(2)
        base = [a, b, one]
        out.append(WIrrep("pair", datum, base))
        sgn2 = next(g for n, g, _, s in lins if s == (1, -1))
        out.append(WIrrep("pair_sgn2", datum, _tensor_gens(base, sgn2)))
    return _dedupe(out)


def _dedupe(reps):
    seen = []
    out = []
    for r in reps:
        key = tuple(r.class_character)
        if key in seen:
            continue
        seen.append(key)
        out.append(r)
    return out


def _regular_decomposition(datum: CoxeterDatum, known: list[WIrrep], seed: int = 7):
    """Float orthonormal irreps from a random symmetric element of the right-regular algebra."""
    n = datum.order
    mult = datum.multiplication
    inv = datum.inverse
    rng = np.random.default_rng(seed)
    r = rng.standard_normal(n)
    r = (r + r[inv]) / 2
    H = np.zeros((n, n))
    for w in range(n):
        # right multiplication by w: e_g -> e_{g w}
        H[mult[:, w], np.arange(n)] += r[w]
    ev, U = np.linalg.eigh(H)
    groups = []
    start = 0
    for i in range(1, n + 1):
        if i == n or abs(ev[i] - ev[start]) > 1e-7 * max(1.0, abs(ev[start])):
            groups.append(U[:, start:i])
            start = i
    known_chars = [tuple(float(x) for x in k.class_character) for k in known]
    found = []
    for U_blk in groups:
        gens = []
        for gi in range(datum.rank):
            sid = datum.index_of(datum.simple[gi])
            L = np.zeros((n, n))
            L[mult[sid, :], np.arange(n)] = 1.0
            gens.append(U_blk.T @ L @ U_blk)
        cand = WIrrep("tmp", datum, gens)
        ch = tuple(round(float(x), 6) for x in cand.class_character)
        if any(np.allclose(ch, k, atol=1e-6) for k in known_chars):
            continue
        known_chars.append(ch)
        found.append(cand)
    return found


def _irreps_D4(datum: CoxeterDatum):
    lins = {name: gens for name, gens, _, _ in _linear_chars(datum)}
    refl = list(datum.simple)
    exact = [WIrrep("triv", datum, lins["triv"]), WIrrep("sgn", datum, lins["sgn"]),
             WIrrep("refl", datum, refl, ("std",)), WIrrep("refl_sgn", datum, _tensor_gens(refl, lins["sgn"]))]
    extra = _regular_decomposition(datum, exact)
    counts: dict[int, int] = {}
    for rep in sorted(extra, key=lambda r: r.dim):
        counts[rep.dim] = counts.get(rep.dim, 0) + 1
        rep.name = f"dim{rep.dim}_{counts[rep.dim]}"
    return exact + sorted(extra, key=lambda r: r.dim)


_IRREP_CACHE: dict[str, list[WIrrep]] = {}
_IRREP_LOCK = threading.Lock()


def irreps_of(datum: CoxeterDatum) -> list[WIrrep]:
    with _IRREP_LOCK:
        if datum.label in _IRREP_CACHE:
            return _IRREP_CACHE[datum.label]
    fam = datum.family
    if fam == "A" and datum.rank == 1:
        reps = [WIrrep(n, datum, g, a) for n, g, a, _ in _linear_chars(datum)]
    elif fam in ("I", "G") or (fam == "A" and datum.rank == 2):
        reps = _dihedral_irreps(datum)
    elif fam == "A" and datum.rank == 3:
        reps = _irreps_A3(datum)
    elif fam == "B":
        reps = _irreps_B(datum)
    elif fam == "D":
        reps = _irreps_D4(datum)
    else:
        raise UnsupportedGroupError(datum.label)
    if sum(r.dim ** 2 for r in reps) != datum.order:
        raise RuntimeError(f"irreps of {datum.label} do not exhaust the group algebra")
    with _IRREP_LOCK:
        _IRREP_CACHE.setdefault(datum.label, reps)
        return _IRREP_CACHE[datum.label]


def get_irrep(datum: CoxeterDatum, name: str) -> WIrrep:
    for r in irreps_of(datum):
        if r.matches(name):
            return r
    names = ", ".join(r.name for r in irreps_of(datum))
    raise KeyError(f"{datum.label} has no irrep {name!r} (available: {names})")


# character theory -------------------------------------------------------

def inner_product(datum: CoxeterDatum, chi1, chi2):
    """(1/|W|) sum_w chi1(w) chi2(w); characters of Coxeter groups are real."""
    total = sum(a * b for a, b in zip(chi1, chi2))
    if all(isinstance(v, (int, Fraction)) for v in list(chi1) + list(chi2)):
        return Fraction(total) / datum.order
    return total / datum.order


def h_c_lambda(datum: CoxeterDatum, irrep: WIrrep, c) -> object:
    """Lowest weight l/2 - chi(sum_s c_s s)/dim."""
    c = ParamPoint.of(datum, c)
    total = 0
    for r in datum.reflections:
        total = total + c.values[r.cls] * irrep.character[r.element]
    half = Fraction(datum.rank, 2)
    if isinstance(total, (int, Fraction)):
        return half - Fraction(total) / irrep.dim
    return float(half) - total / irrep.dim


def central_scalar(datum: CoxeterDatum, irrep: WIrrep, c):
    """chi(sum_s c_s s)/dim: the scalar by which sum_s c_s s acts on the irrep."""
    c = ParamPoint.of(datum, c)
    total = 0
    for r in datum.reflections:
        total = total + c.values[r.cls] * irrep.character[r.element]
    if isinstance(total, (int, Fraction)):
        return Fraction(total) / irrep.dim
    return total / irrep.dim


def _det(rows):
    """Determinant of a small square matrix of exact or float entries (Bareiss-free Laplace)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_one_minus_tw(datum: CoxeterDatum, element_index: int) -> list:
    """Coefficients of det(1 - t w) on the reflection representation, as a polynomial in t."""
    M = datum.elements[element_index].matrix
    E = M.entries() if isinstance(M, ExactMatrix) else np.asarray(M)
    n = E.shape[0]
    coeffs = [1]
    for k in range(1, n + 1):
        ek = 0
        for idx in itertools.combinations(range(n), k):
            sub = [[E[i, j] for j in idx] for i in idx]
            ek = ek + _det(sub)
        if isinstance(ek, QSqrt):
            ek = ek.simplify()
        coeffs.append((-1) ** k * ek)
    return coeffs


def standard_character(datum: CoxeterDatum, irrep: WIrrep, element_index: int, N: int) -> GradedSeries:
    """Shifted character chi(w)/det(1 - t w) truncated at order N."""
    den = det_one_minus_tw(datum, element_index)
    inv = inverse_series([Fraction(x) if not isinstance(x, float) else x for x in den], N)
    chi = irrep.character[element_index]
    return GradedSeries(tuple(chi * x for x in inv))


@dataclass(frozen=True)
class ClassData:
    size: int
    rep: int
    det_poly: tuple


def class_data(datum: CoxeterDatum) -> list[ClassData]:
    return [ClassData(len(cl), cl[0], tuple(det_one_minus_tw(datum, cl[0]))) for cl in datum.conjugacy_classes]


def theta_poly(datum: CoxeterDatum, lam: WIrrep, pi: WIrrep) -> list:
    """Graded dimension of the pi-isotypic part of lam tensor the coinvariant algebra.

    Character theory gives the graded multiplicity of pi; multiplying by dim pi
    turns it into a dimension, so theta(1) = dim(lam) * dim(pi)^2.
    """
    top = len(datum.reflections)
    N = top + sum(datum.degrees) + 2
    acc = [Fraction(0)] * N
    exact = all(isinstance(v, (int, Fraction)) for v in lam.class_character + pi.class_character)
    for cd, cl_chi_l, cl_chi_p in zip(class_data(datum), lam.class_character, pi.class_character):
        den = [x if not isinstance(x, QSqrt) else x.simplify() for x in cd.det_poly]
        den = [Fraction(x) if exact and not isinstance(x, float) else float(x) for x in den]
        inv = inverse_series(den, N)
        w = cd.size * cl_chi_l * cl_chi_p
        acc = [a + w * b for a, b in zip(acc, inv)]
    prod = [1]
    for d in datum.degrees:
        prod = poly_mul(prod, [1] + [0] * (d - 1) + [-1])
    theta = mul_trunc(acc, prod, N)
    order = datum.order
    theta = [Fraction(x) * pi.dim / order if exact else x * pi.dim / order for x in theta]
    tail = theta[top + 1:]
    if exact and any(v != 0 for v in tail):
        raise ArithmeticError("theta series did not terminate at the top coinvariant degree")
    theta = theta[: top + 1]
    if exact:
        return trim([int(x) if x.denominator == 1 else x for x in theta]) or [0]
    return trim([round(x) if abs(x - round(x)) < 1e-8 else x for x in theta]) or [0]
