"""Finite Coxeter groups in an orthonormal frame: roots, reflections, classes, degrees."""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .exact import ExactMatrix, to_float
from .polys import Poly
from .scalars import QSqrt, sqrt_half_angle_table, to_exact

GROUP_ORDER_CAP = 10_000


class UnsupportedGroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupElement:
    index: int
    matrix: object  # ExactMatrix or float ndarray
    word: tuple[int, ...]

    def det_sign(self) -> int:
        return -1 if len(self.word) % 2 else 1


@dataclass(frozen=True)
class Reflection:
    index: int          # position in CoxeterDatum.reflections
    element: int        # index into the group element list
    root: tuple         # linear form alpha_s in the coordinates x_1..x_l
    coroot: tuple       # vector alpha_s^vee with <alpha_s, alpha_s^vee> = 2
    cls: int            # conjugacy class index


def parse_label(label: str) -> tuple[str, int, int | None]:
    s = label.strip().upper().replace(" ", "")
    m = re.fullmatch(r"I2[\(_\[]?(\d+)[\)\]]?", s)
    if m:
        mm = int(m.group(1))
        if mm < 3:
            raise UnsupportedGroupError(f"I2(m) needs m >= 3, got {mm}")
        return "I", 2, mm
    m = re.fullmatch(r"([ABDG])(\d+)", s)
    if not m:
        raise UnsupportedGroupError(f"unsupported group label {label!r}")
    fam, rank = m.group(1), int(m.group(2))
    allowed = {("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("G", 2), ("D", 4)}
    if (fam, rank) not in allowed:
        raise UnsupportedGroupError(f"unsupported group label {label!r}")
    return fam, rank, None


def canonical_label(label: str) -> str:
    fam, rank, m = parse_label(label)
    return f"I2({m})" if fam == "I" else f"{fam}{rank}"


def _reflection_from_vector(u) -> list[list]:
    n = len(u)
    nn = sum(x * x for x in u)
    return [[(1 if i == j else 0) - 2 * u[i] * u[j] / nn for j in range(n)] for i in range(n)]


def _line_reflection(cos2, sin2):
    return [[cos2, sin2], [sin2, -cos2]]


def dihedral_generators(m: int, k: int = 1, exact: bool = True):
    """Reflections across the lines at angles 0 and pi*k/m (product: rotation by 2*pi*k/m)."""
    s1 = [[1, 0], [0, -1]]
    cs = sqrt_half_angle_table(k, m) if exact else None
    if cs is None:
        ang = 2 * math.pi * k / m
        return [np.array(s1, dtype=float), np.array(_line_reflection(math.cos(ang), math.sin(ang)))]
    c, s = cs
    return [ExactMatrix.from_entries(s1), ExactMatrix.from_entries(_line_reflection(c, s))]


def _simple_generators(fam: str, rank: int, m: int | None):
    if fam == "I":
        return dihedral_generators(m, 1)
    if fam == "A" and rank == 1:
        return [ExactMatrix.from_entries([[-1]])]
    if fam == "A" and rank == 2:
        return dihedral_generators(3, 1)
    if fam == "G":
        return dihedral_generators(6, 1)
    e = lambda i, n: [1 if j == i else 0 for j in range(n)]
    sub = lambda u, v: [a - b for a, b in zip(u, v)]
    add = lambda u, v: [a + b for a, b in zip(u, v)]
    if fam == "A" and rank == 3:
        # S4 realised as the even-sign-change group W(D3) on R^3, ordered as a chain
        vecs = [sub(e(1, 3), e(2, 3)), sub(e(0, 3), e(1, 3)), add(e(1, 3), e(2, 3))]
    elif fam == "B":
        n = rank
        vecs = [sub(e(i, n), e(i + 1, n)) for i in range(n - 1)] + [e(n - 1, n)]
    elif fam == "D":
        n = rank
        vecs = [sub(e(i, n), e(i + 1, n)) for i in range(n - 1)] + [add(e(n - 2, n), e(n - 1, n))]
    else:  # pragma: no cover - parse_label guards this
        raise UnsupportedGroupError(fam)
    vecs = [[Fraction(x) for x in v] for v in vecs]
    return [ExactMatrix.from_entries(_reflection_from_vector(v)) for v in vecs]


def _fundamental_degrees(fam: str, rank: int, m: int | None) -> tuple[int, ...]:
    if fam == "A":
        return tuple(range(2, rank + 2))
    if fam == "B":
        return tuple(range(2, 2 * rank + 1, 2))
    if fam == "D":
        return (2, 4, 4, 6)
    if fam == "G":
        return (2, 6)
    return (2, m)


def _key(M):
    if isinstance(M, ExactMatrix):
        return M.key()
    return tuple((np.round(np.asarray(M, dtype=float), 8) + 0.0).flat)


def _mm(A, B):
    return A @ B


def _entries(M):
    if isinstance(M, ExactMatrix):
        return M.entries()
    return np.asarray(M)


def _solve_small(A_rows, rhs):
    """Solve a small square linear system exactly (object entries) or in floats."""
    if all(isinstance(v, (int, Fraction, QSqrt)) for row in A_rows for v in row):
        n = len(A_rows)
        M = [list(row) + [rhs[i]] for i, row in enumerate(A_rows)]
        for col in range(n):
            piv = next(i for i in range(col, n) if M[i][col] != 0)
            M[col], M[piv] = M[piv], M[col]
            p = M[col][col]
            M[col] = [v / p for v in M[col]]
            for i in range(n):
                if i != col and M[i][col] != 0:
                    f = M[i][col]
                    M[i] = [a - f * b for a, b in zip(M[i], M[col])]
        return [M[i][n] for i in range(n)]
    return list(np.linalg.solve(np.array(A_rows, dtype=float), np.array(rhs, dtype=float)))


def _simplify(x):
    return x.simplify() if isinstance(x, QSqrt) else x


@dataclass
class CoxeterDatum:
    label: str
    rank: int
    family: str
    m: int | None
    simple: list            # simple reflection matrices (ExactMatrix or float arrays)
    degrees: tuple[int, ...]
    exact: bool
    field_d: int            # 1 for Q, d for Q(sqrt d), 0 for floats
    order_cap: int = GROUP_ORDER_CAP
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    # group elements ----------------------------------------------------
    @cached_property
    def elements(self) -> list[GroupElement]:
        return enumerate_group(self)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_index(self) -> dict:
        return {_key(g.matrix): g.index for g in self.elements}

    def index_of(self, M) -> int:
        return self.element_index[_key(M)]

    @cached_property
    def multiplication(self) -> np.ndarray:
        """Table with mult[i, j] = index of elements[i] * elements[j]."""
        n = self.order
        tab = np.empty((n, n), dtype=np.int64)
        for g in self.elements:
            for h in self.elements:
                tab[g.index, h.index] = self.index_of(g.matrix @ h.matrix)
        return tab

    @cached_property
    def inverse(self) -> np.ndarray:
        mult = self.multiplication
        inv = np.empty(self.order, dtype=np.int64)
        for i in range(self.order):
            inv[i] = int(np.where(mult[i] == 0)[0][0])
        return inv

    @cached_property
    def conjugacy_classes(self) -> list[list[int]]:
        mult, inv = self.multiplication, self.inverse
        seen = set()
        classes = []
        for g in range(self.order):
            if g in seen:
                continue
            orbit = sorted({int(mult[mult[h, g], inv[h]]) for h in range(self.order)})
            seen.update(orbit)
            classes.append(orbit)
        return classes

    @cached_property
    def class_of_element(self) -> np.ndarray:
        out = np.empty(self.order, dtype=np.int64)
        for k, cl in enumerate(self.conjugacy_classes):
            out[cl] = k
        return out

    @cached_property
    def coxeter_matrix(self) -> list[list[int]]:
        n = self.rank
        out = [[1] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i != j:
                    g = self.simple[i] @ self.simple[j]
                    k, cur = 1, g
                    ident = _key(self.elements[0].matrix)
                    while _key(cur) != ident:
                        cur = cur @ g
                        k += 1
                    out[i][j] = k
        return out

    # roots and reflections ---------------------------------------------
    @cached_property
    def _simple_roots_raw(self) -> list[list]:
        roots = [_root_form(s) for s in self.simple]
        # orient so that simple roots pairwise make obtuse angles (Coxeter graph is a tree)
        n = len(roots)
        fixed = {0}
        frontier = [0]
        while frontier:
            i = frontier.pop()
            for j in range(n):
                if j in fixed:
                    continue
                ip = sum(a * b for a, b in zip(roots[i], roots[j]))
                if ip != 0:
                    if float(ip) > 0:
                        roots[j] = [-x for x in roots[j]]
                    fixed.add(j)
                    frontier.append(j)
        return roots

    @cached_property
    def chamber_point(self) -> tuple:
        """A point of the fundamental chamber: simple roots all equal to 1 there."""
        return tuple(_solve_small(self._simple_roots_raw, [1] * self.rank))

    @cached_property
    def reflections(self) -> list[Reflection]:
        x = self.chamber_point
        refl_elems = [g for g in self.elements if _is_reflection(g.matrix, self.rank)]
        # classes of reflections under conjugation, ordered by first simple reflection
        mult, inv = self.multiplication, self.inverse
        ids = {g.index for g in refl_elems}
        simple_ids = [self.index_of(s) for s in self.simple]
        cls_of: dict[int, int] = {}
        ncls = 0
        for sid in simple_ids:
            if sid in cls_of:
                continue
            for h in range(self.order):
                cls_of[int(mult[mult[h, sid], inv[h]])] = ncls
            ncls += 1
        if set(cls_of) != ids:
            raise RuntimeError("reflection classes do not cover all reflections")
        out = []
        order = simple_ids + sorted(ids - set(simple_ids))
        for k, gid in enumerate(order):
            M = self.elements[gid].matrix
            a = _root_form(M)
            val = sum(ai * xi for ai, xi in zip(a, x))
            if float(val) < 0:
                a = [-v for v in a]
            nn = sum(v * v for v in a)
            co = [_simplify(2 * v / nn) for v in a]
            out.append(Reflection(k, gid, tuple(_simplify(v) for v in a), tuple(co), cls_of[gid]))
        return out

    @property
    def n_classes(self) -> int:
        return 1 + max(r.cls for r in self.reflections)

    @cached_property
    def class_sizes(self) -> list[int]:
        sizes = [0] * self.n_classes
        for r in self.reflections:
            sizes[r.cls] += 1
        return sizes

    @cached_property
    def roots_float(self) -> np.ndarray:
        return np.array([[float(v) for v in r.root] for r in self.reflections])

    @cached_property
    def coroots_float(self) -> np.ndarray:
        return np.array([[float(v) for v in r.coroot] for r in self.reflections])

    @cached_property
    def simple_roots_float(self) -> np.ndarray:
        return self.roots_float[: self.rank]

    @cached_property
    def reflection_matrices_float(self) -> list[np.ndarray]:
        return [to_float(self.elements[r.element].matrix) for r in self.reflections]

    def element_float(self, i: int) -> np.ndarray:
        return to_float(self.elements[i].matrix)

    @cached_property
    def rho_vee(self) -> np.ndarray:
        return 0.5 * self.coroots_float.sum(axis=0)

    @cached_property
    def basepoint(self) -> np.ndarray:
        """Default regular basepoint: rho-vee normalised to unit length."""
        r = self.rho_vee
        return r / np.linalg.norm(r)

    def chamber_element(self, x) -> int:
        """Index of w with w^{-1} x in the fundamental chamber."""
        y = np.asarray(x, dtype=float).copy()
        simple = self.simple_roots_float
        mats = [to_float(s) for s in self.simple]
        word = []
        for _ in range(10 * self.order + 10):
            vals = simple @ y
            if np.min(np.abs(vals)) < 1e-14:
                raise ValueError("point lies on a reflecting hyperplane")
            neg = np.where(vals < 0)[0]
            if len(neg) == 0:
                break
            i = int(neg[0])
            y = mats[i] @ y
            word.append(i)
        w = self.elements[0].matrix
        for i in word:
            w = w @ self.simple[i]
        return self.index_of(w)

    def clearance(self, x) -> float:
        """Euclidean distance from x to the nearest reflecting hyperplane."""
        R = self.roots_float
        z = np.asarray(x)
        return float(np.min(np.abs(R @ z) / np.linalg.norm(R, axis=1)))

    def __hash__(self):
        return hash(self.label)

    def __eq__(self, other):
        return isinstance(other, CoxeterDatum) and other.label == self.label


def _root_form(M) -> list:
    """A primitive-looking linear form cutting out the mirror of the reflection M."""
    E = _entries(M)
    n = E.shape[0]
    rows = [[(1 if i == j else 0) - E[i, j] for j in range(n)] for i in range(n)]
    best = next(r for r in rows if any(abs(float(v)) > 1e-12 for v in r))
    lead = next(v for v in best if abs(float(v)) > 1e-12)
    scale = abs(lead) if not isinstance(lead, float) else abs(lead)
    return [_simplify(v / scale) for v in best]


def _is_reflection(M, rank: int) -> bool:
    E = _entries(M)
    n = E.shape[0]
    tr = sum(E[i, i] for i in range(n))
    return abs(float(tr) - (n - 2)) < 1e-9 and _is_involution(M)


def _is_involution(M) -> bool:
    P = M @ M
    if isinstance(P, ExactMatrix):
        return P == ExactMatrix.identity(P.shape[0])
    return np.allclose(P, np.eye(P.shape[0]), atol=1e-9)


def enumerate_group(datum: CoxeterDatum, cap: int | None = None) -> list[GroupElement]:
    cap = datum.order_cap if cap is None else cap
    n = datum.simple[0].shape[0]
    ident = ExactMatrix.identity(n) if isinstance(datum.simple[0], ExactMatrix) else np.eye(n)
    elems = [GroupElement(0, ident, ())]
    seen = {_key(ident): 0}
    frontier = [elems[0]]
    while frontier:
        nxt = []
        for g in frontier:
            for i, s in enumerate(datum.simple):
                h = g.matrix @ s
                k = _key(h)
                if k in seen:
                    continue
                if len(elems) >= cap:
                    raise OverflowError(f"group order exceeds cap {cap}")
                el = GroupElement(len(elems), h, g.word + (i,))
                seen[k] = el.index
                elems.append(el)
                nxt.append(el)
        frontier = nxt
    return elems


_CACHE: dict[str, CoxeterDatum] = {}
_CACHE_LOCK = threading.Lock()


def build_coxeter(label: str) -> CoxeterDatum:
    fam, rank, m = parse_label(label)
    key = canonical_label(label)
    with _CACHE_LOCK:
        if key in _CACHE:
            return _CACHE[key]
    gens = _simple_generators(fam, rank, m)
    exact = isinstance(gens[0], ExactMatrix)
    d = 0
    if exact:
        d = max((g.d for g in gens), default=1)
    datum = CoxeterDatum(key, rank, fam, m, gens, _fundamental_degrees(fam, rank, m), exact, d)
    # force construction so invariant failures surface at build time
    _ = datum.reflections
    if math.prod(datum.degrees) != datum.order:
        raise RuntimeError(f"degree product {math.prod(datum.degrees)} != |W| = {datum.order}")
    with _CACHE_LOCK:
        _CACHE.setdefault(key, datum)
        return _CACHE[key]


def discriminant(datum: CoxeterDatum) -> Poly:
    out = Poly.constant(1, datum.rank)
    for r in datum.reflections:
        out = out * Poly.linear(list(r.root))
    return out


@dataclass(frozen=True)
class ParamPoint:
    """One parameter per conjugacy class of reflections."""

    values: tuple

    @classmethod
    def of(cls, datum: CoxeterDatum, c) -> "ParamPoint":
        if isinstance(c, ParamPoint):
            vals = c.values
        elif isinstance(c, (list, tuple)):
            vals = tuple(c)
        elif isinstance(c, str):
            vals = tuple(v for v in c.split(",") if v.strip())
        else:
            vals = (c,)
        vals = tuple(_parse_param(v) for v in vals)
        if len(vals) == 1 and datum.n_classes > 1:
            vals = vals * datum.n_classes
        if len(vals) != datum.n_classes:
            raise ValueError(f"{datum.label} has {datum.n_classes} reflection classes, got {len(vals)} values")
        return cls(vals)

    @property
    def is_real(self) -> bool:
        return all(not isinstance(v, complex) or v.imag == 0 for v in self.values)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.values)

    def of_reflection(self, datum: CoxeterDatum, r: Reflection):
        return self.values[r.cls]

    def to_float(self) -> "ParamPoint":
        return ParamPoint(tuple(complex(v) if isinstance(v, complex) else float(v) for v in self.values))

    def conj(self) -> "ParamPoint":
        return ParamPoint(tuple(v.conjugate() if isinstance(v, complex) else v for v in self.values))

    def __str__(self):
        return ",".join(str(v) for v in self.values)


def _parse_param(v):
    if isinstance(v, complex):
        return v
    if isinstance(v, float):
        return Fraction(repr(v)) if math.isfinite(v) else v
    if isinstance(v, str):
        v = v.strip()
        if "j" in v:
            return complex(v)
        return to_exact(v)
    return to_exact(v)
