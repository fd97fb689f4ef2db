"""Exact matrices over Q or Q(sqrt d), stored as integer arrays over a common denominator.

A matrix is (a + b*sqrt(d)) / den with integer object arrays a, b.  Products are
integer matrix products, which keeps degree sweeps fast compared with
per-entry Fraction arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .scalars import QSqrt, _frac


def _int_array(x) -> np.ndarray:
    arr = np.asarray(x, dtype=object)
    return arr


def _zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def _lcm(x: int, y: int) -> int:
    return x // math.gcd(x, y) * y


class ExactMatrix:
    __slots__ = ("a", "b", "den", "d")

    def __init__(self, a, b=None, den: int = 1, d: int = 1, normalize: bool = True):
        self.a = _int_array(a)
        self.b = None if b is None else _int_array(b)
        self.den = int(den)
        self.d = int(d)
        if self.b is not None and self.d <= 1:
            raise ValueError("irrational part requires d > 1")
        if normalize:
            self._normalize()

    # construction ------------------------------------------------------
    @classmethod
    def from_entries(cls, rows, d: int | None = None) -> "ExactMatrix":
        arr = np.asarray(rows, dtype=object)
        flat = list(arr.flat)
        if d is None:
            d = 1
            for x in flat:
                if isinstance(x, QSqrt) and x.b != 0:
                    d = x.d
                    break
        avals, bvals = [], []
        for x in flat:
            if isinstance(x, QSqrt):
                if x.b != 0 and x.d != d:
                    raise ValueError("mixed quadratic fields")
                avals.append(x.a)
                bvals.append(x.b)
            else:
                avals.append(_frac(x))
                bvals.append(Fraction(0))
        den = 1
        for v in avals + bvals:
            den = _lcm(den, v.denominator)
        a = np.array([int(v * den) for v in avals] or [], dtype=object).reshape(arr.shape)
        if any(bvals):
            b = np.array([int(v * den) for v in bvals], dtype=object).reshape(arr.shape)
        else:
            b = None
        return cls(a, b, den, d if b is not None else 1)

    @classmethod
    def zeros(cls, shape, d: int = 1) -> "ExactMatrix":
        return cls(_zeros(shape), None, 1, 1, normalize=False)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        a = _zeros((n, n))
        for i in range(n):
            a[i, i] = 1
        return cls(a, None, 1, 1, normalize=False)

    @classmethod
    def scalar(cls, x) -> "ExactMatrix":
        return cls.from_entries([[x]])

    def _normalize(self) -> None:
        if self.den < 0:
            self.a = -self.a
            if self.b is not None:
                self.b = -self.b
            self.den = -self.den
        if self.b is not None and not any(v != 0 for v in self.b.flat):
            self.b = None
            self.d = 1
        if self.b is None:
            self.d = 1
        g = self.den
        for v in self.a.flat:
            if g == 1:
                break
            g = math.gcd(g, v)
        if self.b is not None and g != 1:
            for v in self.b.flat:
                if g == 1:
                    break
                g = math.gcd(g, v)
        if g > 1:
            self.a = self.a // g
            if self.b is not None:
                self.b = self.b // g
            self.den //= g

    # basic properties --------------------------------------------------
    @property
    def shape(self):
        return self.a.shape

    @property
    def ndim(self):
        return self.a.ndim

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.a.T, None if self.b is None else self.b.T, self.den, self.d, normalize=False)

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.a.copy(), None if self.b is None else self.b.copy(), self.den, self.d, normalize=False)

    def is_rational(self) -> bool:
        return self.b is None

    def is_zero(self) -> bool:
        return not any(v != 0 for v in self.a.flat) and (self.b is None)

    def _wrap(self, x):
        if self.b is None:
            return Fraction(x[0], self.den)
        return QSqrt(Fraction(x[0], self.den), Fraction(x[1], self.den), self.d).simplify()

    def __getitem__(self, key):
        if (isinstance(key, tuple) and len(key) == 2
                and all(isinstance(k, (list, np.ndarray)) for k in key)):
            key = np.ix_(key[0], key[1])
        a = self.a[key]
        b = None if self.b is None else self.b[key]
        if not isinstance(a, np.ndarray):
            return self._wrap((a, b))
        return ExactMatrix(a, b, self.den, self.d)

    def entries(self) -> np.ndarray:
        """Object array of Fraction / QSqrt entries."""
        out = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(*self.shape):
            out[idx] = self._wrap((self.a[idx], None if self.b is None else self.b[idx]))
        return out

    def to_float(self) -> np.ndarray:
        den = self.den
        re = np.frompyfunc(lambda v: v / den, 1, 1)(self.a).astype(float) if self.a.size else np.zeros(self.shape)
        if self.b is not None:
            re = re + math.sqrt(self.d) * np.frompyfunc(lambda v: v / den, 1, 1)(self.b).astype(float)
        return np.asarray(re, dtype=float)

    # arithmetic --------------------------------------------------------
    def _field(self, other: "ExactMatrix") -> int:
        if self.b is not None and other.b is not None and self.d != other.d:
            raise ValueError(f"incompatible fields Q(sqrt {self.d}) and Q(sqrt {other.d})")
        return self.d if self.b is not None else other.d

    @staticmethod
    def _coerce(x) -> "ExactMatrix | None":
        if isinstance(x, ExactMatrix):
            return x
        return None

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        d = self._field(other)
        den = _lcm(self.den, other.den)
        fs, fo = den // self.den, den // other.den
        a = self.a * fs + other.a * fo
        b = None
        if self.b is not None or other.b is not None:
            b = (self.b * fs if self.b is not None else 0) + (other.b * fo if other.b is not None else 0)
            b = _int_array(b)
        return ExactMatrix(a, b, den, d)

    def __neg__(self):
        return ExactMatrix(-self.a, None if self.b is None else -self.b, self.den, self.d, normalize=False)

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, x) -> "ExactMatrix":
        if isinstance(x, QSqrt) and x.b != 0:
            if self.b is not None and self.d != x.d:
                raise ValueError("incompatible fields")
            ca, cb = x.a, x.b
            den = _lcm(ca.denominator, cb.denominator)
            pa, pb = int(ca * den), int(cb * den)
            b0 = self.b if self.b is not None else 0
            a = self.a * pa + (b0 * pb * x.d if self.b is not None else 0)
            b = self.a * pb + (b0 * pa if self.b is not None else 0)
            return ExactMatrix(_int_array(a), _int_array(b), self.den * den, x.d)
        if isinstance(x, QSqrt):
            x = x.a
        x = _frac(x)
        return ExactMatrix(self.a * x.numerator, None if self.b is None else self.b * x.numerator,
                           self.den * x.denominator, self.d)

    def __mul__(self, x):
        if isinstance(x, ExactMatrix):
            return NotImplemented
        return self.scale(x)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        d = self._field(other)
        a = self.a.dot(other.a) if self.a.size and other.a.size else _zeros(self.shape[:-1] + other.shape[1:])
        b = None
        if self.b is not None and other.b is not None:
            a = a + self.b.dot(other.b) * d
        if self.b is not None or other.b is not None:
            b = _zeros(a.shape)
            if self.b is not None:
                b = b + self.b.dot(other.a)
            if other.b is not None:
                b = b + self.a.dot(other.b)
        return ExactMatrix(_int_array(a), b, self.den * other.den, d)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def key(self):
        """Hashable canonical form."""
        return (self.den, self.d, tuple(self.a.flat), None if self.b is None else tuple(self.b.flat))

    def trace(self):
        n = min(self.shape)
        ta = sum(self.a[i, i] for i in range(n))
        tb = None if self.b is None else sum(self.b[i, i] for i in range(n))
        return self._wrap((ta, tb))

    def __repr__(self):
        return f"ExactMatrix(shape={self.shape}, field={'Q' if self.b is None else f'Q(sqrt {self.d})'})"


# structural helpers shared by exact and float code -----------------------

def kron(A, B):
    if isinstance(A, ExactMatrix) or isinstance(B, ExactMatrix):
        A, B = as_exact_matrix(A), as_exact_matrix(B)
        d = A._field(B)
        a = np.kron(A.a, B.a)
        b = None
        if A.b is not None and B.b is not None:
            a = a + np.kron(A.b, B.b) * d
        if A.b is not None or B.b is not None:
            b = _zeros(a.shape)
            if A.b is not None:
                b = b + np.kron(A.b, B.a)
            if B.b is not None:
                b = b + np.kron(A.a, B.b)
        return ExactMatrix(_int_array(a), b, A.den * B.den, d)
    return np.kron(A, B)


def as_exact_matrix(x) -> ExactMatrix:
    if isinstance(x, ExactMatrix):
        return x
    arr = np.asarray(x, dtype=object)
    if arr.dtype == object and all(isinstance(v, (int, Fraction, QSqrt)) for v in arr.flat):
        return ExactMatrix.from_entries(arr)
    raise TypeError("cannot convert float data to an exact matrix")


def vstack(mats):
    if isinstance(mats[0], ExactMatrix):
        den = 1
        d = 1
        for m in mats:
            den = _lcm(den, m.den)
            if m.b is not None:
                d = m.d
        a = np.concatenate([m.a * (den // m.den) for m in mats], axis=0)
        b = None
        if any(m.b is not None for m in mats):
            b = np.concatenate([(m.b if m.b is not None else _zeros(m.shape)) * (den // m.den) for m in mats], axis=0)
        return ExactMatrix(a, b, den, d)
    return np.vstack(mats)


def hstack(mats):
    if isinstance(mats[0], ExactMatrix):
        return vstack([m.T for m in mats]).T
    return np.hstack(mats)


def block_diag(mats):
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out_rows = []
    c0 = 0
    for m in mats:
        parts = []
        if c0:
            parts.append(zeros_like(m, (m.shape[0], c0)))
        parts.append(m)
        rest = cols - c0 - m.shape[1]
        if rest:
            parts.append(zeros_like(m, (m.shape[0], rest)))
        out_rows.append(hstack(parts) if len(parts) > 1 else m)
        c0 += m.shape[1]
    assert sum(r.shape[0] for r in out_rows) == rows
    return vstack(out_rows)


def zeros_like(m, shape):
    if isinstance(m, ExactMatrix):
        return ExactMatrix.zeros(shape)
    return np.zeros(shape, dtype=np.asarray(m).dtype)


def identity_like(m, n: int):
    if isinstance(m, ExactMatrix):
        return ExactMatrix.identity(n)
    return np.eye(n, dtype=np.asarray(m).dtype)


def to_float(m) -> np.ndarray:
    if isinstance(m, ExactMatrix):
        return m.to_float()
    return np.asarray(m)


def scale(m, x):
    if isinstance(m, ExactMatrix):
        return m.scale(x)
    return m * (float(x) if not isinstance(x, complex) else x)


def is_exact_matrix(m) -> bool:
    return isinstance(m, ExactMatrix)


# exact linear algebra ----------------------------------------------------

def _field_zero(d: int):
    return Fraction(0) if d == 1 else QSqrt(0, 0, d)


def rref(M: ExactMatrix):
    """Reduced row echelon form over the field; returns (entries, pivot columns)."""
    R = M.entries()
    if R.ndim != 2:
        raise ValueError("rref needs a 2-D matrix")
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if R[i, col] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        p = R[r, col]
        R[r] = R[r] / p if not isinstance(p, QSqrt) else np.array([v / p for v in R[r]], dtype=object)
        for i in range(nrows):
            if i != r and R[i, col] != 0:
                f = R[i, col]
                R[i] = R[i] - f * R[r]
        pivots.append(col)
        r += 1
    return R, pivots


def rank(M) -> int:
    if isinstance(M, ExactMatrix):
        if M.shape[0] == 0 or M.shape[1] == 0:
            return 0
        if M.b is None:
            return _int_rank(M.a)
        return len(rref(M)[1])
    raise TypeError("exact rank needs an ExactMatrix")


def _int_rank(a: np.ndarray) -> int:
    """Fraction-free elimination over the integers."""
    A = a.copy()
    nrows, ncols = A.shape
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        nz = [i for i in range(r, nrows) if A[i, col] != 0]
        if not nz:
            continue
        piv = nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        p = A[r, col]
        if r + 1 < nrows:
            below = A[r + 1:, col].copy()
            A[r + 1:] = A[r + 1:] * p - np.outer(below, A[r])
            for i in range(r + 1, nrows):
                g = 0
                for v in A[i]:
                    g = math.gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    A[i] = A[i] // g
        r += 1
    return r


def nullspace(M: ExactMatrix) -> ExactMatrix:
    """Basis of {v : M v = 0} as columns of an exact matrix."""
    nrows, ncols = M.shape
    if nrows == 0:
        return ExactMatrix.identity(ncols)
    R, pivots = rref(M)
    free = [j for j in range(ncols) if j not in pivots]
    d = M.d
    cols = []
    for f in free:
        v = [_field_zero(d) for _ in range(ncols)]
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r, f]
        cols.append(v)
    if not cols:
        return ExactMatrix.zeros((ncols, 0))
    return ExactMatrix.from_entries(np.array(cols, dtype=object).T)


def column_space(M: ExactMatrix) -> ExactMatrix:
    """Basis of the column span (subset of columns)."""
    _, pivots = rref(M)
    if not pivots:
        return ExactMatrix.zeros((M.shape[0], 0))
    return M[:, pivots]


def solve_left_in_span(basis: ExactMatrix, vectors: ExactMatrix) -> bool:
    """True when every column of `vectors` lies in the column span of `basis`."""
    if vectors.shape[1] == 0:
        return True
    if basis.shape[1] == 0:
        return vectors.is_zero()
    return rank(hstack([basis, vectors])) == rank(basis)
