"""Sparse multivariate polynomials with exact or float coefficients."""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of the given total degree in graded-lex (descending) order."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


class Poly:
    __slots__ = ("terms", "nvars")

    def __init__(self, terms: dict | None = None, nvars: int = 1):
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def linear(cls, coeffs) -> "Poly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(terms, n)

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def monomial(cls, exps, coeff=1) -> "Poly":
        return cls({tuple(exps): coeff}, len(exps))

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(out, self.nvars)

    def __neg__(self) -> "Poly":
        return Poly({k: -v for k, v in self.terms.items()}, self.nvars)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly({k: v * other for k, v in self.terms.items()}, self.nvars)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __call__(self, point):
        total = 0
        for k, v in self.terms.items():
            term = v
            for x, e in zip(point, k):
                if e:
                    term = term * x ** e
            total = total + term
        return total

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorised float/complex evaluation on an (m, nvars) array."""
        pts = np.asarray(points)
        out = np.zeros(pts.shape[0], dtype=np.result_type(pts.dtype, float))
        for k, v in self.terms.items():
            term = np.full(pts.shape[0], complex(v) if isinstance(v, complex) else float(v))
            for i, e in enumerate(k):
                if e:
                    term = term * pts[:, i] ** e
            out = out + term
        return out

    def linear_substitute(self, forms) -> "Poly":
        """Replace x_i by the linear form `forms[i]` (a coefficient list)."""
        images = [Poly.linear(f) for f in forms]
        out = Poly({}, len(forms[0]) if forms else self.nvars)
        cache: dict = {}
        for k, v in self.terms.items():
            term = Poly.constant(v, out.nvars)
            for i, e in enumerate(k):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    term = term * cache[key]
            out = out + term
        return out

    def divide_linear(self, coeffs) -> "Poly":
        """Exact quotient by the linear form sum coeffs[i] x_i; raises if a remainder is left."""
        k = next(i for i, c in enumerate(coeffs) if c != 0)
        lead = coeffs[k]
        rem = dict(self.terms)
        quot: dict = {}
        while True:
            live = [m for m, v in rem.items() if v != 0 and m[k] > 0]
            if not live:
                break
            m = max(live, key=lambda e: (e[k], e))
            v = rem.pop(m)
            qm = list(m)
            qm[k] -= 1
            qm = tuple(qm)
            qc = v / lead
            quot[qm] = quot.get(qm, 0) + qc
            for j, c in enumerate(coeffs):
                if c == 0 or j == k:
                    continue
                t = list(qm)
                t[j] += 1
                t = tuple(t)
                rem[t] = rem.get(t, 0) - qc * c
        scale = max([abs(complex(v)) for v in self.terms.values()] + [1.0])
        leftover = {m: v for m, v in rem.items()
                    if (abs(v) > 1e-9 * scale if isinstance(v, (float, complex)) else v != 0)}
        if leftover:
            raise ArithmeticError(f"linear division left a remainder with {len(leftover)} terms")
        return Poly(quot, self.nvars)

    def coefficient_vector(self, degree: int, basis_index: dict) -> list:
        vec = [0] * len(basis_index)
        for k, v in self.terms.items():
            if sum(k) != degree:
                raise ValueError("polynomial is not homogeneous of the requested degree")
            vec[basis_index[k]] = v
        return vec

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            mon = "*".join(f"x{i+1}^{e}" if e > 1 else f"x{i+1}" for i, e in enumerate(k) if e)
            parts.append(f"{self.terms[k]}" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)
