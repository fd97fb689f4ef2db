"""Truncated power series in t with exact coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class GradedSeries:
    """Coefficients c_0..c_{N-1} of a power series truncated at order N."""

    coeffs: tuple

    @classmethod
    def of(cls, coeffs) -> "GradedSeries":
        return cls(tuple(coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        n = min(len(self), len(other))
        return GradedSeries(tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        n = min(len(self), len(other))
        return GradedSeries(tuple(a - b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def __mul__(self, other) -> "GradedSeries":
        if isinstance(other, GradedSeries):
            return GradedSeries(tuple(mul_trunc(self.coeffs, other.coeffs, min(len(self), len(other)))))
        return GradedSeries(tuple(a * other for a in self.coeffs))

    __rmul__ = __mul__

    def times_poly(self, poly) -> "GradedSeries":
        return GradedSeries(tuple(mul_trunc(self.coeffs, poly, len(self))))

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coeffs)

    def as_ints(self) -> list[int]:
        return [int(c) for c in self.coeffs]


def mul_trunc(a, b, n: int) -> list:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j, y in enumerate(b[: n - i]):
            out[i + j] += x * y
    return out


def inverse_series(p, n: int) -> list:
    """Power-series inverse of the polynomial / series p (p[0] != 0) to order n."""
    if p[0] == 0:
        raise ZeroDivisionError("series inverse needs a nonzero constant term")
    inv0 = Fraction(1) / p[0] if not isinstance(p[0], float) else 1.0 / p[0]
    out = [inv0]
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(p) - 1) + 1):
            s += p[j] * out[k - j]
        out.append(-s * inv0)
    return out[:n]


def poly_mul(a, b) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def one_minus_t_power(k: int) -> list[int]:
    """Coefficients of (1 - t)^k."""
    out = [1]
    for _ in range(k):
        out = poly_mul(out, [1, -1])
    return out


def trim(poly) -> list:
    p = list(poly)
    while p and p[-1] == 0:
        p.pop()
    return p


def evaluate(poly, t):
    total = 0
    for c in reversed(list(poly)):
        total = total * t + c
    return total
