"""Exact scalars: rationals and elements of a real quadratic field Q(sqrt d)."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class QSqrt:
    """a + b*sqrt(d) with rational a, b and squarefree d > 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 1):
        self.a = _frac(a)
        self.b = _frac(b)
        self.d = int(d)
        if self.d <= 1 and self.b != 0:
            raise ValueError("QSqrt needs d > 1 when the irrational part is nonzero")

    # conversions -------------------------------------------------------
    @staticmethod
    def lift(x, d: int) -> "QSqrt":
        if isinstance(x, QSqrt):
            if x.b != 0 and x.d != d:
                raise ValueError(f"mixing Q(sqrt {x.d}) with Q(sqrt {d})")
            return QSqrt(x.a, x.b, d)
        return QSqrt(_frac(x), 0, d)

    def simplify(self):
        """Return a Fraction when the irrational part vanishes."""
        return self.a if self.b == 0 else self

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def conjugate(self) -> "QSqrt":
        return QSqrt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    # arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QSqrt):
            if other.b != 0 and self.b != 0 and other.d != self.d:
                raise ValueError("incompatible quadratic fields")
            d = self.d if self.b != 0 or other.b == 0 else other.d
            return QSqrt.lift(self, d), QSqrt.lift(other, d)
        if isinstance(other, (int, Rational)):
            return self, QSqrt(other, 0, self.d)
        return NotImplemented, NotImplemented

    def __add__(self, other):
        x, y = self._coerce(other)
        if x is NotImplemented:
            return NotImplemented
        return QSqrt(x.a + y.a, x.b + y.b, x.d)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        x, y = self._coerce(other)
        if x is NotImplemented:
            return NotImplemented
        return QSqrt(x.a - y.a, x.b - y.b, x.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        x, y = self._coerce(other)
        if x is NotImplemented:
            return NotImplemented
        return QSqrt(x.a * y.a + x.d * x.b * y.b, x.a * y.b + x.b * y.a, x.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        x, y = self._coerce(other)
        if x is NotImplemented:
            return NotImplemented
        n = y.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        return x * QSqrt(y.a / n, -y.b / n, y.d)

    def __rtruediv__(self, other):
        return QSqrt.lift(other, self.d) / self

    def __pow__(self, k: int):
        if k < 0:
            return QSqrt(1, 0, self.d) / (self ** (-k))
        out = QSqrt(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # order -------------------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else (-sa if diff < 0 else 0)

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*sqrt({self.d}))"


def sign(x) -> int:
    """Exact sign of an int, Fraction or QSqrt; float sign otherwise."""
    if isinstance(x, QSqrt):
        return x.sign()
    return (x > 0) - (x < 0)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QSqrt)) and not isinstance(x, bool)


def to_exact(x):
    """Parse user input (str, int, Fraction, float with short decimal) into a Fraction."""
    if isinstance(x, (Fraction, QSqrt)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(repr(x))
    raise TypeError(f"cannot make {x!r} exact")


def sqrt_half_angle_table(num: int, den: int):
    """Exact (cos, sin) of 2*pi*num/den when den divides 12 or 8, else None.

    Values lie in Q, Q(sqrt 2) or Q(sqrt 3).
    """
    g = math.gcd(num, den)
    num, den = (num // g) % (den // g), den // g
    h = Fraction(1, 2)
    r3 = QSqrt(0, h, 3)
    r2 = QSqrt(0, h, 2)
    table12 = {  # multiples of 30 degrees
        0: (Fraction(1), Fraction(0)), 1: (r3, h), 2: (h, r3), 3: (Fraction(0), Fraction(1)),
        4: (-h, r3), 5: (-r3, h), 6: (Fraction(-1), Fraction(0)), 7: (-r3, -h),
        8: (-h, -r3), 9: (Fraction(0), Fraction(-1)), 10: (h, -r3), 11: (r3, -h),
    }
    if 12 % den == 0:
        cs = table12[num * (12 // den)]
    elif 8 % den == 0:
        k = num * (8 // den)
        table8 = {
            0: (Fraction(1), Fraction(0)), 1: (r2, r2), 2: (Fraction(0), Fraction(1)),
            3: (-r2, r2), 4: (Fraction(-1), Fraction(0)), 5: (-r2, -r2),
            6: (Fraction(0), Fraction(-1)), 7: (r2, -r2),
        }
        cs = table8[k]
    else:
        return None
    return tuple(v.simplify() if isinstance(v, QSqrt) else v for v in cs)
