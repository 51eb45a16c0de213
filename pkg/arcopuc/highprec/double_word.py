# Copyright (c) 2025 Alibaba Group and its affiliates

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Double-word ("double-double") arithmetic.

A value is the unevaluated sum hi + lo of two binary64 floats with
|lo| <= ulp(hi)/2. Addition, multiplication and division are built from the
error-free transformations two_sum / two_prod and carry roughly 106 bits.
Elementary functions refine a binary64 seed (Newton) or use argument reduction
plus a Taylor series evaluated in double-word arithmetic.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from enum import Enum
from fractions import Fraction
from typing import Union

from arcopuc.errors import DivideByZero, DomainError

Number = Union["ExtendedReal", float, int]

_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 6.69692879491417e299  # 2**996, beyond this a*_SPLITTER overflows


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def split(a: float) -> tuple[float, float]:
    if abs(a) > _SPLIT_LIMIT:
        a_scaled = a * 3.7252902984619140625e-09  # 2**-28
        t = _SPLITTER * a_scaled
        hi = t - (t - a_scaled)
        lo = a_scaled - hi
        return hi * 268435456.0, lo * 268435456.0
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    if not math.isfinite(p):
        return p, 0.0
    ah, al = split(a)
    bh, bl = split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    s, e = two_sum(ah, bh)
    if not math.isfinite(s):
        return s, 0.0
    t, f = two_sum(al, bl)
    e += t
    s, e = quick_two_sum(s, e)
    e += f
    return quick_two_sum(s, e)


def _dd_mul(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    p, e = two_prod(ah, bh)
    if not math.isfinite(p):
        return p, 0.0
    e += ah * bl + al * bh
    return quick_two_sum(p, e)


def _dd_div(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    if bh == 0.0:
        raise DivideByZero("double-word division by zero")
    q1 = ah / bh
    if not math.isfinite(q1):
        return q1, 0.0
    ph, pl = _dd_mul(q1, 0.0, bh, bl)
    rh, rl = _dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = _dd_mul(q2, 0.0, bh, bl)
    rh, rl = _dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return _dd_add(q1, q2, q3, 0.0)


class ExtendedReal:
    """Immutable double-word real."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float, lo: float = 0.0) -> None:
        self.hi = float(hi)
        self.lo = float(lo) if math.isfinite(hi) else 0.0

    @classmethod
    def of(cls, value: Number) -> ExtendedReal:
        if isinstance(value, ExtendedReal):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return cls.from_fraction(Fraction(value))
        return cls(float(value))

    @classmethod
    def from_fraction(cls, value: Fraction) -> ExtendedReal:
        hi = float(value)
        lo = float(value - Fraction(hi)) if math.isfinite(hi) else 0.0
        return cls(*quick_two_sum(hi, lo))

    @classmethod
    def from_hex(cls, words: tuple[str, str]) -> ExtendedReal:
        return cls(float.fromhex(words[0]), float.fromhex(words[1]))

    def to_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)

    def to_hex(self) -> tuple[str, str]:
        return self.hi.hex(), self.lo.hex()

    def is_finite(self) -> bool:
        return math.isfinite(self.hi)

    def __float__(self) -> float:
        return self.hi + self.lo

    def __repr__(self) -> str:
        return f"ExtendedReal({self.hi!r}, {self.lo!r})"

    def __hash__(self) -> int:
        return hash((self.hi, self.lo))

    def __bool__(self) -> bool:
        return self.hi != 0.0

    def __neg__(self) -> ExtendedReal:
        return ExtendedReal(-self.hi, -self.lo)

    def __pos__(self) -> ExtendedReal:
        return self

    def __abs__(self) -> ExtendedReal:
        return -self if self.hi < 0.0 or (self.hi == 0.0 and self.lo < 0.0) else self

    def __add__(self, other: Number) -> ExtendedReal:
        o = ExtendedReal.of(other)
        return ExtendedReal(*_dd_add(self.hi, self.lo, o.hi, o.lo))

    __radd__ = __add__

    def __sub__(self, other: Number) -> ExtendedReal:
        o = ExtendedReal.of(other)
        return ExtendedReal(*_dd_add(self.hi, self.lo, -o.hi, -o.lo))

    def __rsub__(self, other: Number) -> ExtendedReal:
        return ExtendedReal.of(other) - self

    def __mul__(self, other: Number) -> ExtendedReal:
        o = ExtendedReal.of(other)
        return ExtendedReal(*_dd_mul(self.hi, self.lo, o.hi, o.lo))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> ExtendedReal:
        o = ExtendedReal.of(other)
        return ExtendedReal(*_dd_div(self.hi, self.lo, o.hi, o.lo))

    def __rtruediv__(self, other: Number) -> ExtendedReal:
        return ExtendedReal.of(other) / self

    def ldexp(self, k: int) -> ExtendedReal:
        return ExtendedReal(math.ldexp(self.hi, k), math.ldexp(self.lo, k))

    def square(self) -> ExtendedReal:
        return self * self

    def _cmp(self, other: Number) -> int:
        o = ExtendedReal.of(other)
        if self.hi != o.hi:
            return -1 if self.hi < o.hi else 1
        if self.lo != o.lo:
            return -1 if self.lo < o.lo else 1
        return 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtendedReal | float | int):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other: Number) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Number) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self._cmp(other) >= 0


ZERO = ExtendedReal(0.0)
ONE = ExtendedReal(1.0)
PI = ExtendedReal(3.141592653589793, 1.2246467991473532e-16)
HALF_PI = ExtendedReal(1.5707963267948966, 6.123233995736766e-17)
LN2 = ExtendedReal(0.6931471805599453, 2.3190468138462996e-17)

_TINY = 1e-36


def xr_sum(values: Iterable[Number]) -> ExtendedReal:
    total = ZERO
    for v in values:
        total = total + v
    return total


def xr_sqrt(a: ExtendedReal) -> ExtendedReal:
    if a.hi < 0.0:
        raise DomainError(f"sqrt of negative value {float(a)}")
    if a.hi == 0.0:
        return ZERO
    if not a.is_finite():
        return a
    x = math.sqrt(a.hi)
    r = a - ExtendedReal(*two_prod(x, x))
    return ExtendedReal(*quick_two_sum(x, r.hi / (2.0 * x)))


def xr_exp(a: ExtendedReal) -> ExtendedReal:
    if a.hi > 709.78:
        return ExtendedReal(math.inf)
    if a.hi < -745.0:
        return ZERO
    k = round(a.hi / LN2.hi)
    r = (a - LN2 * k).ldexp(-9)
    # s = e^r - 1 keeps the small quantity explicit through the squarings
    s = r
    term = r
    n = 1
    while True:
        n += 1
        term = term * r / n
        s = s + term
        if abs(term.hi) <= _TINY * max(abs(s.hi), 1e-300):
            break
    for _ in range(9):
        s = s * 2 + s * s
    return (s + 1).ldexp(k)


def xr_log(a: ExtendedReal) -> ExtendedReal:
    if a.hi <= 0.0:
        raise DomainError(f"log of non-positive value {float(a)}")
    if not a.is_finite():
        return a
    x = ExtendedReal(math.log(a.hi))
    return x + a * xr_exp(-x) - 1


def _taylor_sin_cos(r: ExtendedReal) -> tuple[ExtendedReal, ExtendedReal]:
    r2 = r * r
    sin_sum, cos_sum = r, ONE
    sin_term, cos_term = r, ONE
    n = 1
    while True:
        cos_term = -(cos_term * r2) / ((n) * (n + 1))
        sin_term = -(sin_term * r2) / ((n + 1) * (n + 2))
        cos_sum = cos_sum + cos_term
        sin_sum = sin_sum + sin_term
        n += 2
        if abs(cos_term.hi) < _TINY and abs(sin_term.hi) < _TINY:
            break
    return sin_sum, cos_sum


def xr_sincos(a: ExtendedReal) -> tuple[ExtendedReal, ExtendedReal]:
    if not a.is_finite():
        raise DomainError("sin/cos of a non-finite value")
    k = round(a.hi / HALF_PI.hi)
    r = a - HALF_PI * k
    s, c = _taylor_sin_cos(r)
    quadrant = k % 4
    if quadrant == 0:
        return s, c
    if quadrant == 1:
        return c, -s
    if quadrant == 2:
        return -s, -c
    return -c, s


def xr_sin(a: ExtendedReal) -> ExtendedReal:
    return xr_sincos(a)[0]


def xr_cos(a: ExtendedReal) -> ExtendedReal:
    return xr_sincos(a)[1]


def xr_atan(a: ExtendedReal) -> ExtendedReal:
    x = ExtendedReal(math.atan(a.hi))
    s, c = xr_sincos(x)
    return x - (s - a * c) / (c + a * s)


def sin_pi_rational(num: int, den: int) -> ExtendedReal:
    """
    sin(pi*num/den) with the argument reduced exactly in integers.

    Exact zeros are returned for integer multiples of pi.
    """
    if den <= 0:
        raise DomainError("denominator must be positive")
    n = num % (2 * den)
    sign = 1
    if n >= den:
        n -= den
        sign = -1
    if 2 * n > den:
        n = den - n
    if n == 0:
        return ZERO
    value = xr_sin(PI * n / den)
    return value if sign > 0 else -value


def cos_pi_rational(num: int, den: int) -> ExtendedReal:
    return sin_pi_rational(2 * num + den, 2 * den)


class ArithOp(Enum):
    """Binary double-word operations."""

    add = "add"
    sub = "sub"
    mul = "mul"
    div = "div"


class ElemFn(Enum):
    """Double-word elementary functions."""

    sqrt = "sqrt"
    exp = "exp"
    log = "log"
    sin = "sin"
    cos = "cos"
    atan = "atan"


_ARITH = {
    ArithOp.add: ExtendedReal.__add__,
    ArithOp.sub: ExtendedReal.__sub__,
    ArithOp.mul: ExtendedReal.__mul__,
    ArithOp.div: ExtendedReal.__truediv__,
}

_ELEM = {
    ElemFn.sqrt: xr_sqrt,
    ElemFn.exp: xr_exp,
    ElemFn.log: xr_log,
    ElemFn.sin: xr_sin,
    ElemFn.cos: xr_cos,
    ElemFn.atan: xr_atan,
}


def xr_arith(op: ArithOp | str, a: Number, b: Number) -> ExtendedReal:
    return _ARITH[ArithOp(op)](ExtendedReal.of(a), b)


def xr_elem(fn: ElemFn | str, a: Number) -> ExtendedReal:
    return _ELEM[ElemFn(fn)](ExtendedReal.of(a))


class ExtendedComplex:
    """Complex number with double-word real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: ExtendedReal, im: ExtendedReal = ZERO) -> None:
        self.re = re
        self.im = im

    @classmethod
    def of(
        cls, value: ExtendedComplex | ExtendedReal | complex | float
    ) -> ExtendedComplex:
        if isinstance(value, ExtendedComplex):
            return value
        if isinstance(value, ExtendedReal):
            return cls(value)
        z = complex(value)
        return cls(ExtendedReal(z.real), ExtendedReal(z.imag))

    @classmethod
    def unit(cls, theta: ExtendedReal) -> ExtendedComplex:
        s, c = xr_sincos(theta)
        return cls(c, s)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"ExtendedComplex({self.re!r}, {self.im!r})"

    def conjugate(self) -> ExtendedComplex:
        return ExtendedComplex(self.re, -self.im)

    def __neg__(self) -> ExtendedComplex:
        return ExtendedComplex(-self.re, -self.im)

    def __add__(self, other) -> ExtendedComplex:
        o = ExtendedComplex.of(other)
        return ExtendedComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> ExtendedComplex:
        o = ExtendedComplex.of(other)
        return ExtendedComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> ExtendedComplex:
        return ExtendedComplex.of(other) - self

    def __mul__(self, other) -> ExtendedComplex:
        if isinstance(other, ExtendedReal | float | int):
            return ExtendedComplex(self.re * other, self.im * other)
        o = ExtendedComplex.of(other)
        return ExtendedComplex(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> ExtendedComplex:
        if isinstance(other, ExtendedReal | float | int):
            return ExtendedComplex(self.re / other, self.im / other)
        o = ExtendedComplex.of(other)
        den = o.abs2()
        return ExtendedComplex(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )

    def __rtruediv__(self, other) -> ExtendedComplex:
        return ExtendedComplex.of(other) / self

    def abs2(self) -> ExtendedReal:
        return self.re * self.re + self.im * self.im

    def abs(self) -> ExtendedReal:
        return xr_sqrt(self.abs2())
