"""Exact arithmetic in Q and in real quadratic fields Q(sqrt d).

Rationals are carried as ``gmpy2.mpq``. A :class:`Scalar` holds ``a + b*sqrt(d)``
with rational ``a``, ``b``; a Scalar with ``b == 0`` is always stored with
``d == 0`` so that equal values have equal representations.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

from gmpy2 import mpq

MPQ = type(mpq())
Number = Union[int, Fraction, MPQ, "Scalar"]


class ExtensionMismatch(ValueError):
    """Two operands live in different quadratic fields."""


def is_squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _q(x) -> MPQ:
    if isinstance(x, float):
        raise TypeError("floats must go through dyadic() explicitly")
    return mpq(x)


def _is_rational(x) -> bool:
    return isinstance(x, (int, Rational, MPQ))


class Scalar:
    """Immutable element ``a + b*sqrt(d)`` of Q(sqrt d)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 0):
        a = _q(a)
        b = _q(b)
        if d < 0:
            raise ValueError(f"d must be non-negative, got {d}")
        if d != 0 and not is_squarefree(d):
            raise ValueError(f"d must be squarefree and > 1, got {d}")
        if d == 0 and b != 0:
            raise ValueError("a pure rational (d = 0) must have b = 0")
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.a, self.b, self.d))

    @classmethod
    def _new(cls, a, b, d) -> "Scalar":
        # inputs already validated: d is 0 or squarefree, a and b are mpq
        self = object.__new__(cls)
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        return self

    # ------------------------------------------------------------------
    # construction helpers

    @classmethod
    def sqrt(cls, d: int) -> "Scalar":
        return cls(0, 1, d)

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if _is_rational(x):
            return Scalar(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> "mpq":
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def conjugate(self) -> "Scalar":
        return Scalar._new(self.a, -self.b, self.d)

    def norm(self) -> "mpq":
        return self.a * self.a - self.b * self.b * self.d

    # ------------------------------------------------------------------
    # arithmetic

    def _other(self, other):
        if isinstance(other, Scalar):
            o = other
        elif _is_rational(other):
            return mpq(other), mpq(0), self.d
        else:
            return None
        if self.d and o.d and self.d != o.d:
            raise ExtensionMismatch(f"cannot mix sqrt({self.d}) and sqrt({o.d})")
        return o.a, o.b, self.d or o.d

    def __add__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        a, b, d = t
        return Scalar._new(self.a + a, self.b + b, d)

    __radd__ = __add__

    def __sub__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        a, b, d = t
        return Scalar._new(self.a - a, self.b - b, d)

    def __rsub__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        a, b, d = t
        return Scalar._new(a - self.a, b - self.b, d)

    def __mul__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        a, b, d = t
        return Scalar._new(self.a * a + self.b * b * d, self.a * b + self.b * a, d)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar._new(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if _is_rational(other):
            if other == 0:
                raise ZeroDivisionError("division by zero Scalar")
            q = mpq(other)
            return Scalar._new(self.a / q, self.b / q, self.d)
        if isinstance(other, Scalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_rational(other):
            return self.inverse() * other
        return NotImplemented

    def __neg__(self):
        return Scalar._new(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # ------------------------------------------------------------------
    # order

    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        lhs = a * a
        rhs = b * b * self.d
        if lhs == rhs:
            return 0  # unreachable for squarefree d > 1, kept for safety
        return sa if lhs > rhs else sb

    def cmp(self, other) -> int:
        diff = self - other
        if diff is NotImplemented:
            raise TypeError(f"cannot compare Scalar with {type(other).__name__}")
        return diff.sign()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if _is_rational(other):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return to_float(self)[0]

    # ------------------------------------------------------------------
    # text

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        if self.d:
            return f"Scalar({format_scalar(self)!r}, d={self.d})"
        return f"Scalar({format_scalar(self)!r})"


def scalar_arith(op: str, x, y=None):
    """Dispatch form of the field operations: add, sub, mul, div, neg, abs."""
    x = Scalar.coerce(x)
    if op == "neg":
        return -x
    if op == "abs":
        return abs(x)
    if y is None:
        raise ValueError(f"operation {op!r} needs two operands")
    y = Scalar.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def scalar_cmp(x, y) -> str:
    s = Scalar.coerce(x).cmp(Scalar.coerce(y))
    return {-1: "Less", 0: "Equal", 1: "Greater"}[s]


def sign(x) -> int:
    """Exact sign of an mpq/int/Fraction or Scalar."""
    if isinstance(x, Scalar):
        return x.sign()
    return (x > 0) - (x < 0)


def lift(x, d: int = 0):
    """Return the fastest exact representation: mpq when rational, else Scalar."""
    if isinstance(x, Scalar):
        if x.b == 0:
            return x.a
        if d and x.d != d:
            raise ExtensionMismatch(f"value in sqrt({x.d}) used with d = {d}")
        return x
    return mpq(x)


# ----------------------------------------------------------------------
# floating point conversion

_BITS = 120


def _sqrt_bracket(d: int, bits: int) -> tuple["mpq", "mpq"]:
    scale = 1 << bits
    r = math.isqrt(d * scale * scale)
    lo = mpq(r, scale)
    hi = lo if r * r == d * scale * scale else mpq(r + 1, scale)
    return lo, hi


def to_float(x) -> tuple[float, float]:
    """Nearest double to ``x`` and an absolute error bound (<= 1 ulp)."""
    x = Scalar.coerce(x)
    if x.b == 0:
        f = float(Fraction(int(x.a.numerator), int(x.a.denominator)))
        err = abs(mpq(f) - x.a)
        return f, _round_up(err)
    slo, shi = _sqrt_bracket(x.d, _BITS)
    if x.b > 0:
        lo, hi = x.a + x.b * slo, x.a + x.b * shi
    else:
        lo, hi = x.a + x.b * shi, x.a + x.b * slo
    mid = (lo + hi) / 2
    f = float(Fraction(int(mid.numerator), int(mid.denominator)))
    err = max(abs(mpq(f) - lo), abs(mpq(f) - hi))
    return f, _round_up(err)


def _round_up(err: "mpq") -> float:
    if err == 0:
        return 0.0
    f = float(Fraction(int(err.numerator), int(err.denominator)))
    while mpq(f) < err:
        f = math.nextafter(f, math.inf)
    return f


def scalar_to_float(x) -> tuple[float, float]:
    return to_float(x)


def dyadic(value: float) -> "mpq":
    """Exact rational value of a double."""
    if not math.isfinite(value):
        raise ValueError(f"not a finite float: {value}")
    return mpq(value)


# ----------------------------------------------------------------------
# text grammar
#   rational := INT ["/" POSINT]
#   scalar   := rational | rational ("+"|"-") rational "*s" | ["+"|"-"] rational "*s"

_RAT = r"[+-]?\d+(?:/\d+)?"
_ONLY_RAT = re.compile(rf"^({_RAT})$")
_FULL = re.compile(rf"^({_RAT})([+-])(\d+(?:/\d+)?)\*s$")
_PURE = re.compile(rf"^({_RAT})\*s$")
_DECIMAL = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


class ScalarSyntaxError(ValueError):
    pass


def _parse_rational(text: str) -> "mpq":
    if "/" in text:
        p, q = text.split("/")
        if int(q) == 0:
            raise ScalarSyntaxError(f"zero denominator in {text!r}")
        return mpq(int(p), int(q))
    return mpq(int(text))


def parse_scalar(text: str, d: int = 0) -> Scalar:
    """Parse the scalar grammar; ``s`` denotes sqrt(d)."""
    t = text.replace(" ", "")
    m = _ONLY_RAT.match(t)
    if m:
        return Scalar(_parse_rational(m.group(1)))
    m = _FULL.match(t)
    if m:
        a = _parse_rational(m.group(1))
        b = _parse_rational(m.group(3))
        if m.group(2) == "-":
            b = -b
        return _with_root(a, b, d, text)
    m = _PURE.match(t)
    if m:
        return _with_root(0, _parse_rational(m.group(1)), d, text)
    raise ScalarSyntaxError(f"malformed scalar {text!r}")


def _with_root(a, b, d, text) -> Scalar:
    if b == 0:
        return Scalar(a)
    if d == 0:
        raise ScalarSyntaxError(f"{text!r} uses s but no extension d was declared")
    return Scalar(a, b, d)


def parse_cli_scalar(text: str) -> Scalar:
    """CLI form: a plain scalar, ``<scalar>@<d>``, or a decimal read as a dyadic."""
    t = text.strip()
    if "@" in t:
        body, d = t.rsplit("@", 1)
        try:
            d = int(d)
        except ValueError:
            raise ScalarSyntaxError(f"bad extension in {text!r}") from None
        return parse_scalar(body, d)
    if _DECIMAL.match(t) and not _ONLY_RAT.match(t):
        return Scalar(dyadic(float(t)))
    return parse_scalar(t, 0)


def _fmt_rat(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Canonical text: ``p/q`` or ``p/q+r/t*s`` (integers drop ``/1``)."""
    x = Scalar.coerce(x)
    if x.b == 0:
        return _fmt_rat(x.a)
    head = _fmt_rat(x.a)
    tail = _fmt_rat(x.b)
    if x.a == 0:
        return f"{tail}*s"
    if not tail.startswith("-"):
        tail = "+" + tail
    return f"{head}{tail}*s"


def common_extension(values) -> int:
    """The single d shared by ``values`` (0 when all rational)."""
    d = 0
    for v in values:
        if isinstance(v, Scalar) and v.d:
            if d and v.d != d:
                raise ExtensionMismatch(f"values mix sqrt({d}) and sqrt({v.d})")
            d = v.d
    return d


__all__ = [
    "ExtensionMismatch",
    "Scalar",
    "ScalarSyntaxError",
    "common_extension",
    "dyadic",
    "format_scalar",
    "is_squarefree",
    "lift",
    "parse_cli_scalar",
    "parse_scalar",
    "scalar_arith",
    "scalar_cmp",
    "scalar_to_float",
    "sign",
    "to_float",
]
