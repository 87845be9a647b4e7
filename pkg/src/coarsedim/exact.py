"""Exact number types: rationals, values of the form ``q + ln n``, p-adic norms.

Rationals are :class:`fractions.Fraction` throughout; ``Fraction`` already keeps
the standard form ``gcd(|num|, den) = 1, den > 0``.

Comparisons between ``q1 + ln n1`` and ``q2 + ln n2`` are decided without a
tolerance.  Equal symbolic forms are Equal.  Otherwise the difference
``(q1 - q2) + ln(n1/n2)`` is nonzero (``e`` to a nonzero rational power is
irrational), so interval evaluation at increasing precision always separates
it from zero.
"""

from __future__ import annotations

import enum
import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mpmath.ctx_iv import MPIntervalContext

Rational = Fraction
RationalLike = Union[Fraction, int]

DEFAULT_PRECISION_BITS = 128
PRECISION_ENV = "COARSEDIM_PRECISION_BITS"

# relative slack for the double-precision pre-check; double rounding error
# on these expressions is below 1e-15 relative
_FLOAT_SLACK = 1e-12


class MalformedInput(ValueError):
    """Input violates an operation's precondition."""


class DomainError(Exception):
    """A well-formed request whose mathematical answer is a refusal
    (non-proper norm, search budget or subgroup cap exceeded)."""


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def start_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise MalformedInput(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if bits < 16:
        raise MalformedInput(f"{PRECISION_ENV} must be at least 16")
    return bits


# ---------------------------------------------------------------------------
# rationals
# ---------------------------------------------------------------------------

def reduce(num: int, den: int) -> Fraction:
    """Standard form of ``num/den``.

    >>> reduce(-3, -6)
    Fraction(1, 2)
    """
    if den == 0:
        raise MalformedInput("zero denominator")
    return Fraction(int(num), int(den))


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise MalformedInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise MalformedInput(f"not a rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            return reduce(int(num), int(den))
        return Fraction(int(s))
    except ValueError:
        raise MalformedInput(f"cannot parse rational {text!r}") from None


def format_rational(q: RationalLike) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def is_prime(p: int) -> bool:
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % f for f in range(3, math.isqrt(p) + 1, 2))


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise MalformedInput(f"{p!r} is not a prime")
    return p


def int_valuation(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(q: RationalLike, p: int) -> int | float:
    """``v_p(q)``: exponent of p in the numerator minus that in the denominator.

    Returns ``math.inf`` for zero.
    """
    check_prime(p)
    q = as_rational(q)
    if q == 0:
        return math.inf
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


# ---------------------------------------------------------------------------
# sign of q + ln(a/b)
# ---------------------------------------------------------------------------

_contexts = threading.local()


def _iv_context() -> MPIntervalContext:
    ctx = getattr(_contexts, "iv", None)
    if ctx is None:
        ctx = _contexts.iv = MPIntervalContext()
    return ctx


def _interval_sign(q: Fraction, a: int, b: int, bits: int) -> int:
    """Sign of ``q + ln(a/b)`` at ``bits`` of precision, or 0 if undecided."""
    ctx = _iv_context()
    ctx.prec = bits
    val = ctx.mpf(q.numerator) / ctx.mpf(q.denominator)
    val += ctx.log(ctx.mpf(a)) - ctx.log(ctx.mpf(b))
    if val.a > 0:
        return 1
    if val.b < 0:
        return -1
    return 0


def sign_q_plus_log_ratio(q: RationalLike, a: int, b: int, precision_bits: int | None = None) -> int:
    """Exact sign of the real number ``q + ln(a) - ln(b)`` for integers a, b >= 1.

    When ``precision_bits`` is given the double-precision shortcut is skipped
    and interval evaluation starts at that precision; the verdict does not
    depend on it.
    """
    q = Fraction(q)
    if a == b:
        return (q > 0) - (q < 0)
    if q == 0:
        return 1 if a > b else -1
    if (q > 0) == (a > b):
        return 1 if q > 0 else -1
    if precision_bits is None:
        try:
            fq = float(q)
            la, lb = math.log(a), math.log(b)
        except OverflowError:
            pass
        else:
            est = fq + (la - lb)
            slack = _FLOAT_SLACK * (abs(fq) + abs(la) + abs(lb) + 1.0)
            if est > slack:
                return 1
            if est < -slack:
                return -1
        bits = start_precision()
    else:
        bits = precision_bits
    while True:
        s = _interval_sign(q, a, b, bits)
        if s:
            return s
        bits *= 2


# ---------------------------------------------------------------------------
# q + ln n
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogLinearValue:
    """The real number ``lin + ln(log_arg)``; ``lin >= 0`` and ``log_arg >= 1``."""

    lin: Fraction
    log_arg: int = 1

    def __post_init__(self):
        lin = as_rational(self.lin)
        if lin < 0:
            raise MalformedInput(f"negative linear part {lin}")
        if not isinstance(self.log_arg, int) or self.log_arg < 1:
            raise MalformedInput(f"log argument must be an integer >= 1, got {self.log_arg!r}")
        object.__setattr__(self, "lin", lin)

    @classmethod
    def of(cls, x: "LogLinearValue | RationalLike") -> "LogLinearValue":
        if isinstance(x, LogLinearValue):
            return x
        return cls(as_rational(x), 1)

    @property
    def is_zero(self) -> bool:
        return self.lin == 0 and self.log_arg == 1

    def __add__(self, other):
        if isinstance(other, (Fraction, int)):
            other = LogLinearValue.of(other)
        if not isinstance(other, LogLinearValue):
            return NotImplemented
        return LogLinearValue(self.lin + other.lin, self.log_arg * other.log_arg)

    __radd__ = __add__

    def scale(self, k: int) -> "LogLinearValue":
        """``k * value`` for a nonnegative integer k."""
        if k < 0:
            raise MalformedInput("negative scale factor")
        return LogLinearValue(k * self.lin, self.log_arg**k)

    def __float__(self) -> float:
        return float(self.lin) + math.log(self.log_arg)

    def compare(self, other, precision_bits: int | None = None) -> Ordering:
        if isinstance(other, LogLinearValue):
            return loglinear_compare(self, other, precision_bits)
        return loglinear_vs_rational(self, as_rational(other), precision_bits)

    def __lt__(self, other):
        return self.compare(other) is Ordering.LESS

    def __le__(self, other):
        return self.compare(other) is not Ordering.GREATER

    def __gt__(self, other):
        return self.compare(other) is Ordering.GREATER

    def __ge__(self, other):
        return self.compare(other) is not Ordering.LESS

    def __str__(self):
        return f"{self.lin} + ln {self.log_arg}"

    def to_json(self) -> dict:
        return {"lin": format_rational(self.lin), "log_arg": str(self.log_arg)}

    @classmethod
    def from_json(cls, obj: dict) -> "LogLinearValue":
        return cls(parse_rational(obj["lin"]), int(obj["log_arg"]))


def loglinear_compare(a: LogLinearValue, b: LogLinearValue, precision_bits: int | None = None) -> Ordering:
    if a.lin == b.lin and a.log_arg == b.log_arg:
        return Ordering.EQUAL
    return Ordering(sign_q_plus_log_ratio(a.lin - b.lin, a.log_arg, b.log_arg, precision_bits))


def loglinear_vs_rational(a: LogLinearValue, d: RationalLike, precision_bits: int | None = None) -> Ordering:
    d = as_rational(d)
    if a.lin == d and a.log_arg == 1:
        return Ordering.EQUAL
    return Ordering(sign_q_plus_log_ratio(a.lin - d, a.log_arg, 1, precision_bits))


# ---------------------------------------------------------------------------
# p-adic norm values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PAdicValue:
    """``p ** exponent``, or the distinguished zero when ``exponent is None``.

    Zero sits below every power of p.
    """

    p: int
    exponent: int | None

    def __post_init__(self):
        check_prime(self.p)

    @classmethod
    def zero(cls, p: int) -> "PAdicValue":
        return cls(p, None)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def to_rational(self) -> Fraction:
        if self.exponent is None:
            return Fraction(0)
        return Fraction(self.p) ** self.exponent

    def _key(self):
        return (0, 0) if self.exponent is None else (1, self.exponent)

    def _coerce(self, other):
        if isinstance(other, PAdicValue):
            if other.p != self.p:
                raise MalformedInput(f"cannot compare {self.p}-adic and {other.p}-adic values")
            return other._key()
        return None

    def __lt__(self, other):
        key = self._coerce(other)
        if key is None:
            return self.to_rational() < as_rational(other)
        return self._key() < key

    def __le__(self, other):
        key = self._coerce(other)
        if key is None:
            return self.to_rational() <= as_rational(other)
        return self._key() <= key

    def __gt__(self, other):
        key = self._coerce(other)
        if key is None:
            return self.to_rational() > as_rational(other)
        return self._key() > key

    def __ge__(self, other):
        key = self._coerce(other)
        if key is None:
            return self.to_rational() >= as_rational(other)
        return self._key() >= key

    def __float__(self) -> float:
        return 0.0 if self.exponent is None else float(self.p) ** self.exponent

    def __str__(self):
        return "0" if self.exponent is None else f"{self.p}^{self.exponent}"

    def to_json(self) -> dict:
        if self.exponent is None:
            return {"zero": True}
        return {"p": self.p, "exp": self.exponent}

    @classmethod
    def from_json(cls, obj: dict, p: int | None = None) -> "PAdicValue":
        if obj.get("zero"):
            if p is None:
                raise MalformedInput("zero p-adic value needs an explicit prime")
            return cls.zero(p)
        return cls(int(obj["p"]), int(obj["exp"]))


NormValue = Union[Fraction, LogLinearValue, PAdicValue]


def norm_value_to_json(v):
    if isinstance(v, (LogLinearValue, PAdicValue)):
        return v.to_json()
    return format_rational(v)


def norm_value_sum(a, b):
    """``a + b`` for two values of the same norm kind, as a comparable value."""
    if isinstance(a, PAdicValue) or isinstance(b, PAdicValue):
        return Fraction(a.to_rational() if isinstance(a, PAdicValue) else a) + (
            b.to_rational() if isinstance(b, PAdicValue) else b
        )
    if isinstance(a, LogLinearValue) or isinstance(b, LogLinearValue):
        return LogLinearValue.of(a) + LogLinearValue.of(b)
    return Fraction(a) + Fraction(b)


def norm_value_le(a, b) -> bool:
    """Exact ``a <= b`` across the three value kinds (and plain rationals)."""
    a, b = _rat(a), _rat(b)
    if isinstance(a, LogLinearValue):
        return a <= b
    if isinstance(b, LogLinearValue):
        return b >= a
    return a <= b


def _rat(x):
    if isinstance(x, PAdicValue):
        return x.to_rational()
    return x


def norm_value_max(values):
    best = None
    for v in values:
        if best is None or not norm_value_le(v, best):
            best = v
    return best
