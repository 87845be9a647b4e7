"""Abelian groups used throughout, written additively, with canonical element forms.

============================  ==========================================
variant                       canonical element
============================  ==========================================
``Integers``                  ``int``
``FiniteCyclic(m)``           ``int`` residue in ``[0, m)``
``DirectSumCyclic(orders)``   tuple of ``(index, residue)`` pairs, sorted,
                              residues nonzero (finite support)
``Rationals``                 ``Fraction``
``DyadicRationals(p)``        ``Fraction`` with p-power denominator (Z[1/p])
``RationalsModZ``             ``Fraction`` in ``[0, 1)``
``Pruefer(p)``                ``Fraction`` in ``[0, 1)``, p-power denominator
============================  ==========================================

The group law is called multiplication to match the metric conventions
(``d(x, y) = ||x^-1 y||``) but every group here is abelian and additive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterator

from .exact import MalformedInput, as_rational, check_prime, format_rational, int_valuation, parse_rational


class GroupMismatch(MalformedInput):
    """An element does not belong to the group it was used with."""


class GroupSpec:
    """Base class; subclasses are frozen dataclasses."""

    finite = False

    def identity(self):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def _mul(self, x, y):
        raise NotImplementedError

    def _inv(self, x):
        raise NotImplementedError

    def iter_elements(self) -> Iterator:
        raise NotImplementedError

    def order(self) -> int | None:
        return None

    def enum_key(self, x):
        """Sort key agreeing with the order of :meth:`iter_elements`."""
        raise NotImplementedError

    def check(self, x):
        if not self.contains(x):
            raise GroupMismatch(f"{x!r} is not a canonical element of {self}")
        return x

    def mul(self, x, y):
        return self._mul(self.check(x), self.check(y))

    def inv(self, x):
        return self._inv(self.check(x))

    def div(self, x, y):
        """``x^-1 y``, the element whose norm is ``d(x, y)``."""
        return self._mul(self._inv(self.check(x)), self.check(y))

    def power(self, x, k: int):
        x = self.check(x)
        if k < 0:
            x, k = self._inv(x), -k
        result = self.identity()
        base = x
        while k:
            if k & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            k >>= 1
        return result

    def enumerate(self, count: int) -> list:
        """The first ``count`` elements of the fixed enumeration (identity first)."""
        if count < 1:
            raise MalformedInput("count must be positive")
        return list(itertools.islice(self.iter_elements(), count))

    # serialization
    def to_json(self) -> dict:
        raise NotImplementedError

    def element_to_json(self, x) -> Any:
        return format_rational(x)

    def element_from_json(self, obj):
        return self.check(as_rational(obj))

    def parse_element(self, text: str):
        return self.check(parse_rational(text))


def _spiral() -> Iterator[int]:
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def _by_height(den_ok: Callable[[int], bool]) -> Iterator[Fraction]:
    """Rationals ordered by height ``max(|num|, den)``, then by (den, |num|, sign)."""
    yield Fraction(0)
    h = 1
    while True:
        batch = []
        for den in range(1, h + 1):
            if not den_ok(den):
                continue
            nums = [h] if den < h else range(1, h + 1)
            for num in nums:
                if math.gcd(num, den) == 1:
                    batch.append((den, num))
        batch.sort()
        for den, num in batch:
            yield Fraction(num, den)
            yield Fraction(-num, den)
        h += 1


def _height_key(q: Fraction):
    if q == 0:
        return (0,)
    return (max(abs(q.numerator), q.denominator), q.denominator, abs(q.numerator), q < 0)


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class Integers(GroupSpec):
    def identity(self):
        return 0

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool)

    def check(self, x):
        if isinstance(x, Fraction) and x.denominator == 1:
            x = x.numerator
        return super().check(x)

    def _mul(self, x, y):
        return x + y

    def _inv(self, x):
        return -x

    def iter_elements(self):
        return _spiral()

    def enum_key(self, x):
        return (abs(x), x < 0)

    def to_json(self):
        return {"group": "Z"}

    def element_to_json(self, x):
        return str(x)

    def element_from_json(self, obj):
        return self.check(int(obj))

    def parse_element(self, text):
        return self.check(int(text))

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class FiniteCyclic(GroupSpec):
    m: int
    finite = True

    def __post_init__(self):
        if self.m < 1:
            raise MalformedInput("cyclic group order must be >= 1")

    def identity(self):
        return 0

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.m

    def _mul(self, x, y):
        return (x + y) % self.m

    def _inv(self, x):
        return (-x) % self.m

    def iter_elements(self):
        return iter(range(self.m))

    def order(self):
        return self.m

    def enum_key(self, x):
        return x

    def to_json(self):
        return {"group": "FiniteCyclic", "m": self.m}

    def element_to_json(self, x):
        return str(x)

    def element_from_json(self, obj):
        return self.check(int(obj))

    def parse_element(self, text):
        return self.check(int(text))

    def __str__(self):
        return f"Z_{self.m}"


@dataclass(frozen=True)
class DirectSumCyclic(GroupSpec):
    """``⊕ Z_{m_i}``.  With ``repeat`` the order list is cycled over an
    unbounded index set (``m_i = orders[i % len(orders)]``)."""

    orders: tuple[int, ...]
    repeat: bool = False

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(m) for m in self.orders))
        if not self.orders or any(m < 1 for m in self.orders):
            raise MalformedInput("orders must be a nonempty list of positive integers")
        if self.repeat and all(m == 1 for m in self.orders):
            raise MalformedInput("a repeated order list needs some order > 1")

    @property
    def finite(self):
        return not self.repeat

    def order_at(self, i: int) -> int:
        if self.repeat:
            return self.orders[i % len(self.orders)]
        if not 0 <= i < len(self.orders):
            raise GroupMismatch(f"index {i} outside the summands of {self}")
        return self.orders[i]

    def identity(self):
        return ()

    def contains(self, x):
        if not isinstance(x, tuple):
            return False
        prev = -1
        for pair in x:
            if not (isinstance(pair, tuple) and len(pair) == 2):
                return False
            i, r = pair
            if i <= prev or i < 0 or (not self.repeat and i >= len(self.orders)):
                return False
            if not 0 < r < self.order_at(i):
                return False
            prev = i
        return True

    @staticmethod
    def _normalize(items: dict) -> tuple:
        return tuple(sorted((i, r) for i, r in items.items() if r))

    def _mul(self, x, y):
        acc = dict(x)
        for i, r in y:
            acc[i] = (acc.get(i, 0) + r) % self.order_at(i)
        return self._normalize(acc)

    def _inv(self, x):
        return tuple((i, (-r) % self.order_at(i)) for i, r in x)

    def make(self, support: dict) -> tuple:
        return self.check(self._normalize({int(i): int(r) % self.order_at(int(i)) for i, r in support.items()}))

    def iter_elements(self):
        # mixed-radix counter: k -> digits k_0, k_1, ... with k_i < m_i
        k = 0
        while True:
            digits, rest, i = {}, k, 0
            while rest:
                m = self.order_at(i) if (self.repeat or i < len(self.orders)) else None
                if m is None:
                    return
                rest, digits[i] = divmod(rest, m)
                i += 1
            yield self._normalize(digits)
            k += 1

    def order(self):
        return None if self.repeat else math.prod(self.orders)

    def enum_key(self, x):
        # position in the mixed-radix counter
        k, scale, digits = 0, 1, dict(x)
        top = max(digits, default=-1)
        for i in range(top + 1):
            k += digits.get(i, 0) * scale
            scale *= self.order_at(i)
        return k

    def to_json(self):
        obj = {"group": "DirectSumCyclic", "orders": list(self.orders)}
        if self.repeat:
            obj["repeat"] = True
        return obj

    def element_to_json(self, x):
        return {"support": {str(i): r for i, r in x}}

    def element_from_json(self, obj):
        return self.make(obj["support"])

    def parse_element(self, text):
        import json

        return self.element_from_json(json.loads(text))

    def __str__(self):
        return "⊕".join(f"Z_{m}" for m in self.orders) + ("⊕..." if self.repeat else "")


def _int_to_fraction(x):
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


class _RationalLike(GroupSpec):
    def identity(self):
        return Fraction(0)

    def check(self, x):
        return super().check(_int_to_fraction(x))

    def _mul(self, x, y):
        return x + y

    def _inv(self, x):
        return -x


@dataclass(frozen=True)
class Rationals(_RationalLike):
    def contains(self, x):
        return isinstance(x, Fraction)

    def iter_elements(self):
        return _by_height(lambda den: True)

    def enum_key(self, x):
        return _height_key(x)

    def to_json(self):
        return {"group": "Q"}

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class DyadicRationals(_RationalLike):
    """``Z[1/p]``; the name follows the p = 2 case."""

    p: int = 2

    def __post_init__(self):
        check_prime(self.p)

    def contains(self, x):
        return isinstance(x, Fraction) and _is_power_of(x.denominator, self.p)

    def iter_elements(self):
        return _by_height(lambda den: _is_power_of(den, self.p))

    def enum_key(self, x):
        return _height_key(x)

    def to_json(self):
        return {"group": "Zinvp", "p": self.p}

    def __str__(self):
        return f"Z[1/{self.p}]"


class _Circle(GroupSpec):
    def identity(self):
        return Fraction(0)

    def check(self, x):
        return super().check(_int_to_fraction(x))

    def enum_key(self, x):
        return (x.denominator, x.numerator)

    def _mul(self, x, y):
        s = x + y
        return s - 1 if s >= 1 else s

    def _inv(self, x):
        return -x + 1 if x else x

    def _den_ok(self, den: int) -> bool:
        raise NotImplementedError

    def contains(self, x):
        return isinstance(x, Fraction) and 0 <= x < 1 and self._den_ok(x.denominator)

    def iter_elements(self):
        yield Fraction(0)
        den = 2
        while True:
            if self._den_ok(den):
                for num in range(1, den):
                    if math.gcd(num, den) == 1:
                        yield Fraction(num, den)
            den += 1


@dataclass(frozen=True)
class RationalsModZ(_Circle):
    def _den_ok(self, den):
        return True

    def to_json(self):
        return {"group": "QmodZ"}

    def __str__(self):
        return "Q/Z"


@dataclass(frozen=True)
class Pruefer(_Circle):
    """``Z_{p^∞}`` realised as ``Z[1/p]/Z``."""

    p: int = 2

    def __post_init__(self):
        check_prime(self.p)

    def _den_ok(self, den):
        return _is_power_of(den, self.p)

    def iter_elements(self):
        yield Fraction(0)
        den = self.p
        while True:
            for num in range(1, den):
                if num % self.p:
                    yield Fraction(num, den)
            den *= self.p

    def to_json(self):
        return {"group": "Pruefer", "p": self.p}

    def __str__(self):
        return f"Z_{self.p}^∞"


def group_from_json(obj: dict) -> GroupSpec:
    kind = obj.get("group")
    if kind == "Z":
        return Integers()
    if kind == "FiniteCyclic":
        return FiniteCyclic(int(obj["m"]))
    if kind == "DirectSumCyclic":
        return DirectSumCyclic(tuple(obj["orders"]), bool(obj.get("repeat", False)))
    if kind == "Q":
        return Rationals()
    if kind == "Zinvp":
        return DyadicRationals(int(obj["p"]))
    if kind == "QmodZ":
        return RationalsModZ()
    if kind == "Pruefer":
        return Pruefer(int(obj["p"]))
    raise MalformedInput(f"unknown group descriptor {obj!r}")


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Homomorphism:
    source: GroupSpec
    target: GroupSpec
    rule: Callable[[Any], Any]
    name: str = ""

    def __call__(self, x):
        return self.target.check(self.rule(self.source.check(x)))


def fractional_part(q: Fraction) -> Fraction:
    return q - math.floor(q)


def natural_projection(kind: str) -> Homomorphism:
    """``Q_to_QmodZ`` (q -> q mod 1) or ``Zinvp_to_Pruefer`` (for p = 2 by default;
    use :func:`pruefer_projection` for other primes)."""
    if kind == "Q_to_QmodZ":
        return Homomorphism(Rationals(), RationalsModZ(), fractional_part, kind)
    if kind == "Zinvp_to_Pruefer":
        return pruefer_projection(2)
    raise MalformedInput(f"unknown projection {kind!r}")


def pruefer_projection(p: int) -> Homomorphism:
    return Homomorphism(DyadicRationals(p), Pruefer(p), fractional_part, "Zinvp_to_Pruefer")


def is_torsion_element(G: GroupSpec, x) -> bool:
    """Whether ``x`` has finite order; decided from the canonical form."""
    G.check(x)
    if isinstance(G, (Integers, Rationals, DyadicRationals)):
        return x == G.identity()
    return True


def element_order(G: GroupSpec, x) -> int | None:
    G.check(x)
    if isinstance(G, (Integers, Rationals, DyadicRationals)):
        return 1 if x == 0 else None
    if isinstance(G, FiniteCyclic):
        return G.m // math.gcd(G.m, x)
    if isinstance(G, DirectSumCyclic):
        return math.lcm(1, *(G.order_at(i) // math.gcd(G.order_at(i), r) for i, r in x))
    return x.denominator


__all__ = [
    "GroupSpec",
    "GroupMismatch",
    "Integers",
    "FiniteCyclic",
    "DirectSumCyclic",
    "Rationals",
    "DyadicRationals",
    "RationalsModZ",
    "Pruefer",
    "Homomorphism",
    "natural_projection",
    "pruefer_projection",
    "fractional_part",
    "group_from_json",
    "element_order",
    "is_torsion_element",
    "int_valuation",
]
