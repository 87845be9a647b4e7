"""Finite samples of rational points.

A :class:`RationalGrid` is every reduced fraction ``m/n`` with ``n`` in a given
denominator list and ``m/n`` in a window.  Grids can be walked denominator by
denominator as numpy arrays, which the bulk checks use; ``points()`` gives
the plain list of ``Fraction``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .exact import MalformedInput, as_rational, check_prime, format_rational


@dataclass(frozen=True)
class RationalGrid:
    denominators: tuple[int, ...]
    lo: Fraction
    hi: Fraction
    lo_open: bool = False
    hi_open: bool = False
    exclude_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "denominators", tuple(sorted(set(int(n) for n in self.denominators))))
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if not self.denominators or self.denominators[0] < 1:
            raise MalformedInput("denominators must be positive")
        if self.lo > self.hi:
            raise MalformedInput("empty window")

    def numerators(self, n: int) -> np.ndarray:
        """Numerators ``m`` (coprime to n) with ``m/n`` in the window, ascending."""
        lo = math.ceil(self.lo * n)
        hi = math.floor(self.hi * n)
        if self.lo_open and Fraction(lo, n) == self.lo:
            lo += 1
        if self.hi_open and Fraction(hi, n) == self.hi:
            hi -= 1
        if lo > hi:
            return np.zeros(0, dtype=np.int64)
        m = np.arange(lo, hi + 1, dtype=np.int64)
        m = m[np.gcd(m, n) == 1]
        if self.exclude_zero:
            m = m[m != 0]
        return m

    def blocks(self) -> Iterator[tuple[int, np.ndarray]]:
        for n in self.denominators:
            m = self.numerators(n)
            if m.size:
                yield n, m

    def points(self) -> list[Fraction]:
        return [Fraction(int(m), n) for n, ms in self.blocks() for m in ms]

    def __len__(self) -> int:
        return sum(ms.size for _, ms in self.blocks())

    def to_json(self) -> dict:
        return {
            "denominators": list(self.denominators),
            "window": [format_rational(self.lo), format_rational(self.hi)],
            "open": [self.lo_open, self.hi_open],
            "exclude_zero": self.exclude_zero,
        }


def grid(denominator_max: int, window: Sequence, open: Sequence[bool] = (False, False),
         exclude_zero: bool = False) -> RationalGrid:
    """Reduced fractions with denominator ``<= denominator_max`` in ``window``."""
    lo, hi = (as_rational(w) for w in window)
    return RationalGrid(tuple(range(1, denominator_max + 1)), lo, hi, open[0], open[1], exclude_zero)


def padic_grid(p: int, max_exp: int, window: Sequence, open: Sequence[bool] = (False, False),
               exclude_zero: bool = False) -> RationalGrid:
    """Reduced fractions ``m/p^a`` with ``a <= max_exp`` in ``window`` (points of L)."""
    check_prime(p)
    lo, hi = (as_rational(w) for w in window)
    return RationalGrid(tuple(p**a for a in range(max_exp + 1)), lo, hi, open[0], open[1], exclude_zero)


def random_rationals(count: int, num_max: int, den_max: int, seed: int) -> list[Fraction]:
    """``count`` seeded rationals ``a/b`` with ``|a| <= num_max`` and ``1 <= b <= den_max``."""
    rng = random.Random(seed)
    return [Fraction(rng.randint(-num_max, num_max), rng.randint(1, den_max)) for _ in range(count)]


def integer_range(lo: int, hi: int) -> list[Fraction]:
    return [Fraction(k) for k in range(lo, hi + 1)]


def sample_from_json(obj) -> RationalGrid | list[Fraction]:
    """Sample spec formats::

        {"denominator_max": D, "window": [a, b], "open": [false, true]}
        {"p": 2, "max_exp": 10, "window": [a, b]}
        {"denominators": [...], "window": [a, b]}
        {"points": ["1/2", "-3/4", ...]}   or a bare list of points
        {"random": {"count": N, "num_max": A, "den_max": B, "seed": S}}
        {"integers": [lo, hi]}
    """
    if isinstance(obj, list):
        return [as_rational(x) for x in obj]
    if "points" in obj:
        return [as_rational(x) for x in obj["points"]]
    if "random" in obj:
        r = obj["random"]
        return random_rationals(int(r["count"]), int(r["num_max"]), int(r["den_max"]), int(r.get("seed", 0)))
    if "integers" in obj:
        lo, hi = obj["integers"]
        return integer_range(int(lo), int(hi))
    window = obj.get("window")
    if window is None:
        raise MalformedInput("grid sample specs need a window")
    opens = tuple(obj.get("open", (False, False)))
    excl = bool(obj.get("exclude_zero", False))
    if "max_exp" in obj:
        return padic_grid(int(obj["p"]), int(obj["max_exp"]), window, opens, excl)
    if "denominator_max" in obj:
        return grid(int(obj["denominator_max"]), window, opens, excl)
    if "denominators" in obj:
        lo, hi = (as_rational(w) for w in window)
        return RationalGrid(tuple(obj["denominators"]), lo, hi, opens[0], opens[1], excl)
    raise MalformedInput(f"unrecognised sample spec {obj!r}")


def as_points(sample) -> list:
    if isinstance(sample, RationalGrid):
        return sample.points()
    return list(sample)
