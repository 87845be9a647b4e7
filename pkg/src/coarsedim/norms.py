"""Group norms: weight-function-induced norms, ``||.||_Q``, the quotient norm
on Q/Z, and the p-adic norm, with distances and ball enumeration.

Value types: induced and word norms take rational values, ``||.||_Q`` and the
quotient norm take :class:`~coarsedim.exact.LogLinearValue` values, and the
p-adic norm takes :class:`~coarsedim.exact.PAdicValue` values.
"""

from __future__ import annotations

import heapq
import itertools
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact import (
    DomainError,
    LogLinearValue,
    MalformedInput,
    PAdicValue,
    as_rational,
    check_prime,
    format_rational,
    norm_value_le,
    padic_valuation,
    parse_rational,
)
from .groups import (
    DyadicRationals,
    GroupMismatch,
    GroupSpec,
    Integers,
    Pruefer,
    Rationals,
    RationalsModZ,
    group_from_json,
)


class NotProper(DomainError):
    pass


class ExceedsBudget(DomainError):
    pass


class InvalidWeightFunction(MalformedInput):
    pass


# ---------------------------------------------------------------------------
# weight functions
# ---------------------------------------------------------------------------

class WeightFunction:
    """Weights on a generating set, given explicitly or level by level.

    Explicit: a finite ``{generator: weight}`` table.

    Rule-based: ``level(k)`` returns ``(weight_k, generators_k)`` for k = 0, 1, ...;
    level weights must rise by at least ``min_increment`` from one level to the
    next.  That growth certificate is what makes ``{s : w(s) <= N}`` finite.
    Each level must be closed under inverses.
    """

    def __init__(self, group: GroupSpec, table: dict | None = None, *,
                 level: Callable[[int], tuple[Fraction, Sequence]] | None = None,
                 min_increment: Fraction | int | None = None,
                 weight_of: Callable | None = None,
                 name: str = "",
                 rule: dict | None = None):
        if (table is None) == (level is None):
            raise InvalidWeightFunction("give exactly one of an explicit table or a level rule")
        self.group = group
        self.name = name
        self.rule = rule
        self._level = level
        self._weight_of = weight_of
        self._levels: list[tuple[Fraction, tuple]] = []
        self._lock = threading.Lock()
        if table is not None:
            self.table = {group.check(s): as_rational(w) for s, w in table.items()}
            self._validate_table()
        else:
            self.table = None
            if min_increment is None or as_rational(min_increment) <= 0:
                raise InvalidWeightFunction(
                    "a rule-based weight function needs a positive min_increment growth certificate")
            self.min_increment = as_rational(min_increment)

    @classmethod
    def explicit(cls, group: GroupSpec, table: dict, name: str = "") -> "WeightFunction":
        return cls(group, table, name=name)

    @classmethod
    def by_levels(cls, group, level, min_increment, weight_of=None, name="", rule=None) -> "WeightFunction":
        return cls(group, level=level, min_increment=min_increment, weight_of=weight_of, name=name, rule=rule)

    @property
    def is_explicit(self) -> bool:
        return self.table is not None

    def _validate_table(self):
        G = self.group
        one = G.identity()
        for s, w in self.table.items():
            if w < 0:
                raise InvalidWeightFunction(f"negative weight {w} at {s!r}")
            if w == 0 and s != one:
                raise InvalidWeightFunction(f"zero weight at non-identity generator {s!r}")
            inv = G.inv(s)
            if inv in self.table and self.table[inv] != w:
                raise InvalidWeightFunction(f"w({s!r}) = {w} but w({inv!r}) = {self.table[inv]}")

    def _get_level(self, k: int) -> tuple[Fraction, tuple]:
        with self._lock:
            while len(self._levels) <= k:
                j = len(self._levels)
                w, gens = self._level(j)
                w = as_rational(w)
                gens = tuple(self.group.check(g) for g in gens)
                one = self.group.identity()
                if w < 0 or (w == 0 and any(g != one for g in gens)):
                    raise InvalidWeightFunction(f"level {j}: weight {w} on non-identity generators")
                if self._levels and w < self._levels[-1][0] + self.min_increment:
                    raise InvalidWeightFunction(
                        f"level {j}: weight {w} breaks the growth certificate (min increment {self.min_increment})")
                members = set(gens)
                if any(self.group.inv(g) not in members for g in gens):
                    raise InvalidWeightFunction(f"level {j} is not closed under inverses")
                self._levels.append((w, gens))
            return self._levels[k]

    def generators_up_to(self, bound) -> list[tuple[object, Fraction]]:
        """All ``(s, w(s))`` with ``s`` not the identity and ``w(s) <= bound``."""
        one = self.group.identity()
        if self.is_explicit:
            return [(s, w) for s, w in self.table.items() if s != one and norm_value_le(w, bound)]
        out = []
        for k in itertools.count():
            w, gens = self._get_level(k)
            if not norm_value_le(w, bound):
                break
            out.extend((g, w) for g in gens if g != one)
        return out

    def min_positive_weight(self) -> Fraction | None:
        if self.is_explicit:
            positive = [w for w in self.table.values() if w > 0]
            return min(positive) if positive else None
        for k in itertools.count():
            w, gens = self._get_level(k)
            if w > 0 and gens:
                return w
            if k > 10_000:
                return None

    def weight(self, s) -> Fraction:
        s = self.group.check(s)
        if self.is_explicit:
            if s not in self.table:
                raise MalformedInput(f"{s!r} is not in the weight function's domain")
            return self.table[s]
        if self._weight_of is not None:
            return as_rational(self._weight_of(s))
        raise MalformedInput("this rule-based weight function has no pointwise weight rule")

    def __repr__(self):
        return f"WeightFunction({self.name or ('explicit' if self.is_explicit else 'rule')}, {self.group})"

    def to_json(self):
        if not self.is_explicit:
            if self.rule is None:
                raise MalformedInput(f"{self!r} has no serializable rule")
            return dict(self.rule)
        return {
            "group": self.group.to_json(),
            "weights": [{"gen": self.group.element_to_json(s), "w": format_rational(w)}
                        for s, w in self.table.items()],
        }


def weights_from_json(obj, group: GroupSpec | None = None) -> WeightFunction:
    """Parse ``[{"gen": ..., "w": "a/b"}, ...]`` or ``{"group": ..., "weights": [...]}``
    or ``{"rule": name, ...}`` for the built-in rules."""
    if isinstance(obj, dict) and "rule" in obj:
        return named_weight_rule(obj["rule"], **{k: v for k, v in obj.items() if k != "rule"})
    if isinstance(obj, dict):
        group = group_from_json(obj["group"]) if "group" in obj else group
        entries = obj["weights"]
    else:
        entries = obj
    group = group or Rationals()
    table = {}
    for e in entries:
        table[group.element_from_json(e["gen"])] = as_rational(e["w"])
    return WeightFunction.explicit(group, table)


def word_weights(group: GroupSpec, gens: Iterable) -> WeightFunction:
    """Unit weights on a finite generating set and its inverses."""
    table = {}
    for g in gens:
        g = group.check(g)
        if g == group.identity():
            continue
        table[g] = Fraction(1)
        table[group.inv(g)] = Fraction(1)
    return WeightFunction.explicit(group, table, name="word")


def dyadic_weights(p: int = 2, base: int = 2) -> WeightFunction:
    """``w(±p^-k) = base^k`` for k >= 0 on ``Z[1/p]``.

    Weights grow by at least ``base - 1`` per level, which certifies properness.
    """
    check_prime(p)
    if base < 2:
        raise InvalidWeightFunction("base must be at least 2")

    def level(k):
        g = Fraction(1, p**k)
        return Fraction(base**k), (g, -g)

    def weight_of(s):
        if s.numerator not in (1, -1):
            raise MalformedInput(f"{s} is not a generator ±{p}^-k")
        return Fraction(base ** (int(math.log(s.denominator, p) + 0.5)))

    return WeightFunction.by_levels(DyadicRationals(p), level, base - 1, weight_of,
                                     name=f"dyadic_powers(p={p},base={base})",
                                     rule={"rule": "dyadic_powers", "p": p, "base": base})


def denominator_weights() -> WeightFunction:
    """``w(a/n) = n`` on every nonzero element of Q/Z (all of Q/Z generates)."""
    G = RationalsModZ()

    def level(k):
        n = k + 2
        return Fraction(n), tuple(Fraction(a, n) for a in range(1, n) if math.gcd(a, n) == 1)

    return WeightFunction.by_levels(G, level, 1, lambda s: Fraction(s.denominator), name="denominator",
                                     rule={"rule": "denominator"})


_RULES = {
    "dyadic_powers": lambda p=2, base=2: dyadic_weights(int(p), int(base)),
    "denominator": lambda: denominator_weights(),
}


def named_weight_rule(name: str, **params) -> WeightFunction:
    if name not in _RULES:
        raise MalformedInput(f"unknown weight rule {name!r}; known: {sorted(_RULES)}")
    return _RULES[name](**params)


# ---------------------------------------------------------------------------
# closed-form norms
# ---------------------------------------------------------------------------

def q_norm(q) -> LogLinearValue:
    """``||m/n||_Q = |m/n| + ln n`` for ``m/n`` in standard form."""
    q = as_rational(q)
    return LogLinearValue(abs(q), q.denominator)


def quotient_norm(x) -> LogLinearValue:
    """``min over integers k of ||x + k||_Q`` for ``x`` canonical in ``[0, 1)``.

    The minimum is found by walking translates outward from ``x`` in both
    directions; a direction stops once ``|x + k|`` alone exceeds the best value.
    """
    x = as_rational(x)
    if not 0 <= x < 1:
        raise MalformedInput(f"{x} is not a canonical representative in [0, 1)")
    best = q_norm(x)
    for step in (1, -1):
        k = step
        while True:
            y = x + k
            if norm_value_le(best, abs(y)):
                break
            cand = q_norm(y)
            if cand < best:
                best = cand
            k += step
    return best


def p_norm(q, p: int) -> PAdicValue:
    """``||q||_p = p^(-v_p(q))``; zero maps to :meth:`PAdicValue.zero`."""
    check_prime(p)
    q = as_rational(q)
    if q == 0:
        return PAdicValue.zero(p)
    return PAdicValue(p, -padic_valuation(q, p))


# ---------------------------------------------------------------------------
# weight-induced norms
# ---------------------------------------------------------------------------

def _search_bounds(w: WeightFunction, budget: Fraction):
    wmin = w.min_positive_weight()
    gens = w.generators_up_to(budget + 1)
    if wmin is None:
        return gens, 0
    # word length n must satisfy n < (budget + 1) / wmin
    bound = (budget + 1) / wmin
    max_len = math.ceil(bound) - 1
    return gens, max_len


def _dijkstra(w: WeightFunction, budget: Fraction, target=None) -> dict:
    """Best-first expansion of the weighted Cayley graph from the identity.

    Returns ``{element: norm}`` for every element with norm <= budget, or stops
    early once ``target`` is settled.
    """
    G = w.group
    gens, max_len = _search_bounds(w, budget)
    moves = []
    for s, ws in gens:
        moves.append((s, ws))
        inv = G.inv(s)
        if inv != s:
            moves.append((inv, ws))
    moves = list(dict.fromkeys(moves))
    one = G.identity()
    settled: dict = {}
    tie = itertools.count()
    heap = [(Fraction(0), next(tie), one, 0)]
    best = {one: Fraction(0)}
    while heap:
        cost, _, x, length = heapq.heappop(heap)
        if x in settled:
            continue
        settled[x] = cost
        if target is not None and x == target:
            break
        if length + 1 > max_len:
            continue
        for s, ws in moves:
            c = cost + ws
            if c > budget:
                continue
            y = G._mul(x, s)
            if y in settled:
                continue
            prev = best.get(y)
            if prev is None or c < prev:
                best[y] = c
                heapq.heappush(heap, (c, next(tie), y, length + 1))
    return settled


def induced_norm(w: WeightFunction, x, budget) -> Fraction:
    """Exact minimum of ``sum w(s_i)`` over factorizations ``x = s_1^±1 ... s_n^±1``.

    Raises :class:`ExceedsBudget` when no factorization of total weight
    ``<= budget`` exists.
    """
    budget = as_rational(budget)
    if budget <= 0:
        raise MalformedInput("budget must be positive")
    x = w.group.check(x)
    settled = _dijkstra(w, budget, target=x)
    if x not in settled:
        raise ExceedsBudget(f"no factorization of {x} with weight <= {budget}")
    return settled[x]


def induced_ball(w: WeightFunction, R) -> dict:
    """``{x: ||x||}`` for all x with induced norm ``<= R``."""
    R = as_rational(R)
    if R < 0:
        raise MalformedInput("radius must be nonnegative")
    if R == 0:
        return {w.group.identity(): Fraction(0)}
    return _dijkstra(w, R)


# ---------------------------------------------------------------------------
# norm descriptors
# ---------------------------------------------------------------------------

class Norm:
    """A norm on ``group``; call it on an element to get the norm value."""

    group: GroupSpec
    proper = True
    value_kind = "rational"

    def __call__(self, x):
        raise NotImplementedError

    def distance(self, x, y):
        return distance(self, x, y)

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class QNorm(Norm):
    """``||.||_Q``; ``group`` may be Q or a subgroup (Z, Z[1/p]) carrying the restriction."""

    group: GroupSpec = field(default_factory=Rationals)
    value_kind = "loglinear"

    def __call__(self, x):
        x = self.group.check(x)
        return q_norm(x)

    def to_json(self):
        obj = {"norm": "Q"}
        if not isinstance(self.group, Rationals):
            obj["group"] = self.group.to_json()
        return obj


@dataclass(frozen=True)
class QuotientNorm(Norm):
    """The quotient of ``||.||_Q`` on Q/Z (or its restriction to a Prüfer subgroup)."""

    group: GroupSpec = field(default_factory=RationalsModZ)
    value_kind = "loglinear"

    def __call__(self, x):
        return quotient_norm(self.group.check(x))

    def to_json(self):
        obj = {"norm": "QmodZ"}
        if not isinstance(self.group, RationalsModZ):
            obj["group"] = self.group.to_json()
        return obj


@dataclass(frozen=True)
class PNorm(Norm):
    p: int = 2
    group: GroupSpec = field(default_factory=Rationals)
    proper = False
    value_kind = "padic"

    def __post_init__(self):
        check_prime(self.p)

    def __call__(self, x):
        return p_norm(self.group.check(x), self.p)

    def to_json(self):
        return {"norm": "Qp", "p": self.p}


class InducedNorm(Norm):
    """Norm induced by a weight function (Dijkstra on the weighted Cayley graph).

    Computed balls are cached; the cache only ever grows, so results do not
    depend on call order.
    """

    max_budget = Fraction(2**16)
    cached_radius = Fraction(256)

    def __init__(self, w: WeightFunction, name: str = ""):
        self.w = w
        self.group = w.group
        self.name = name or w.name
        self._ball: dict = {w.group.identity(): Fraction(0)}
        self._radius = Fraction(0)
        self._lock = threading.Lock()

    def ball(self, R) -> dict:
        R = as_rational(R)
        with self._lock:
            if R > self._radius:
                self._ball = induced_ball(self.w, R)
                self._radius = R
            ball, radius = self._ball, self._radius
        if R == radius:
            return dict(ball)
        return {x: v for x, v in ball.items() if v <= R}

    def value(self, x, budget) -> Fraction:
        x = self.group.check(x)
        budget = as_rational(budget)
        with self._lock:
            if budget <= self._radius:
                v = self._ball.get(x)
                if v is None or v > budget:
                    raise ExceedsBudget(f"no factorization of {x} with weight <= {budget}")
                return v
        return induced_norm(self.w, x, budget)

    def __call__(self, x):
        x = self.group.check(x)
        with self._lock:
            if x in self._ball:
                return self._ball[x]
            budget = max(self._radius * 2, Fraction(1))
        # small values: grow the shared ball, so later calls are lookups
        while budget <= self.cached_radius:
            found = self.ball(budget).get(x)
            if found is not None:
                return found
            budget *= 2
        while budget <= self.max_budget:
            try:
                return induced_norm(self.w, x, budget)
            except ExceedsBudget:
                budget *= 2
        raise ExceedsBudget(f"{x} not reached within weight {self.max_budget}")

    def __repr__(self):
        return f"InducedNorm({self.name or self.w!r})"

    def to_json(self):
        return {"norm": "induced", "weights": self.w.to_json()}


def WordNorm(group: GroupSpec, gens: Iterable) -> InducedNorm:
    """Word norm for a finite generating set."""
    return InducedNorm(word_weights(group, gens), name="word")


def norm_from_json(obj: dict) -> Norm:
    kind = obj.get("norm")
    group = group_from_json(obj["group"]) if "group" in obj else None
    if kind == "Q":
        return QNorm(group or Rationals())
    if kind == "QmodZ":
        return QuotientNorm(group or RationalsModZ())
    if kind == "Qp":
        return PNorm(int(obj["p"]))
    if kind == "induced":
        return InducedNorm(weights_from_json(obj["weights"]))
    if kind == "word":
        group = group or Rationals()
        return WordNorm(group, [group.element_from_json(g) for g in obj["gens"]])
    raise MalformedInput(f"unknown norm descriptor {obj!r}")


# ---------------------------------------------------------------------------
# distance and balls
# ---------------------------------------------------------------------------

def distance(norm: Norm, x, y):
    """``d(x, y) = ||x^-1 y||``."""
    G = norm.group
    try:
        diff = G.div(x, y)
    except GroupMismatch as exc:
        raise GroupMismatch(f"distance in {G}: {exc}") from None
    return norm(diff)


def _ln_at_most(n: int, R) -> bool:
    return norm_value_le(LogLinearValue(0, n), R)


def ball_enumerate(norm: Norm, R) -> set:
    """``{x : ||x|| <= R}`` exactly.  ``R`` may be rational or ``q + ln n``."""
    if isinstance(norm, PNorm):
        raise NotProper(
            f"the {norm.p}-adic norm is not proper: every integer lies in the ball of radius 1, "
            "so no ball of radius >= 1 is finite")
    if not isinstance(R, LogLinearValue):
        R = as_rational(R)
        if R < 0:
            raise MalformedInput("radius must be nonnegative")
    if isinstance(norm, InducedNorm):
        if isinstance(R, LogLinearValue):
            R = _rational_floor_bound(R)
            return {x for x, v in norm.ball(R[0]).items() if norm_value_le(v, R[1])}
        return set(norm.ball(R))
    if isinstance(norm, QNorm):
        return _q_ball(norm, R)
    if isinstance(norm, QuotientNorm):
        return _quotient_ball(norm, R)
    raise MalformedInput(f"no ball enumeration for {norm!r}")


def _rational_floor_bound(R: LogLinearValue):
    # a rational search radius >= R, and R itself for the exact filter
    return Fraction(math.ceil(float(R)) + 1), R


def _member(G: GroupSpec, q: Fraction):
    if isinstance(G, Integers):
        return q.numerator if q.denominator == 1 else None
    return q if G.contains(q) else None


def _q_ball(norm: QNorm, R) -> set:
    G = norm.group
    out = set()
    n = 1
    while _ln_at_most(n, R):
        if _member(G, Fraction(1, n)) is not None or n == 1:
            m = 0
            while norm_value_le(LogLinearValue(Fraction(m, n), n), R):
                if math.gcd(m, n) == 1:
                    for q in (Fraction(m, n), Fraction(-m, n)):
                        x = _member(G, q)
                        if x is not None:
                            out.add(x)
                m += 1
        n += 1
    return out


def _quotient_ball(norm: QuotientNorm, R) -> set:
    G = norm.group
    out = {Fraction(0)}
    n = 2
    while _ln_at_most(n, R):
        for m in range(1, n):
            if math.gcd(m, n) == 1:
                x = Fraction(m, n)
                if G.contains(x) and norm_value_le(quotient_norm(x), R):
                    out.add(x)
        n += 1
    return out


__all__ = [
    "NotProper",
    "ExceedsBudget",
    "InvalidWeightFunction",
    "WeightFunction",
    "weights_from_json",
    "word_weights",
    "dyadic_weights",
    "denominator_weights",
    "named_weight_rule",
    "q_norm",
    "quotient_norm",
    "p_norm",
    "induced_norm",
    "induced_ball",
    "Norm",
    "QNorm",
    "QuotientNorm",
    "PNorm",
    "InducedNorm",
    "WordNorm",
    "norm_from_json",
    "distance",
    "ball_enumerate",
    "parse_rational",
]
