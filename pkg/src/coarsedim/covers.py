"""Cover families witnessing asymptotic-dimension bounds, and their verification.

A :class:`CoverFamilySpec` is intensional: ``classify(x)`` names the family and
the member set containing ``x``.  :func:`verify_cover` checks a finite sample
against the three conditions of a d-disjoint, bounded cover.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from .exact import (
    DomainError,
    LogLinearValue,
    MalformedInput,
    PAdicValue,
    as_rational,
    check_prime,
    format_rational,
    int_valuation,
    norm_value_le,
    norm_value_max,
    norm_value_to_json,
    padic_valuation,
    parse_rational,
)
from .groups import GroupSpec, Rationals, RationalsModZ, group_from_json
from .norms import (
    InducedNorm,
    Norm,
    PNorm,
    QNorm,
    QuotientNorm,
    WeightFunction,
    ball_enumerate,
    distance,
    norm_from_json,
    weights_from_json,
)
from .pairwise import PointSet, filter_pairs, max_distance, pair_blocks, run_blocks
from .samples import RationalGrid, as_points


class NotLocallyFinite(DomainError):
    """The subgroup generated by the small-weight elements outgrew the cap."""


@dataclass(frozen=True)
class ExceedsCap:
    """Result of :func:`subgroup_closure` when more than ``cap`` elements appear."""

    cap: int
    generated: int

    def __bool__(self):
        return False


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

def subgroup_closure(G: GroupSpec, T, cap: int) -> frozenset | ExceedsCap:
    """``<T>`` by breadth-first closure under the generators and their inverses.

    Returns :class:`ExceedsCap` as soon as more than ``cap`` elements are found.
    """
    if cap < 1:
        raise MalformedInput("cap must be >= 1")
    gens = []
    for t in T:
        t = G.check(t)
        gens.extend((t, G.inv(t)))
    gens = list(dict.fromkeys(g for g in gens if g != G.identity()))
    one = G.identity()
    seen = {one}
    queue = deque([one])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = G._mul(x, s)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    return ExceedsCap(cap, len(seen))
                queue.append(y)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# cover descriptors
# ---------------------------------------------------------------------------

@dataclass
class CoverFamilySpec:
    kind: str
    group: GroupSpec
    norm: Norm
    scale: Fraction
    n_families: int
    classify: Callable[[Any], tuple[int, Any]]
    claimed_bound: Any
    params: dict = field(default_factory=dict)
    # arguments that rebuild this cover through cover_from_json
    build: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "build": self.build,
            "group": self.group.to_json(),
            "norm": self.norm.to_json(),
            "scale": format_rational(self.scale),
            "n_families": self.n_families,
            "claimed_bound": norm_value_to_json(self.claimed_bound),
            "params": self.params,
        }


def _label_key(label) -> str:
    if isinstance(label, tuple):
        return "(" + ", ".join(_label_key(x) for x in label) + ")"
    if isinstance(label, Fraction):
        return format_rational(label)
    return str(label)


def _small_elements(weight, d: Fraction) -> set:
    """``{s : w(s) < d}`` for a weight function or for a norm used as its own weight."""
    if isinstance(weight, WeightFunction):
        G = weight.group
        out = {G.identity()}
        out.update(s for s, w in weight.generators_up_to(d) if w < d)
        return out
    return {x for x in ball_enumerate(weight, d) if not norm_value_le(d, weight(x))}


def coset_cover(G: GroupSpec, weight, d, cap: int) -> CoverFamilySpec:
    """Cover of ``G`` by the cosets of ``H = <{s : w(s) < d}>``.

    ``weight`` is a :class:`WeightFunction` on ``G`` or a norm on ``G`` taken as
    its own weight function (an induced norm of a norm is the norm itself).
    Raises :class:`NotLocallyFinite` when ``H`` has more than ``cap`` elements.
    """
    d = as_rational(d)
    if d <= 0:
        raise MalformedInput("scale must be positive")
    if isinstance(weight, WeightFunction):
        if weight.group != G:
            raise MalformedInput("weight function lives on a different group")
        norm: Norm = InducedNorm(weight)
    else:
        if weight.group != G:
            raise MalformedInput("norm lives on a different group")
        norm = weight
    T = _small_elements(weight, d)
    H = subgroup_closure(G, T, cap)
    if isinstance(H, ExceedsCap):
        raise NotLocallyFinite(
            f"<w < {d}> in {G} has more than {cap} elements ({len(T)} generators); "
            "no finite coset cover at this scale within the cap")
    bound = norm_value_max(norm(h) for h in H)
    H_list = list(H)
    cache: dict = {}

    def classify(x):
        x = G.check(x)
        label = cache.get(x)
        if label is None:
            coset = [G._mul(x, h) for h in H_list]
            label = min(coset, key=G.enum_key)
            for y in coset:
                cache[y] = label
        return 0, label

    return CoverFamilySpec(
        "coset", G, norm, d, 1, classify, bound,
        {"subgroup_order": len(H), "generators": [G.element_to_json(t) for t in sorted(T, key=G.enum_key)]},
        _coset_recipe(G, weight, d, cap),
    )


def _coset_recipe(G, weight, d, cap) -> dict:
    try:
        wjson = weight.to_json()
    except MalformedInput:
        return {}  # custom rule: the cover works but cannot be rebuilt from JSON
    return {"kind": "coset", "group": G.to_json(), "weight": wjson, "scale": format_rational(d), "cap": cap}


def least_m_with_log_at_least(d: Fraction) -> int:
    """Least integer ``M >= 1`` with ``ln M >= d``, decided exactly."""
    M = max(1, math.ceil(math.exp(float(d))) - 2) if d < 700 else 1
    while M > 1 and norm_value_le(d, LogLinearValue(0, M - 1)):
        M -= 1
    while not norm_value_le(d, LogLinearValue(0, M)):
        M += 1
    return M


def interval_cover_Q(d) -> CoverFamilySpec:
    """Two-family cover of ``(Q, ||.||_Q)``.

    With ``R = floor(d) + 1``, ``M`` least with ``ln M >= d`` and
    ``N = lcm(1..M)``, the point ``q`` lies in block ``n = floor(q / R)`` and in
    the coset of ``(1/N)Z`` containing ``q - nR``.  Family = parity of ``n``.
    Two points of one block in different cosets differ by a fraction whose
    denominator does not divide ``N`` and so exceeds ``M``; blocks of equal
    parity are ``R > d`` apart.
    """
    d = as_rational(d)
    if d <= 0:
        raise MalformedInput("scale must be positive")
    R = math.floor(d) + 1
    M = least_m_with_log_at_least(d)
    N = math.lcm(*range(1, M + 1))
    G = Rationals()

    def classify(q):
        q = G.check(q)
        n = math.floor(q / R)
        rest = q - n * R
        coset = rest - Fraction(math.floor(rest * N), N)
        return n % 2, (n, coset)

    return CoverFamilySpec(
        "interval", G, QNorm(), d, 2, classify, LogLinearValue(Fraction(R), N),
        {"R": R, "M": M, "N": str(N)},
        {"kind": "interval", "scale": format_rational(d)},
    )


def _level(p: int, d: Fraction) -> int:
    """Least integer k with ``p^k >= d``."""
    k = math.floor(math.log(float(d), p)) - 1 if d > 0 else 0
    while Fraction(p) ** k < d:
        k += 1
    while Fraction(p) ** (k - 1) >= d:
        k -= 1
    return k


def ultrametric_cover(p: int, d) -> CoverFamilySpec:
    """Partition of ``(Q, d_p)`` into closed balls of radius ``p^k``, with k least
    such that ``p^k >= d``.

    ``x`` and ``y`` share a ball iff ``v_p(x - y) >= -k``.  The label of a ball
    is its representative in ``(1/p^c)Z ∩ [0, p^-k)`` congruent to every member
    modulo ``p^-k Z_(p)`` (for ``k >= 0``: the principal part of the p-adic
    expansion above digit ``k``).
    """
    check_prime(p)
    d = as_rational(d)
    if d <= 0:
        raise MalformedInput("scale must be positive")
    k = _level(p, d)
    s = -k

    def classify(q):
        q = as_rational(q)
        if q == 0:
            return 0, Fraction(0)
        v = padic_valuation(q, p)
        if v >= s:
            return 0, Fraction(0)
        c = max(0, -v)
        scaled = q * p**c
        m, n = scaled.numerator, scaled.denominator
        mod = p ** (c + s)
        t = (m * pow(n, -1, mod)) % mod
        return 0, Fraction(t, p**c)

    return CoverFamilySpec(
        "ultrametric", Rationals(), PNorm(p), d, 1, classify, PAdicValue(p, k), {"p": p, "k": k},
        {"kind": "ultrametric", "p": p, "scale": format_rational(d)},
    )


def cover_from_json(obj: dict) -> CoverFamilySpec:
    """Rebuild a cover from its descriptor (the ``build`` entry, or the recipe itself)."""
    recipe = obj.get("build", obj)
    if not recipe:
        raise MalformedInput("this cover has no build recipe (custom weight rule)")
    kind = recipe.get("kind")
    try:
        d = parse_rational(str(recipe["scale"]))
        if kind == "interval":
            return interval_cover_Q(d)
        if kind == "ultrametric":
            return ultrametric_cover(int(recipe["p"]), d)
        if kind == "coset":
            G = group_from_json(recipe["group"])
            wobj = recipe["weight"]
            if isinstance(wobj, dict) and "norm" in wobj:
                weight = norm_from_json(wobj)
            else:
                weight = weights_from_json(wobj, G)
            return coset_cover(G, weight, d, int(recipe["cap"]))
    except KeyError as exc:
        raise MalformedInput(f"cover descriptor is missing {exc}") from None
    raise MalformedInput(f"unknown cover kind {kind!r}")


def net_point(r, p: int) -> Fraction:
    """A point ``x`` of ``{m/p^a} ∩ [0, 1)`` with ``||r - x||_p <= 1``."""
    check_prime(p)
    r = as_rational(r)
    if r == 0:
        return Fraction(0)
    v = padic_valuation(r, p)
    if v >= 0:
        return Fraction(0)
    c = -v
    pc = p**c
    # r = m / (p^c n) with p not dividing n
    m = r.numerator
    n = r.denominator // pc
    ell = (m * pow(n, -1, pc)) % pc
    return Fraction(ell, pc)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    coverage_ok: bool
    disjointness_violations: list
    max_sample_diameter_per_set: dict
    bound_ok: bool
    sample_size: int
    uncovered: list = field(default_factory=list)
    bound_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.coverage_ok and self.bound_ok and not self.disjointness_violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "coverage_ok": self.coverage_ok,
            "bound_ok": self.bound_ok,
            "sample_size": self.sample_size,
            "n_sets": len(self.max_sample_diameter_per_set),
            "disjointness_violations": [
                {"x": format_rational(x), "y": format_rational(y), "distance": norm_value_to_json(v)}
                for x, y, v in self.disjointness_violations
            ],
            "max_sample_diameter_per_set": {
                k: norm_value_to_json(v) for k, v in self.max_sample_diameter_per_set.items()
            },
            "uncovered": [format_rational(x) for x in self.uncovered],
            "bound_violations": self.bound_violations,
        }


def _gap_prune(norm: Norm, d) -> float | None:
    # ||x||_Q >= |x|: pairs further apart than d + 1 in value are > d apart
    if isinstance(norm, QNorm):
        return float(d) + 1.0
    return None


def verify_cover(cover: CoverFamilySpec, sample, workers: int | None = None) -> VerificationReport:
    """Check coverage, d-disjointness (``distance > d`` strictly) and the
    claimed diameter bound on a finite sample."""
    points = as_points(sample)
    labels, uncovered = [], []
    covered_points = []
    for x in points:
        try:
            fam, sid = cover.classify(x)
        except Exception:
            uncovered.append(x)
            continue
        if not 0 <= fam < cover.n_families:
            uncovered.append(x)
            continue
        covered_points.append(x)
        labels.append((fam, sid))
    ps = PointSet(cover.norm, covered_points)
    set_ids: dict = {}
    fam_arr = np.array([f for f, _ in labels], dtype=np.int64)
    set_arr = np.array([set_ids.setdefault((f, s), len(set_ids)) for f, s in labels], dtype=np.int64)
    d = cover.scale

    def scan(block):
        I, J = block
        mask = (fam_arr[I] == fam_arr[J]) & (set_arr[I] != set_arr[J])
        I, J = I[mask], J[mask]
        far = filter_pairs(ps, I, J, d, strict=True)
        bad = np.flatnonzero(~far)
        return [(int(I[k]), int(J[k])) for k in bad]

    blocks = pair_blocks(ps, max_gap=_gap_prune(cover.norm, d))
    bad_pairs = sorted(itertools.chain.from_iterable(run_blocks(scan, blocks, workers)))
    violations = [(ps.points[i], ps.points[j], ps.exact(i, j)) for i, j in bad_pairs]

    members: dict = {}
    for k, sid in enumerate(set_arr.tolist()):
        members.setdefault(sid, []).append(k)
    inverse = {v: k for k, v in set_ids.items()}
    diameters, bound_violations = {}, []
    for sid, idx in members.items():
        diam = max_distance(ps, idx)
        key = f"{inverse[sid][0]}:{_label_key(inverse[sid][1])}"
        diameters[key] = diam
        if not norm_value_le(diam, cover.claimed_bound):
            bound_violations.append(key)
    return VerificationReport(
        coverage_ok=not uncovered,
        disjointness_violations=violations,
        max_sample_diameter_per_set=diameters,
        bound_ok=not bound_violations,
        sample_size=len(points),
        uncovered=uncovered,
        bound_violations=bound_violations,
    )


# ---------------------------------------------------------------------------
# chain components (lower-bound witness)
# ---------------------------------------------------------------------------

class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values(), key=lambda g: g[0])


@dataclass
class ChainComponents:
    components: list[list]
    diameters: list

    def to_json(self) -> dict:
        return {
            "n_components": len(self.components),
            "components": [
                {"size": len(c), "min": format_rational(min(c)), "max": format_rational(max(c)),
                 "diameter": norm_value_to_json(dm)}
                for c, dm in zip(self.components, self.diameters)
            ],
            "max_diameter": norm_value_to_json(norm_value_max(self.diameters)) if self.diameters else None,
        }


def chain_components(sample, norm: Norm, d, workers: int | None = None) -> ChainComponents:
    """Components of the graph joining points at distance ``<= d``, with diameters.

    Any d-disjoint family covering the sample keeps each component inside a
    single member set, so a component of diameter D forces a set of diameter
    at least D.
    """
    d = as_rational(d)
    if d <= 0:
        raise MalformedInput("scale must be positive")
    points = as_points(sample)
    ps = PointSet(norm, points)
    gap = float(d) if isinstance(norm, QNorm) else None

    def scan(block):
        I, J = block
        near = filter_pairs(ps, I, J, d, strict=False)
        return list(zip(I[near].tolist(), J[near].tolist()))

    uf = UnionFind(len(points))
    for edges in run_blocks(scan, pair_blocks(ps, max_gap=gap), workers):
        for i, j in edges:
            uf.union(i, j)
    groups = uf.groups()
    return ChainComponents(
        components=[[points[i] for i in g] for g in groups],
        diameters=[max_distance(ps, g) for g in groups],
    )
