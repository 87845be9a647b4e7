"""Metric graph on dyadic rationals built by gluing isosceles triangles.

Level 0 is the chain of unit edges ``[n, n+1]`` for integers in ``[-W, W]``.
Every edge of length ``2^k`` with endpoints ``a, b`` receives an apex vertex
``(a + b) / 2`` joined to both endpoints by edges of length ``2^(k+1)``,
as long as ``k + 1 <= D``.  The vertex set is then every dyadic in
``[-W, W]`` with denominator at most ``2^D``.

Triangles above level ``D`` are omitted, so exact distance claims are only
made for levels below ``D``.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import MalformedInput, as_rational, format_rational, parse_rational
from .norms import InducedNorm, WeightFunction, dyadic_weights


@dataclass
class MetricGraph:
    window: int
    depth: int
    adjacency: dict = field(default_factory=dict)

    @property
    def vertices(self) -> list[Fraction]:
        return sorted(self.adjacency)

    def edges(self) -> list[tuple[Fraction, Fraction, int]]:
        out = []
        for u, nbrs in self.adjacency.items():
            for v, length in nbrs.items():
                if u < v:
                    out.append((u, v, length))
        return sorted(out)

    def add_edge(self, u: Fraction, v: Fraction, length: int):
        self.adjacency.setdefault(u, {})[v] = length
        self.adjacency.setdefault(v, {})[u] = length

    def to_json(self) -> list[dict]:
        return [{"u": format_rational(u), "v": format_rational(v), "len": length}
                for u, v, length in self.edges()]

    @classmethod
    def from_json(cls, edges: list[dict], window: int = 0, depth: int = 0) -> "MetricGraph":
        g = cls(window, depth)
        for e in edges:
            g.add_edge(parse_rational(e["u"]), parse_rational(e["v"]), int(e["len"]))
        if not window and g.adjacency:
            g.window = int(max(abs(x) for x in g.adjacency))
        if not depth and g.adjacency:
            g.depth = max(x.denominator for x in g.adjacency).bit_length() - 1
        return g


def build_graph(W: int, D: int) -> MetricGraph:
    if W < 1 or D < 1:
        raise MalformedInput("window and depth must be >= 1")
    g = MetricGraph(W, D)
    level = []
    for n in range(-W, W):
        a, b = Fraction(n), Fraction(n + 1)
        g.add_edge(a, b, 1)
        level.append((a, b, 1))
    for _ in range(D):
        nxt = []
        for a, b, length in level:
            apex = (a + b) / 2
            side = 2 * length
            g.add_edge(a, apex, side)
            g.add_edge(apex, b, side)
            nxt.append((a, apex, side))
            nxt.append((apex, b, side))
        level = nxt
    return g


def shortest_paths(G: MetricGraph, source, limit: int | None = None) -> dict:
    """Dijkstra from ``source``; with ``limit`` only vertices within that distance."""
    source = as_rational(source)
    if source not in G.adjacency:
        raise MalformedInput(f"unknown vertex {source}")
    dist = {source: 0}
    done = set()
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, length in G.adjacency[u].items():
            nd = d + length
            if limit is not None and nd > limit:
                continue
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return {v: dist[v] for v in done}


def graph_distance(G: MetricGraph, x, y) -> int:
    x, y = as_rational(x), as_rational(y)
    if y not in G.adjacency:
        raise MalformedInput(f"unknown vertex {y}")
    dist = shortest_paths(G, x)
    return dist[y]


def comparison_weights() -> WeightFunction:
    """``w(±2^-k) = 2^k`` on Z[1/2]; our choice for comparing with the graph metric."""
    return dyadic_weights(2, 2)


@dataclass
class RatioReport:
    min_ratio: Fraction
    max_ratio: Fraction
    argmin: tuple
    argmax: tuple
    pairs: int
    weight_label: str

    def to_json(self) -> dict:
        return {
            "weights": self.weight_label,
            "pairs": self.pairs,
            "min_ratio": format_rational(self.min_ratio),
            "max_ratio": format_rational(self.max_ratio),
            "argmin": [format_rational(x) for x in self.argmin],
            "argmax": [format_rational(x) for x in self.argmax],
        }


def compare_metrics(G: MetricGraph, w: WeightFunction | None = None, window=None) -> RatioReport:
    """Ratios ``graph_distance(x, y) / induced_norm(y - x)`` over all vertex pairs
    with ``|x|, |y| <= window`` (default: the whole graph)."""
    w = w or comparison_weights()
    norm = InducedNorm(w)
    lim = as_rational(window) if window is not None else Fraction(G.window)
    verts = [v for v in G.vertices if abs(v) <= lim]
    diffs = {y - x for x, y in itertools.combinations(verts, 2)}
    top = max((abs(d) for d in diffs), default=Fraction(0))
    # enough budget: |d| units plus one generator of each level up to the depth
    budget = 2 * (math.ceil(top) + 2 ** (G.depth + 1))
    ball = norm.ball(budget)
    lo = hi = None
    lo_arg = hi_arg = ()
    pairs = 0
    for x in verts:
        dist = shortest_paths(G, x)
        for y in verts:
            if y <= x:
                continue
            nd = ball.get(y - x)
            if nd is None:
                nd = norm(y - x)
            r = Fraction(dist[y]) / nd
            pairs += 1
            if lo is None or r < lo:
                lo, lo_arg = r, (x, y)
            if hi is None or r > hi:
                hi, hi_arg = r, (x, y)
    return RatioReport(lo, hi, lo_arg, hi_arg, pairs,
                       w.name + " (comparison weights chosen for this report)")
