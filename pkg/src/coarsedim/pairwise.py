"""Bulk pairwise distance scans with exact verdicts.

For ``||.||_Q``, the quotient norm and the p-adic norm the distance of a pair
of rationals has a closed form in the reduced difference ``a/b``:

* ``|a/b| + ln b``                      (Q)
* ``dist(a/b, Z) + ln b``               (Q/Z)
* ``p^-(v_p(a) - v_p(b))``              (p-adic)

These are evaluated in double precision over numpy blocks of pairs.  A float
verdict is accepted only when it clears the threshold by a margin far larger
than the rounding error; every other pair is decided by the exact scalar
distance.  Other norms go through the scalar path for every pair.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .exact import norm_value_le, norm_value_max
from .norms import Norm, PNorm, QNorm, QuotientNorm, distance

# absolute slack, relative to (1 + |threshold|); float error here is < 1e-12
MARGIN = 1e-9
_INT_LIMIT = 2**30
BLOCK_PAIRS = 1 << 21


class PointSet:
    """Points of a sample with their numerator/denominator arrays."""

    def __init__(self, norm: Norm, points: Sequence):
        self.norm = norm
        self.points = list(points)
        self.size = len(self.points)
        self.fast = isinstance(norm, (QNorm, QuotientNorm, PNorm)) and self.size > 0
        if self.fast:
            nums = [Fraction(x).numerator for x in self.points]
            dens = [Fraction(x).denominator for x in self.points]
            big = max(max(abs(n) for n in nums), max(dens))
            self.fast = big < _INT_LIMIT
        if self.fast:
            self.num = np.array(nums, dtype=np.int64)
            self.den = np.array(dens, dtype=np.int64)
            self.value = self.num / self.den

    def exact(self, i: int, j: int):
        return distance(self.norm, self.points[i], self.points[j])

    # -- float kernel -----------------------------------------------------
    def approx(self, I: np.ndarray, J: np.ndarray) -> np.ndarray:
        a = self.num[J] * self.den[I] - self.num[I] * self.den[J]
        b = self.den[I] * self.den[J]
        g = np.gcd(a, b)
        a //= g
        b //= g
        if isinstance(self.norm, QNorm):
            return np.abs(a) / b + np.log(b)
        if isinstance(self.norm, QuotientNorm):
            r = np.mod(a, b)
            return np.minimum(r, b - r) / b + np.log(b)
        p = self.norm.p
        va = _valuation(a, p)
        vb = _valuation(b, p)
        out = np.power(float(p), (vb - va).astype(float))
        out[a == 0] = 0.0
        return out


def _valuation(a: np.ndarray, p: int) -> np.ndarray:
    a = np.abs(a.copy())
    v = np.zeros(a.shape, dtype=np.int64)
    live = a != 0
    while True:
        div = live & (a % p == 0)
        if not div.any():
            return v
        v[div] += 1
        a[div] //= p


def pair_blocks(ps: PointSet, indices: np.ndarray | None = None, max_gap: float | None = None,
                block: int = BLOCK_PAIRS) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Index pairs ``(I, J)`` with ``I < J`` (positions in ``ps``), in blocks.

    With ``max_gap`` only pairs whose real values differ by at most that much
    are produced (requires the float kernel).
    """
    idx = np.arange(ps.size) if indices is None else np.asarray(indices, dtype=np.int64)
    n = idx.size
    if n < 2:
        return
    if max_gap is not None and ps.fast:
        order = idx[np.argsort(ps.value[idx], kind="stable")]
        vals = ps.value[order]
        hi = np.searchsorted(vals, vals + max_gap + 1e-9, side="right")
    else:
        order = idx
        hi = np.full(n, n)
    counts = np.maximum(hi - np.arange(1, n + 1), 0)
    start = 0
    while start < n:
        stop, total = start, 0
        while stop < n and (total == 0 or total + counts[stop] <= block):
            total += counts[stop]
            stop += 1
        c = counts[start:stop]
        if total:
            rows = np.arange(start, stop)
            I = np.repeat(rows, c)
            offsets = np.arange(total) - np.repeat(np.cumsum(c) - c, c)
            J = I + 1 + offsets
            a, b = order[I], order[J]
            yield np.minimum(a, b), np.maximum(a, b)
        start = stop


def _classify(ps: PointSet, I, J, threshold, strict: bool):
    """Split pairs into (definitely true, definitely false, undecided) for the
    predicate ``dist > threshold`` (strict) or ``dist <= threshold``."""
    t = float(threshold)
    est = ps.approx(I, J)
    slack = MARGIN * (1.0 + abs(t))
    above = est > t + slack
    below = est < t - slack
    unsure = ~(above | below)
    return (above, below, unsure) if strict else (below, above, unsure)


def _exact_pred(ps: PointSet, i, j, threshold, strict: bool) -> bool:
    d = ps.exact(int(i), int(j))
    le = norm_value_le(d, threshold)
    return (not le) if strict else le


def filter_pairs(ps: PointSet, I: np.ndarray, J: np.ndarray, threshold, strict: bool) -> np.ndarray:
    """Boolean mask over the pairs: ``d > threshold`` if strict else ``d <= threshold``."""
    if I.size == 0:
        return np.zeros(0, dtype=bool)
    if not ps.fast:
        return np.array([_exact_pred(ps, i, j, threshold, strict) for i, j in zip(I, J)], dtype=bool)
    yes, _, unsure = _classify(ps, I, J, threshold, strict)
    out = yes.copy()
    for k in np.flatnonzero(unsure):
        out[k] = _exact_pred(ps, I[k], J[k], threshold, strict)
    return out


def max_distance(ps: PointSet, indices: Sequence[int]):
    """Exact maximum pairwise distance within ``indices`` (0 for fewer than 2)."""
    idx = np.asarray(indices, dtype=np.int64)
    zero = distance(ps.norm, ps.points[int(idx[0])], ps.points[int(idx[0])]) if idx.size else 0
    if idx.size < 2:
        return zero
    if not ps.fast:
        return norm_value_max([zero] + [ps.exact(i, j) for i, j in zip(*_all_pairs(idx))])
    # pass 1: float maximum; pass 2: exact maximum over pairs within the margin of it
    top = max(float(ps.approx(I, J).max()) for I, J in pair_blocks(ps, idx))
    floor = top - MARGIN * (1.0 + abs(top))
    cand = []
    for I, J in pair_blocks(ps, idx):
        keep = ps.approx(I, J) >= floor
        cand.extend(zip(I[keep].tolist(), J[keep].tolist()))
    return norm_value_max(ps.exact(i, j) for i, j in cand)


def _all_pairs(idx: np.ndarray):
    I, J = np.triu_indices(idx.size, k=1)
    return idx[I].tolist(), idx[J].tolist()


def run_blocks(fn, blocks, workers: int | None = None) -> list:
    """Apply ``fn`` to each block, optionally on a thread pool; results keep block order."""
    blocks = list(blocks)
    if not workers or workers <= 1 or len(blocks) < 2:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))
