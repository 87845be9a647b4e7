"""Sampled coarse maps and exact checks of the metric inequalities.

Everything here reports exact norm values (rationals, ``q + ln n``, powers of
p); coarse equivalence itself is not decidable from finite data, so the
functions return moduli and violation lists rather than verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from .exact import (
    LogLinearValue,
    MalformedInput,
    as_rational,
    check_prime,
    format_rational,
    int_valuation,
    norm_value_le,
    norm_value_max,
    norm_value_to_json,
)
from .groups import fractional_part
from .norms import Norm, PNorm, QNorm, QuotientNorm, ball_enumerate, distance, p_norm, q_norm, quotient_norm
from .pairwise import MARGIN, PointSet, filter_pairs, pair_blocks
from .samples import RationalGrid, as_points


class OutsideDomain(MalformedInput):
    """A sample point lies outside the domain where an inequality is claimed."""


@dataclass(frozen=True)
class SampledMap:
    rule: Callable[[Any], Any]
    domain_norm: Norm
    target_norm: Norm
    name: str = ""

    def __call__(self, x):
        return self.target_norm.group.check(self.rule(self.domain_norm.group.check(x)))


def identity_map(norm: Norm) -> SampledMap:
    return SampledMap(lambda x: x, norm, norm, "id")


def section_map() -> SampledMap:
    """Q/Z -> Q ∩ [0, 1): the representative in [0, 1)."""
    return SampledMap(lambda x: x, QuotientNorm(), QNorm(), "i")


def projection_map() -> SampledMap:
    """Q -> Q/Z."""
    return SampledMap(fractional_part, QNorm(), QuotientNorm(), "p")


@dataclass
class ModulusProfile:
    entries: list[tuple[Fraction, Any]]
    sample_size: int = 0

    def is_monotone(self) -> bool:
        return all(norm_value_le(a[1], b[1]) for a, b in zip(self.entries, self.entries[1:]))

    def to_json(self) -> dict:
        return {
            "sample_size": self.sample_size,
            "entries": [{"R": format_rational(R), "S": norm_value_to_json(S)} for R, S in self.entries],
        }


def _max_over_pairs(ps: PointSet, I: np.ndarray, J: np.ndarray, floor_value):
    """Exact maximum distance over the given pairs (``floor_value`` if none)."""
    if I.size == 0:
        return floor_value
    if not ps.fast:
        return norm_value_max([floor_value] + [ps.exact(int(i), int(j)) for i, j in zip(I, J)])
    est = ps.approx(I, J)
    top = float(est.max())
    keep = np.flatnonzero(est >= top - MARGIN * (1.0 + abs(top)))
    return norm_value_max([floor_value] + [ps.exact(int(I[k]), int(J[k])) for k in keep])


def bornologous_profile(f: SampledMap, sample, R_list: Sequence) -> ModulusProfile:
    """For each R: the largest target distance over sample pairs at domain distance ``<= R``."""
    points = as_points(sample)
    R_list = sorted(as_rational(R) for R in R_list)
    dom = PointSet(f.domain_norm, points)
    tgt = PointSet(f.target_norm, [f(x) for x in points])
    zero = distance(f.target_norm, tgt.points[0], tgt.points[0]) if points else Fraction(0)
    blocks = list(pair_blocks(dom))
    entries = []
    for R in R_list:
        best = zero
        for I, J in blocks:
            near = filter_pairs(dom, I, J, R, strict=False)
            best = _max_over_pairs(tgt, I[near], J[near], best)
        entries.append((R, best))
    return ModulusProfile(entries, len(points))


def closeness(f: SampledMap, g: SampledMap, sample):
    """``max over the sample of d(f(x), g(x))``, exactly."""
    if f.target_norm != g.target_norm:
        raise MalformedInput(f"target spaces differ: {f.target_norm!r} vs {g.target_norm!r}")
    best = None
    for x in as_points(sample):
        v = distance(f.target_norm, f(x), g(x))
        if best is None or not norm_value_le(v, best):
            best = v
    return Fraction(0) if best is None else best


# ---------------------------------------------------------------------------
# sandwich inequalities
# ---------------------------------------------------------------------------

SANDWICH_KINDS = ("qnorm_ln", "quotient_thirds", "padic_ln")


def _violation(x, claim: str, lhs, rhs) -> dict:
    return {"point": format_rational(x), "claim": claim,
            "lhs": norm_value_to_json(lhs), "rhs": norm_value_to_json(rhs)}


def _in_domain(kind: str, x: Fraction, p: int | None) -> str | None:
    if not -1 < x < 1:
        return f"{x} is outside (-1, 1)"
    if kind == "padic_ln":
        if x == 0:
            return "0 is excluded"
        n = x.denominator
        if n != p ** int_valuation(n, p):
            return f"{x} is not of the form m/{p}^a"
    return None


def _sandwich_point(kind: str, x: Fraction, p: int | None) -> list[dict]:
    n = x.denominator
    out = []
    if kind == "qnorm_ln":
        mid = q_norm(x)
        lo, hi = LogLinearValue(0, n), LogLinearValue(0, n**3)
        if not lo <= mid:
            out.append(_violation(x, "ln n <= ||x||_Q", lo, mid))
        if not mid <= hi:
            out.append(_violation(x, "||x||_Q <= 3 ln n", mid, hi))
    elif kind == "quotient_thirds":
        qx = q_norm(x)
        qb = quotient_norm(fractional_part(x))
        lo = LogLinearValue(0, n)
        if not lo <= qb:
            out.append(_violation(x, "ln n <= ||x mod 1||", lo, qb))
        if not qx <= qb.scale(3):
            out.append(_violation(x, "||x||_Q <= 3 ||x mod 1||", qx, qb.scale(3)))
        if not qb <= qx:
            out.append(_violation(x, "||x mod 1|| <= ||x||_Q", qb, qx))
    else:
        pn = p_norm(x, p)
        lo = LogLinearValue(0, p**pn.exponent)
        hi = LogLinearValue(0, p ** (3 * pn.exponent))
        mid = q_norm(x)
        if not lo <= mid:
            out.append(_violation(x, "ln ||x||_p <= ||x||_Q", lo, mid))
        if not mid <= hi:
            out.append(_violation(x, "||x||_Q <= 3 ln ||x||_p", mid, hi))
    return out


def _certify(est: np.ndarray, scale: float = 1.0):
    """Split ``est <= 0`` claims into (holds, fails, undecided) masks."""
    slack = MARGIN * (1.0 + scale)
    return est < -slack, est > slack


def _sandwich_block(kind: str, n: int, m: np.ndarray, p: int | None) -> list[dict]:
    am = np.abs(m)
    if kind == "padic_ln":
        a = int_valuation(n, p)
        # ||m/p^a||_Q <= 3 ln p^a  <=>  |m|/p^a <= 2 a ln p ; the lower side is |m| >= 0
        est = am / n - 2 * a * math.log(p)
    elif kind == "qnorm_ln":
        est = am / n - 2 * math.log(n)
    else:
        r = np.mod(m, n)
        dist = np.minimum(r, n - r)
        # integer-exact sides: dist >= 0 and dist <= |m|
        bad = np.flatnonzero((dist < 0) | (dist > am))
        out = []
        for k in bad:
            out.extend(v for v in _sandwich_point(kind, Fraction(int(m[k]), n), p) if "3" not in v["claim"])
        est = (am - 3 * dist) / n - 2 * math.log(n)
        holds, _ = _certify(est, 2 * math.log(n) + 1)
        for k in np.flatnonzero(~holds):
            out.extend(v for v in _sandwich_point(kind, Fraction(int(m[k]), n), p) if "3" in v["claim"])
        return out
    holds, _ = _certify(est, 2 * math.log(n) + 1)
    out = []
    for k in np.flatnonzero(~holds):
        out.extend(_sandwich_point(kind, Fraction(int(m[k]), n), p))
    return out


def check_sandwich(kind: str, sample, p: int | None = None) -> list[dict]:
    """Every violation of the chosen two-sided inequality on the sample.

    ``qnorm_ln``: ``ln n <= ||m/n||_Q <= 3 ln n`` on Q ∩ (-1, 1).
    ``quotient_thirds``: ``ln n <= ||x mod 1||``, ``||x||_Q <= 3 ||x mod 1||``
    and ``||x mod 1|| <= ||x||_Q`` on Q ∩ (-1, 1).
    ``padic_ln``: ``ln ||x||_p <= ||x||_Q <= 3 ln ||x||_p`` on nonzero
    ``m/p^a`` in (-1, 1).

    Points outside the domain raise :class:`OutsideDomain`.  Grid samples are
    checked one denominator at a time on numpy arrays; undecided float
    verdicts fall back to the exact comparison.
    """
    if kind not in SANDWICH_KINDS:
        raise MalformedInput(f"unknown sandwich kind {kind!r}; expected one of {SANDWICH_KINDS}")
    if kind == "padic_ln":
        if p is None:
            raise MalformedInput("padic_ln needs a prime p")
        check_prime(p)
    out: list[dict] = []
    if isinstance(sample, RationalGrid):
        for n, m in sample.blocks():
            if m.size and (int(np.abs(m).max()) >= n):
                raise OutsideDomain(f"grid reaches {int(np.abs(m).max())}/{n}, outside (-1, 1)")
            if kind == "padic_ln":
                if n != p ** int_valuation(n, p):
                    raise OutsideDomain(f"denominator {n} is not a power of {p}")
                if (m == 0).any():
                    raise OutsideDomain("0 is excluded")
            out.extend(_sandwich_block(kind, n, m, p))
        return out
    for x in sample:
        x = as_rational(x)
        reason = _in_domain(kind, x, p)
        if reason:
            raise OutsideDomain(reason)
        out.extend(_sandwich_point(kind, x, p))
    return out


def _distortion_pair(x: Fraction, y: Fraction, p: int) -> list[dict]:
    dp = p_norm(y - x, p)
    dq = q_norm(y - x)
    lo = LogLinearValue(0, p**dp.exponent)
    hi = LogLinearValue(0, p ** (3 * dp.exponent))
    out = []
    pair = f"{format_rational(x)},{format_rational(y)}"
    if not lo <= dq:
        out.append({"pair": pair, "claim": "ln d_p <= d_Q", "lhs": lo.to_json(), "rhs": dq.to_json()})
    if not dq <= hi:
        out.append({"pair": pair, "claim": "d_Q <= 3 ln d_p", "lhs": dq.to_json(), "rhs": hi.to_json()})
    return out


def distance_distortion(sample, p: int) -> list[dict]:
    """Violations of ``ln d_p(x,y) <= d_Q(x,y) <= 3 ln d_p(x,y)`` over all pairs
    of distinct points of a sample of ``{m/p^a} ∩ [0, 1)``."""
    check_prime(p)
    points = [as_rational(x) for x in as_points(sample)]
    if len(set(points)) != len(points):
        raise OutsideDomain("sample points must be pairwise distinct")
    for x in points:
        if not 0 <= x < 1 or x.denominator != p ** int_valuation(x.denominator, p):
            raise OutsideDomain(f"{x} is not in {{m/{p}^a}} ∩ [0, 1)")
    qs, ps_ = PointSet(QNorm(), points), PointSet(PNorm(p), points)
    out = []
    for I, J in pair_blocks(qs):
        if qs.fast and ps_.fast:
            dq = qs.approx(I, J)
            ln_dp = np.log(ps_.approx(I, J))
            lower_ok, _ = _certify(ln_dp - dq, float(dq.max()))
            upper_ok, _ = _certify(dq - 3 * ln_dp, float(dq.max()))
            check = np.flatnonzero(~(lower_ok & upper_ok))
        else:
            check = range(I.size)
        for k in check:
            out.extend(_distortion_pair(points[int(I[k])], points[int(J[k])], p))
    return out


# ---------------------------------------------------------------------------
# balls under two proper norms
# ---------------------------------------------------------------------------

def ball_inclusion(norm1: Norm, norm2: Norm, R_list: Sequence) -> list[dict]:
    """For each R: ``S(R) = max ||x||_2`` over the ball ``B_1(R)``, and whether
    ``B_1(R) ⊆ B_2(S(R))`` holds on the computed balls."""
    if norm1.group != norm2.group:
        raise MalformedInput("norms live on different groups")
    rows = []
    for R in R_list:
        R = as_rational(R)
        B1 = ball_enumerate(norm1, R)
        S = norm_value_max(norm2(x) for x in B1)
        B2 = ball_enumerate(norm2, S)
        rows.append({
            "R": R,
            "S": S,
            "ball_size": len(B1),
            "image_ball_size": len(B2),
            "inclusion_ok": B1 <= B2,
        })
    return rows
