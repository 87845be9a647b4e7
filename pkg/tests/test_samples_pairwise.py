import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsedim.exact import MalformedInput, norm_value_le
from coarsedim.norms import PNorm, QNorm, QuotientNorm, distance
from coarsedim.pairwise import PointSet, filter_pairs, max_distance, pair_blocks
from coarsedim.samples import grid, padic_grid, random_rationals, sample_from_json

from strategies import small_rationals


def test_grid_contents():
    g = grid(4, (0, 1), open=(False, True))
    assert g.points() == [0, Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4)]
    assert len(g) == 6
    assert len(grid(60, (0, 1), open=(False, True))) == 1 + sum(
        1 for n in range(2, 61) for m in range(1, n) if np.gcd(m, n) == 1)
    assert padic_grid(2, 2, (-1, 1), open=(True, True), exclude_zero=True).points() == [
        Fraction(-1, 2), Fraction(1, 2), Fraction(-3, 4), Fraction(-1, 4), Fraction(1, 4), Fraction(3, 4)]


def test_random_rationals_are_seeded():
    assert random_rationals(20, 10, 10, seed=5) == random_rationals(20, 10, 10, seed=5)
    assert random_rationals(20, 10, 10, seed=5) != random_rationals(20, 10, 10, seed=6)


def test_sample_specs():
    assert len(sample_from_json({"denominator_max": 40, "window": ["-10", "10"]})) > 9000
    assert sample_from_json({"points": ["1/2", "-3/4"]}) == [Fraction(1, 2), Fraction(-3, 4)]
    assert sample_from_json(["1/3"]) == [Fraction(1, 3)]
    assert sample_from_json({"integers": [0, 3]}) == [0, 1, 2, 3]
    assert len(sample_from_json({"random": {"count": 7, "num_max": 5, "den_max": 5, "seed": 1}})) == 7
    pg = sample_from_json({"p": 3, "max_exp": 2, "window": ["0", "1"], "open": [False, True]})
    assert pg.denominators == (1, 3, 9)
    with pytest.raises(MalformedInput):
        sample_from_json({"denominator_max": 3})


def test_pair_blocks_cover_all_pairs():
    ps = PointSet(QNorm(), grid(8, (-2, 2)).points())
    pairs = set()
    for I, J in pair_blocks(ps, block=97):
        assert (I < J).all()
        pairs.update(zip(I.tolist(), J.tolist()))
    assert pairs == set(itertools.combinations(range(ps.size), 2))


def test_gap_pruning_keeps_close_pairs():
    ps = PointSet(QNorm(), grid(5, (-4, 4)).points())
    kept = set()
    for I, J in pair_blocks(ps, max_gap=1.0):
        kept.update(zip(I.tolist(), J.tolist()))
    for i, j in itertools.combinations(range(ps.size), 2):
        if abs(ps.points[i] - ps.points[j]) <= 1:
            assert (i, j) in kept


@pytest.mark.parametrize("norm", [QNorm(), PNorm(2), PNorm(3)])
def test_filter_matches_exact_including_ties(norm):
    pts = sorted(set(random_rationals(60, 30, 24, seed=2)))
    ps = PointSet(norm, pts)
    I, J = map(np.array, zip(*itertools.combinations(range(len(pts)), 2)))
    exact = [distance(norm, pts[i], pts[j]) for i, j in zip(I, J)]
    # thresholds equal to realised distances exercise the exact tie-break
    for t in [exact[0], exact[len(exact) // 2], Fraction(1), Fraction(5, 2)]:
        far = filter_pairs(ps, I, J, t, strict=True)
        near = filter_pairs(ps, I, J, t, strict=False)
        assert far.tolist() == [not norm_value_le(e, t) for e in exact]
        assert (far ^ near).all()


def test_quotient_kernel():
    pts = grid(15, (0, 1), open=(False, True)).points()
    ps = PointSet(QuotientNorm(), pts)
    I, J = map(np.array, zip(*itertools.combinations(range(len(pts)), 2)))
    est = ps.approx(I, J)
    for k in range(0, len(I), 37):
        assert abs(est[k] - float(distance(QuotientNorm(), pts[I[k]], pts[J[k]]))) < 1e-12


@given(st.lists(small_rationals, min_size=2, max_size=25, unique=True))
def test_max_distance_exact(points):
    ps = PointSet(QNorm(), points)
    got = max_distance(ps, range(len(points)))
    dists = [distance(QNorm(), x, y) for x, y in itertools.combinations(points, 2)]
    assert all(norm_value_le(d, got) for d in dists)
    assert got in dists
