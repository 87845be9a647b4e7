import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsedim.coarse import (
    OutsideDomain,
    _sandwich_point,
    ball_inclusion,
    bornologous_profile,
    check_sandwich,
    closeness,
    distance_distortion,
    identity_map,
    projection_map,
    section_map,
    SampledMap,
)
from coarsedim.exact import LogLinearValue, MalformedInput, norm_value_le, norm_value_max
from coarsedim.groups import Integers
from coarsedim.norms import InducedNorm, QNorm, QuotientNorm, WordNorm, distance, dyadic_weights
from coarsedim.samples import grid, padic_grid

unit_points = st.integers(1, 400).flatmap(
    lambda n: st.integers(-n + 1, n - 1).map(lambda m: Fraction(m, n)))


def test_sandwiches_hold_on_grids():
    unit = grid(80, (-1, 1), open=(True, True))
    assert check_sandwich("qnorm_ln", unit) == []
    assert check_sandwich("quotient_thirds", unit) == []
    for p in (2, 3, 5, 7):
        sample = padic_grid(p, 5, (-1, 1), open=(True, True), exclude_zero=True)
        assert check_sandwich("padic_ln", sample, p) == []


@given(st.lists(unit_points, min_size=1, max_size=20))
def test_scalar_path_agrees(points):
    assert check_sandwich("qnorm_ln", points) == []
    assert check_sandwich("quotient_thirds", points) == []


def test_violation_reporting_outside_the_domain():
    # 3/2 = m/2^a lies outside (-1, 1): there ||x||_Q = 3/2 + ln 2 exceeds 3 ln 2
    found = _sandwich_point("padic_ln", Fraction(3, 2), 2)
    assert [v["claim"] for v in found] == ["||x||_Q <= 3 ln ||x||_p"]
    found = _sandwich_point("qnorm_ln", Fraction(5, 2), None)
    assert found and found[0]["point"] == "5/2"


def test_domain_is_enforced():
    with pytest.raises(OutsideDomain):
        check_sandwich("qnorm_ln", [Fraction(1)])
    with pytest.raises(OutsideDomain):
        check_sandwich("qnorm_ln", grid(5, (-1, 1)))
    with pytest.raises(OutsideDomain):
        check_sandwich("padic_ln", [Fraction(1, 3)], 2)
    with pytest.raises(OutsideDomain):
        check_sandwich("padic_ln", [Fraction(0)], 2)
    with pytest.raises(MalformedInput):
        check_sandwich("padic_ln", [Fraction(1, 2)])
    with pytest.raises(MalformedInput):
        check_sandwich("bogus", [Fraction(1, 2)])


def test_distance_distortion():
    sample = padic_grid(2, 6, (0, 1), open=(False, True))
    assert distance_distortion(sample, 2) == []
    assert distance_distortion(padic_grid(3, 3, (0, 1), open=(False, True)), 3) == []
    assert distance_distortion(sample.points()[:40], 2) == []
    with pytest.raises(OutsideDomain):
        distance_distortion([Fraction(1, 2), Fraction(1, 2)], 2)
    with pytest.raises(OutsideDomain):
        distance_distortion([Fraction(1, 3)], 2)


def _profile_oracle(f, points, R):
    best = distance(f.target_norm, f(points[0]), f(points[0]))
    for x, y in itertools.combinations(points, 2):
        if norm_value_le(distance(f.domain_norm, x, y), R):
            best = norm_value_max([best, distance(f.target_norm, f(x), f(y))])
    return best


def test_section_profile_matches_brute_force():
    pts = grid(12, (0, 1), open=(False, True)).points()
    prof = bornologous_profile(section_map(), pts, [1, 2, 3, 4])
    for R, S in prof.entries:
        assert S == _profile_oracle(section_map(), pts, R)
    assert prof.is_monotone()


def test_section_profile_values():
    prof = bornologous_profile(section_map(), grid(50, (0, 1), open=(False, True)), [1, 2, 3, 4])
    assert [S for _, S in prof.entries] == [
        LogLinearValue(0, 1),
        LogLinearValue(Fraction(5, 6), 6),
        LogLinearValue(Fraction(18, 19), 19),
        LogLinearValue(Fraction(49, 50), 50),
    ]


def test_projection_profile_is_contracting():
    # ||x mod 1|| <= ||x||_Q, so distances never grow under the projection
    pts = grid(10, (-2, 2)).points()
    prof = bornologous_profile(projection_map(), pts, [1, 2, 3])
    for R, S in prof.entries:
        assert norm_value_le(S, R)


def test_closeness():
    i, p = section_map(), projection_map()
    back = SampledMap(lambda x: p(i(x)), QuotientNorm(), QuotientNorm())
    assert closeness(back, identity_map(QuotientNorm()), grid(20, (0, 1), open=(False, True))) == LogLinearValue(0, 1)
    there = SampledMap(lambda x: i(p(x)), QNorm(), QNorm())
    assert closeness(there, identity_map(QNorm()), grid(5, (-3, 3))) == LogLinearValue(3, 1)
    with pytest.raises(MalformedInput):
        closeness(back, identity_map(QNorm()), [Fraction(0)])


def test_ball_inclusion_on_Z():
    rows = ball_inclusion(QNorm(Integers()), WordNorm(Integers(), [1]), [1, 2, 5])
    assert [(r["R"], r["S"], r["ball_size"]) for r in rows] == [(1, 1, 3), (2, 2, 5), (5, 5, 11)]
    assert all(r["inclusion_ok"] for r in rows)


def test_ball_inclusion_between_induced_norms():
    a, b = InducedNorm(dyadic_weights(2, 2)), InducedNorm(dyadic_weights(2, 3))
    rows = ball_inclusion(a, b, [1, 2, 4, 8])
    assert all(r["inclusion_ok"] for r in rows)
    assert [r["S"] for r in rows] == [1, 3, 9, 27]
    with pytest.raises(MalformedInput):
        ball_inclusion(QNorm(), QuotientNorm(), [1])
