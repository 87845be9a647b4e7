import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsedim.exact import MalformedInput
from coarsedim.groups import (
    DirectSumCyclic,
    DyadicRationals,
    FiniteCyclic,
    GroupMismatch,
    Integers,
    Pruefer,
    Rationals,
    RationalsModZ,
    element_order,
    group_from_json,
    is_torsion_element,
    natural_projection,
    pruefer_projection,
)

from strategies import GROUP_CASES, dyadics, rationals

GOLDEN = json.loads((Path(__file__).parent / "data" / "enumeration_golden.json").read_text())


def _ids(cases):
    return [str(G) for G, _ in cases]


@pytest.mark.parametrize("G,elems", GROUP_CASES, ids=_ids(GROUP_CASES))
def test_group_axioms(G, elems):
    @given(elems, elems, elems)
    def check(x, y, z):
        e = G.identity()
        assert G.contains(x) and G.contains(G.mul(x, y)) and G.contains(G.inv(x))
        assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
        assert G.mul(x, e) == x == G.mul(e, x)
        assert G.mul(x, G.inv(x)) == e
        assert G.mul(x, y) == G.mul(y, x)
        assert G.mul(x, G.div(x, y)) == y

    check()


@pytest.mark.parametrize("G,elems", GROUP_CASES, ids=_ids(GROUP_CASES))
def test_element_json_round_trip(G, elems):
    @given(elems)
    def check(x):
        blob = json.loads(json.dumps(G.element_to_json(x)))
        assert G.element_from_json(blob) == x

    check()
    assert group_from_json(G.to_json()) == G


@pytest.mark.parametrize("G,elems", GROUP_CASES, ids=_ids(GROUP_CASES))
def test_power_matches_repeated_product(G, elems):
    @given(elems, st.integers(-6, 6))
    def check(x, k):
        acc = G.identity()
        step = x if k >= 0 else G.inv(x)
        for _ in range(abs(k)):
            acc = G.mul(acc, step)
        assert G.power(x, k) == acc

    check()


def _golden(name, parse):
    return [parse(v) for v in GOLDEN[name]]


def _ds(G):
    return lambda support: G.make({int(i): r for i, r in support.items()})


@pytest.mark.parametrize("name,G,parse", [
    ("Z", Integers(), lambda s: int(Fraction(s))),
    ("Q", Rationals(), Fraction),
    ("Zinvp_2", DyadicRationals(2), Fraction),
    ("QmodZ", RationalsModZ(), Fraction),
    ("Pruefer_3", Pruefer(3), Fraction),
    ("FiniteCyclic_5", FiniteCyclic(5), int),
    ("DirectSum_2_3", DirectSumCyclic((2, 3)), _ds(DirectSumCyclic((2, 3)))),
    ("DirectSum_2_repeat", DirectSumCyclic((2,), repeat=True), _ds(DirectSumCyclic((2,), repeat=True))),
])
def test_enumeration_golden(name, G, parse):
    expected = _golden(name, parse)
    got = G.enumerate(len(expected))
    assert got == expected
    # enum_key sorts any window of the enumeration back into place
    assert sorted(reversed(got), key=G.enum_key) == got


def test_enumeration_examples():
    assert RationalsModZ().enumerate(4) == [0, Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)]
    assert Integers().enumerate(5) == [0, 1, -1, 2, -2]
    assert FiniteCyclic(2).enumerate(5) == [0, 1]
    assert DirectSumCyclic((2, 3)).order() == 6


def test_enumeration_is_injective_and_reaches_small_elements():
    got = Rationals().enumerate(3000)
    assert len(set(got)) == len(got)
    assert {Fraction(m, n) for n in range(1, 8) for m in range(-7, 8)} <= set(got)


def test_canonical_forms_enforced():
    with pytest.raises(GroupMismatch):
        RationalsModZ().check(Fraction(3, 2))
    with pytest.raises(GroupMismatch):
        DyadicRationals(2).check(Fraction(1, 3))
    with pytest.raises(GroupMismatch):
        Pruefer(3).check(Fraction(1, 2))
    with pytest.raises(GroupMismatch):
        FiniteCyclic(4).check(7)
    with pytest.raises(GroupMismatch):
        Integers().check(Fraction(1, 2))
    with pytest.raises(MalformedInput):
        FiniteCyclic(0)
    with pytest.raises(MalformedInput):
        Pruefer(6)
    with pytest.raises(MalformedInput):
        DirectSumCyclic((1, 1), repeat=True)


@given(rationals, rationals)
def test_projection_Q_to_QmodZ_is_homomorphism(x, y):
    phi = natural_projection("Q_to_QmodZ")
    assert phi(x + y) == RationalsModZ().mul(phi(x), phi(y))


@given(dyadics(3, 5), dyadics(3, 5))
def test_pruefer_projection_is_homomorphism(x, y):
    phi = pruefer_projection(3)
    assert phi(x + y) == Pruefer(3).mul(phi(x), phi(y))
    assert phi(x) - x == int(phi(x) - x)


def test_torsion_and_orders():
    assert element_order(RationalsModZ(), Fraction(5, 12)) == 12
    assert element_order(FiniteCyclic(12), 8) == 3
    G = DirectSumCyclic((4, 6))
    assert element_order(G, G.make({0: 2, 1: 4})) == 6
    assert element_order(Rationals(), Fraction(1, 2)) is None
    assert is_torsion_element(Pruefer(2), Fraction(3, 8))
    assert not is_torsion_element(Integers(), 3)
    assert is_torsion_element(Integers(), 0)
