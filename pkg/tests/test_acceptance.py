"""Acceptance battery: one test per criterion (split by scale where the
criterion lists several), each at its stated size and time limit.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from coarsedim.covers import (
    ExceedsCap,
    chain_components,
    coset_cover,
    interval_cover_Q,
    net_point,
    subgroup_closure,
    ultrametric_cover,
    verify_cover,
)
from coarsedim.coarse import check_sandwich, distance_distortion
from coarsedim.dyadic_graph import build_graph, graph_distance, shortest_paths
from coarsedim.exact import LogLinearValue, norm_value_le, norm_value_sum, padic_valuation
from coarsedim.groups import DyadicRationals, Integers, Pruefer, RationalsModZ, pruefer_projection
from coarsedim.norms import (
    InducedNorm,
    NotProper,
    PNorm,
    QNorm,
    QuotientNorm,
    WordNorm,
    ball_enumerate,
    distance,
    dyadic_weights,
    induced_norm,
    p_norm,
    q_norm,
)
from coarsedim.samples import grid, padic_grid, random_rationals

SEED = 20240601


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def factorization_oracle(gens, budget):
    signed = [(s * g, w) for g, w in gens for s in (1, -1)]
    best = {}

    def walk(i, total, value):
        if total < best.get(value, math.inf):
            best[value] = total
        for j in range(i, len(signed)):
            g, w = signed[j]
            if total + w <= budget:
                walk(j, total + w, value + g)

    walk(0, 0, Fraction(0))
    return best


# 1 ---------------------------------------------------------------------------------

@pytest.mark.criterion("1 (coset cover of Q/Z, d=1)")
def test_c1_coset_cover_d1():
    _coset_witness(1)


@pytest.mark.criterion("1 (coset cover of Q/Z, d=2)")
def test_c1_coset_cover_d2():
    cover = _coset_witness(2)
    assert cover.params["subgroup_order"] == 60


@pytest.mark.criterion("1 (coset cover of Q/Z, d=3)")
def test_c1_coset_cover_d3():
    _coset_witness(3)


def _coset_witness(d):
    with Timer() as t:
        cover = coset_cover(RationalsModZ(), QuotientNorm(), d, 10**5)
        sample = grid(60, (0, 1), open=(False, True))
        report = verify_cover(cover, sample)
    assert report.coverage_ok and not report.uncovered
    assert report.disjointness_violations == []
    assert report.bound_ok
    assert all(norm_value_le(v, cover.claimed_bound) for v in report.max_sample_diameter_per_set.values())
    assert t.seconds < 10
    return cover


# 2 ---------------------------------------------------------------------------------

@pytest.mark.criterion("2 (two-family cover of Q, d=1)")
def test_c2_interval_cover_d1():
    _interval_witness(1)


@pytest.mark.criterion("2 (two-family cover of Q, d=2)")
def test_c2_interval_cover_d2():
    _interval_witness(2)


def _interval_witness(d):
    with Timer() as t:
        cover = interval_cover_Q(d)
        sample = grid(40, (-10, 10))
        report = verify_cover(cover, sample)
    assert report.sample_size > 9000
    assert cover.n_families == 2
    assert {key.split(":")[0] for key in report.max_sample_diameter_per_set} == {"0", "1"}
    assert report.coverage_ok and report.disjointness_violations == [] and report.bound_ok
    R, N = cover.params["R"], int(cover.params["N"])
    assert cover.claimed_bound == LogLinearValue(R, N)
    assert t.seconds < 60


# 3 ---------------------------------------------------------------------------------

@pytest.mark.criterion("3 (chain components of Z in [0, 1000], d=2)")
def test_c3_chain_lower_bound():
    with Timer() as t:
        comps = chain_components(list(range(1001)), QNorm(Integers()), 2)
    assert len(comps.components) == 1
    assert comps.diameters[0] == LogLinearValue(1000, 1)
    assert t.seconds < 5


# 4 ---------------------------------------------------------------------------------

@pytest.mark.criterion("4 (1-net L for the p-adic norm, p = 2, 3, 5)")
def test_c4_net_points():
    with Timer() as t:
        for p in (2, 3, 5):
            for r in random_rationals(1000, 10**6, 10**6, seed=SEED + p):
                x = net_point(r, p)
                assert 0 <= x < 1
                n = x.denominator
                while n % p == 0:
                    n //= p
                assert n == 1
                assert p_norm(r - x, p) <= 1
    assert t.seconds < 5


# 5 ---------------------------------------------------------------------------------

@pytest.mark.criterion("5 (sandwich inequalities and distance distortion)")
def test_c5_sandwiches():
    with Timer() as t:
        unit = grid(500, (-1, 1), open=(True, True))
        assert check_sandwich("qnorm_ln", unit) == []
        assert check_sandwich("quotient_thirds", unit) == []
        for p in (2, 3, 5):
            sample = padic_grid(p, 10, (-1, 1), open=(True, True), exclude_zero=True)
            assert check_sandwich("padic_ln", sample, p) == []
        assert distance_distortion(padic_grid(2, 10, (0, 1), open=(False, True)), 2) == []
    assert t.seconds < 60


# 6 ---------------------------------------------------------------------------------

@pytest.mark.criterion("6 (ultrametric cover, p = 2, d = 1, 2, 8)")
def test_c6_ultrametric_cover():
    sample = random_rationals(500, 10**4, 10**4, seed=SEED)
    for d in (1, 2, 8):
        cover = ultrametric_cover(2, d)
        report = verify_cover(cover, sample)
        assert report.ok
        k = cover.params["k"]
        labels = [cover.classify(x) for x in sample]
        for i, j in itertools.combinations(range(len(sample)), 2):
            x, y = sample[i], sample[j]
            same = x == y or padic_valuation(x - y, 2) >= -k
            assert (labels[i] == labels[j]) == same


# 7 ---------------------------------------------------------------------------------

@pytest.mark.criterion("7 (induced norm vs exhaustive factorization; word norm on Z)")
def test_c7_induced_norm_oracle():
    budget = 9
    w = dyadic_weights(2, 2)
    oracle = factorization_oracle([(Fraction(1, 2**k), 2**k) for k in range(4)], budget)
    assert len(oracle) > 50
    for x, v in oracle.items():
        assert induced_norm(w, x, budget) == v
    word = WordNorm(Integers(), [1])
    for n in range(-50, 51):
        assert word(n) == abs(n)


# 8 ---------------------------------------------------------------------------------

@pytest.mark.criterion("8 (dyadic metric graph, W=4, D=7)")
def test_c8_dyadic_graph():
    with Timer() as t:
        G = build_graph(4, 7)
        for k in range(1, 7):
            assert graph_distance(G, 0, Fraction(1, 2**k)) == 2**k
        rng = random.Random(SEED)
        cache = {}
        for _ in range(200):
            x = Fraction(rng.randint(-3 * 128, 2 * 128), 128)
            y = Fraction(rng.randint(-3 * 128, 2 * 128), 128)
            for a in (x, x + 1):
                if a not in cache:
                    cache[a] = shortest_paths(G, a)
            assert cache[x][y] == cache[x + 1][y + 1]
    assert t.seconds < 10


# 9 ---------------------------------------------------------------------------------

def _triples(draw, n=1000):
    rng = random.Random(SEED)
    return [tuple(draw(rng) for _ in range(3)) for _ in range(n)]


def _rational(rng):
    return Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 10**4))


def _circle(rng):
    n = rng.randint(1, 200)
    return Fraction(rng.randint(0, n - 1), n)


def _dyadic(rng):
    return Fraction(rng.randint(-64, 64), 2 ** rng.randint(0, 4))


@pytest.mark.criterion("9 (norm axioms, Q-ball enumeration, p-adic not proper)")
def test_c9_norm_axioms():
    cases = [
        (QNorm(), _rational),
        (QuotientNorm(), _circle),
        (PNorm(2), _rational),
        (PNorm(3), _rational),
        (PNorm(5), _rational),
        (InducedNorm(dyadic_weights(2, 2)), _dyadic),
        (InducedNorm(dyadic_weights(2, 3)), _dyadic),
    ]
    for norm, draw in cases:
        G = norm.group
        assert norm_value_le(norm(G.identity()), 0)
        for x, y, z in _triples(draw):
            if x != G.identity():
                assert not norm_value_le(norm(x), 0)
            assert distance(norm, x, y) == distance(norm, y, x)
            assert norm_value_le(distance(norm, x, z),
                                 norm_value_sum(distance(norm, x, y), distance(norm, y, z)))
    for R in (1, 2, 3, 4, 5):
        # |q| <= ||q||_Q and ln(den) <= ||q||_Q bound the search window
        dmax = math.floor(math.exp(R))
        brute = {Fraction(m, n) for n in range(1, dmax + 1) for m in range(-R * n, R * n + 1)
                 if math.gcd(m, n) == 1 and norm_value_le(q_norm(Fraction(m, n)), R)}
        assert ball_enumerate(QNorm(), R) == brute
    with pytest.raises(NotProper):
        ball_enumerate(PNorm(2), 1)


# 10 --------------------------------------------------------------------------------

@pytest.mark.criterion("10 (finite sets of Z[1/2] close up in the Pruefer 2-group)")
def test_c10_torsion_image():
    rng = random.Random(SEED)
    phi = pruefer_projection(2)
    capped = 0
    for _ in range(50):
        T = [Fraction(rng.randint(-40, 40), 2 ** rng.randint(0, 6)) for _ in range(rng.randint(1, 4))]
        image = subgroup_closure(Pruefer(2), [phi(t) for t in T], 10**5)
        assert not isinstance(image, ExceedsCap)
        assert len(image) == max(t.denominator for t in map(phi, T))
        source = subgroup_closure(DyadicRationals(2), T, 10**4)
        capped += isinstance(source, ExceedsCap)
    assert capped > 0
