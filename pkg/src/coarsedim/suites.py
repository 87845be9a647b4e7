"""Check batteries bundled per result, as run by ``coarsedim suite NAME``.

Each check returns a plain dict with ``name``, ``ok``, ``seconds`` and a
JSON-ready ``details`` payload.  Domain errors inside a check are caught and
reported as a failed check with the error attached.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction

from .covers import (
    ExceedsCap,
    chain_components,
    coset_cover,
    interval_cover_Q,
    net_point,
    subgroup_closure,
    ultrametric_cover,
    verify_cover,
)
from .coarse import (
    ball_inclusion,
    bornologous_profile,
    check_sandwich,
    distance_distortion,
    section_map,
)
from .dyadic_graph import build_graph, compare_metrics, graph_distance, shortest_paths
from .exact import (
    DomainError,
    LogLinearValue,
    format_rational,
    int_valuation,
    norm_value_le,
    norm_value_to_json,
    padic_valuation,
)
from .groups import DyadicRationals, Integers, Pruefer, RationalsModZ, pruefer_projection
from .norms import (
    InducedNorm,
    QNorm,
    QuotientNorm,
    WordNorm,
    dyadic_weights,
    induced_norm,
    p_norm,
)
from .samples import grid, integer_range, padic_grid, random_rationals

SUITES = ("thm2", "thm3", "thm4", "thm5", "prop1", "graph")


def _run(name: str, fn, *args) -> dict:
    t0 = time.perf_counter()
    try:
        ok, details = fn(*args)
    except DomainError as exc:
        ok, details = False, {"error": type(exc).__name__, "message": str(exc)}
    return {"name": name, "ok": bool(ok), "seconds": round(time.perf_counter() - t0, 3), "details": details}


# -- Q/Z coset covers ---------------------------------------------------------

def coset_witness(d, den_max: int = 60, cap: int = 10**5):
    cover = coset_cover(RationalsModZ(), QuotientNorm(), d, cap)
    report = verify_cover(cover, grid(den_max, (0, 1), open=(False, True)))
    details = {
        "subgroup_order": cover.params["subgroup_order"],
        "claimed_bound": norm_value_to_json(cover.claimed_bound),
        "sample_size": report.sample_size,
        "n_sets": len(report.max_sample_diameter_per_set),
        "disjointness_violations": len(report.disjointness_violations),
        "coverage_ok": report.coverage_ok,
        "bound_ok": report.bound_ok,
    }
    return report.ok, details


def torsion_image_closure(seed: int, sets: int = 50, cap: int = 10**5):
    """Finite sets T of Z[1/2]: <T> is infinite (hits the cap) once T has a
    nonzero element, while the image of T in the Prüfer 2-group closes up."""
    rng = random.Random(seed)
    src, tgt = DyadicRationals(2), Pruefer(2)
    phi = pruefer_projection(2)
    rows, ok = [], True
    for _ in range(sets):
        T = [Fraction(rng.randint(-40, 40), 2 ** rng.randint(0, 6)) for _ in range(rng.randint(1, 4))]
        image = subgroup_closure(tgt, [phi(t) for t in T], cap)
        source = subgroup_closure(src, T, 10**4)
        finite = not isinstance(image, ExceedsCap)
        ok &= finite
        rows.append({
            "T": [format_rational(t) for t in T],
            "image_order": len(image) if finite else None,
            "source_exceeds_cap": isinstance(source, ExceedsCap),
        })
    capped = sum(r["source_exceeds_cap"] for r in rows)
    return ok and capped > 0, {"sets": rows, "source_sets_exceeding_cap": capped}


# -- Q: two-family cover and chain lower bound -------------------------------

def interval_witness(d, den_max: int = 40, window: int = 10):
    cover = interval_cover_Q(d)
    report = verify_cover(cover, grid(den_max, (-window, window)))
    details = {
        "params": cover.params,
        "n_families": cover.n_families,
        "claimed_bound": norm_value_to_json(cover.claimed_bound),
        "sample_size": report.sample_size,
        "disjointness_violations": len(report.disjointness_violations),
        "coverage_ok": report.coverage_ok,
        "bound_ok": report.bound_ok,
    }
    return report.ok and cover.n_families == 2, details


def chain_witness(d=2, top: int = 1000):
    comps = chain_components(list(range(top + 1)), QNorm(Integers()), d)
    diam = comps.diameters[0]
    ok = len(comps.components) == 1 and norm_value_le(diam, top) and norm_value_le(top, diam)
    return ok, {"n_components": len(comps.components), "diameter": norm_value_to_json(diam)}


def sandwich_battery(den_max: int = 500, max_exp: int = 10, primes=(2, 3, 5), rational: bool = True):
    found = {}
    if rational:
        unit = grid(den_max, (-1, 1), open=(True, True))
        found["qnorm_ln"] = check_sandwich("qnorm_ln", unit)
        found["quotient_thirds"] = check_sandwich("quotient_thirds", unit)
    for p in primes:
        found[f"padic_ln_p{p}"] = check_sandwich(
            "padic_ln", padic_grid(p, max_exp, (-1, 1), open=(True, True), exclude_zero=True), p)
    ok = not any(found.values())
    return ok, {k: v[:20] for k, v in found.items()} | {"violations": sum(map(len, found.values()))}


def distortion_battery(p: int = 2, max_exp: int = 10):
    bad = distance_distortion(padic_grid(p, max_exp, (0, 1), open=(False, True)), p)
    return not bad, {"violations": len(bad), "first": bad[:20]}


# -- p-adic: nets and ultrametric covers -------------------------------------

def net_battery(seed: int, primes=(2, 3, 5), count: int = 1000, size: int = 10**6):
    failures = []
    for p in primes:
        for r in random_rationals(count, size, size, seed):
            x = net_point(r, p)
            in_net = 0 <= x < 1 and x.denominator == p ** int_valuation(x.denominator, p)
            if not (in_net and norm_value_le(p_norm(r - x, p), 1)):
                failures.append({"p": p, "r": format_rational(r), "x": format_rational(x)})
    return not failures, {"checked": count * len(primes), "failures": failures[:20]}


def ultrametric_battery(seed: int, p: int = 2, scales=(1, 2, 8), count: int = 500):
    sample = random_rationals(count, 10**4, 10**4, seed)
    rows, ok = [], True
    for d in scales:
        cover = ultrametric_cover(p, d)
        report = verify_cover(cover, sample)
        k = cover.params["k"]
        labels = [cover.classify(x)[1] for x in sample]
        mismatches = 0
        for i, j in itertools.combinations(range(len(sample)), 2):
            same_ball = padic_valuation(sample[i] - sample[j], p) >= -k
            mismatches += same_ball != (labels[i] == labels[j])
        row_ok = report.ok and mismatches == 0
        ok &= row_ok
        rows.append({"d": d, "k": k, "ok": row_ok, "disjointness_violations": len(report.disjointness_violations),
                     "label_mismatches": mismatches, "n_sets": len(report.max_sample_diameter_per_set)})
    return ok, {"rows": rows}


# -- norms and coarse equivalence --------------------------------------------

def _factorization_norms(gens: list, budget):
    """Exhaustive oracle: cheapest multiset of signed generators per reachable element."""
    best: dict = {}
    signed = [(s * g, w) for g, w in gens for s in (1, -1)]

    def walk(start, total, value):
        if value not in best or total < best[value]:
            best[value] = total
        for i in range(start, len(signed)):
            g, w = signed[i]
            if total + w <= budget:
                walk(i, total + w, value + g)

    walk(0, Fraction(0), Fraction(0))
    return best


def induced_oracle_battery(budget: int = 9, z_range: int = 50):
    w = dyadic_weights(2, 2)
    gens = w.generators_up_to(budget)
    oracle = _factorization_norms([(g, wt) for g, wt in gens if g > 0], budget)
    mismatches = [format_rational(x) for x, v in oracle.items() if induced_norm(w, x, budget) != v]
    word = WordNorm(Integers(), [1])
    z_bad = [n for n in range(-z_range, z_range + 1) if word(n) != abs(n)]
    ok = not mismatches and not z_bad
    return ok, {"reachable": len(oracle), "mismatches": mismatches[:20], "integer_mismatches": z_bad}


def ball_inclusion_battery(radii=(1, 2, 4, 8, 16)):
    a = InducedNorm(dyadic_weights(2, 2))
    b = InducedNorm(dyadic_weights(2, 3))
    rows = ball_inclusion(a, b, radii) + ball_inclusion(b, a, radii)
    out = [{"R": format_rational(r["R"]), "S": norm_value_to_json(r["S"]), "ball_size": r["ball_size"],
            "image_ball_size": r["image_ball_size"], "inclusion_ok": r["inclusion_ok"]} for r in rows]
    return all(r["inclusion_ok"] for r in rows), {"rows": out}


def section_profile_battery(den_max: int = 30):
    prof = bornologous_profile(section_map(), grid(den_max, (0, 1), open=(False, True)), [1, 2, 3, 4])
    return prof.is_monotone(), prof.to_json()


# -- dyadic graph -------------------------------------------------------------

def graph_battery(seed: int, W: int = 4, D: int = 7, pairs: int = 200):
    G = build_graph(W, D)
    levels = {k: graph_distance(G, 0, Fraction(1, 2**k)) for k in range(1, D)}
    levels_ok = all(v == 2**k for k, v in levels.items())
    rng = random.Random(seed)
    step = 2**D
    lo, hi = (-W + 1) * step, (W - 2) * step
    bad = []
    cache: dict = {}

    def dist(x, y):
        if x not in cache:
            cache[x] = shortest_paths(G, x)
        return cache[x][y]

    for _ in range(pairs):
        x = Fraction(rng.randint(lo, hi), step)
        y = Fraction(rng.randint(lo, hi), step)
        if dist(x, y) != dist(x + 1, y + 1):
            bad.append([format_rational(x), format_rational(y)])
    ok = levels_ok and not bad
    return ok, {"vertices": len(G.adjacency), "level_distances": {str(k): v for k, v in levels.items()},
                "translation_failures": bad}


def graph_comparison(W: int = 2, D: int = 4):
    report = compare_metrics(build_graph(W, D))
    return True, report.to_json()


# -- suites --------------------------------------------------------------------

def run_suite(name: str, seed: int = 0) -> dict:
    if name == "thm2":
        checks = [_run(f"coset_cover_d{d}", coset_witness, d) for d in (1, 2, 3)]
        checks.append(_run("torsion_image_closure", torsion_image_closure, seed))
    elif name == "thm3":
        checks = [_run("torsion_image_closure", torsion_image_closure, seed)]
    elif name == "thm4":
        checks = [_run(f"interval_cover_d{d}", interval_witness, d) for d in (1, 2)]
        checks += [_run("chain_components_Z", chain_witness),
                   _run("sandwiches", sandwich_battery),
                   _run("distortion", distortion_battery)]
    elif name == "thm5":
        checks = [_run("net_points", net_battery, seed),
                  _run("ultrametric_covers", ultrametric_battery, seed),
                  _run("padic_sandwiches", sandwich_battery, 500, 10, (2, 3, 5), False),
                  _run("distortion", distortion_battery)]
    elif name == "prop1":
        checks = [_run("induced_norm_oracle", induced_oracle_battery),
                  _run("ball_inclusion", ball_inclusion_battery),
                  _run("section_profile", section_profile_battery)]
    elif name == "graph":
        checks = [_run("graph_distances", graph_battery, seed),
                  _run("graph_vs_induced_norm", graph_comparison)]
    else:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
    failed = [c for c in checks if not c["ok"]]
    return {"suite": name, "ok": not failed, "checks": checks, "failed": [c["name"] for c in failed]}
