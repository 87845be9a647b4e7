"""Q/Z has a one-family cover at every scale the cap allows.

The cosets of H = <{x : ||x|| < d}> are d-disjoint and bounded.  As d grows
the subgroup H grows like lcm(1..e^d), and past d ~ 2.9 it outruns any
desk-sized cap.
"""

from coarsedim import QuotientNorm, RationalsModZ, coset_cover, verify_cover
from coarsedim.covers import NotLocallyFinite
from coarsedim.samples import grid

G = RationalsModZ()
sample = grid(60, (0, 1), open=(False, True))
print("sample size:", len(sample))

for d in (1, 2, 3):
    try:
        cover = coset_cover(G, QuotientNorm(), d, cap=10**5)
    except NotLocallyFinite as exc:
        print(f"d={d}: {exc}")
        continue
    report = verify_cover(cover, sample)
    print(f"d={d}: |H| = {cover.params['subgroup_order']}, bound {cover.claimed_bound}, "
          f"{len(report.max_sample_diameter_per_set)} cosets met, ok = {report.ok}")

# the image of a finite set of Z[1/2] in the Pruefer group closes up
from fractions import Fraction

from coarsedim import DyadicRationals, Pruefer, pruefer_projection, subgroup_closure

T = [Fraction(3, 8), Fraction(5, 2), Fraction(-7, 32)]
phi = pruefer_projection(2)
print("<T> in Z[1/2]      :", subgroup_closure(DyadicRationals(2), T, 10**4))
print("|<phi T>| in Z_2^oo:", len(subgroup_closure(Pruefer(2), [phi(t) for t in T], 10**4)))
