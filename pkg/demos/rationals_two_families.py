"""Two families suffice for Q, one does not.

Upper side: the interval/coset cover with R = floor(d) + 1 and N = lcm(1..M).
Lower side: the integers 0..1000 form a single chain at scale 2, so any
2-disjoint family covering them has a set of diameter >= 1000.
"""

from coarsedim import Integers, QNorm, chain_components, interval_cover_Q, verify_cover
from coarsedim.samples import grid

sample = grid(40, (-10, 10))
for d in (1, 2):
    cover = interval_cover_Q(d)
    rep = verify_cover(cover, sample)
    print(f"d={d}: params {cover.params}, bound {cover.claimed_bound}, "
          f"{rep.sample_size} points, violations {len(rep.disjointness_violations)}, ok {rep.ok}")

chain = chain_components(list(range(1001)), QNorm(Integers()), 2)
print("components:", len(chain.components), " diameter:", chain.diameters[0])
