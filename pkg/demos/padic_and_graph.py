"""The p-adic side and the dyadic triangle graph."""

from fractions import Fraction

from coarsedim import build_graph, check_sandwich, compare_metrics, graph_distance, net_point, ultrametric_cover
from coarsedim.coarse import distance_distortion
from coarsedim.samples import padic_grid, random_rationals

# every rational is within p-adic distance 1 of some m/p^a in [0, 1)
for r in [Fraction(1, 6), Fraction(7), Fraction(-5, 12), Fraction(11, 40)]:
    print(f"net_point({r}, 2) = {net_point(r, 2)}")

# balls of radius p^k partition Q
cover = ultrametric_cover(2, 3)
print("k =", cover.params["k"], [cover.classify(x)[1] for x in random_rationals(8, 50, 50, seed=1)])

# ln ||x||_p <= ||x||_Q <= 3 ln ||x||_p on L ∩ (-1, 1)
L = padic_grid(3, 8, (-1, 1), open=(True, True), exclude_zero=True)
print(len(L), "points, violations:", len(check_sandwich("padic_ln", L, 3)))
print("pairwise distortion violations:", len(distance_distortion(padic_grid(2, 8, (0, 1), open=(False, True)), 2)))

G = build_graph(4, 7)
print("vertices:", len(G.adjacency))
print("d(0, 2^-k):", [graph_distance(G, 0, Fraction(1, 2**k)) for k in range(1, 7)])
print(compare_metrics(build_graph(2, 4)).to_json())
