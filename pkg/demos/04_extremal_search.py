"""
Exact extremal numbers
======================

Exhaustive include/skip search over triples with a counting bound and
isomorph rejection. The balanced construction seeds the lower bound, so for
Berge-K4 the search mostly has to prove that nothing beats it.
"""

from bergek4 import K3, K4
from bergek4.search import (
    BergeMinusExpansion,
    BergePattern,
    SearchConfig,
    certify_extremal,
    graph_max_edges,
    max_edges,
)

for n in range(3, 8):
    res = max_edges(n, BergePattern(K4))
    print(f"Berge-K4  n={n}: {res.value:2d}  nodes={res.stats.nodes:6d}  {res.stats.wall_time:.2f}s")

for n in range(3, 8):
    print(f"Berge-K3  n={n}: {max_edges(n, BergePattern(K3)).value}")

print("without expansions, n=6:", max_edges(6, BergeMinusExpansion(K4)).value)
print("graphs without K4:", [graph_max_edges(m, 4).value for m in range(4, 9)])

# a witness is a canonical extremal system
res = max_edges(6, BergePattern(K4))
print(sorted(res.witness.edges))

# claims can be confirmed or refuted; a tiny node budget leaves the answer open
print(certify_extremal(6, BergePattern(K4), 8).message)
print(certify_extremal(6, BergePattern(K4), 7).message)
print(certify_extremal(7, BergePattern(K4), 12, SearchConfig(node_budget=100)).message)
