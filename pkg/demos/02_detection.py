"""
Finding a Berge-K4
==================

A Berge copy of K4 is four core vertices plus six distinct triples, one
containing each pair of the core. Detection picks a core and then solves a
bipartite matching from the six pairs to the host triples.
"""

from bergek4 import K4, TripleSystem
from bergek4.detect import DetectMode, find_berge, is_expansion, verify_embedding

H = TripleSystem.from_triples(7, [(0, 1, 2), (0, 1, 3), (0, 2, 4), (0, 3, 5), (1, 3, 6), (2, 3, 6)])
emb = find_berge(H, K4)
print("core", emb.core)
for pair, triple in sorted(emb.assignment):
    print("  ", pair, "->", triple)
print("checks out:", verify_embedding(H, K4, emb), "expansion:", is_expansion(emb))

# the same search can be restricted to copies that are not expansions
print(find_berge(H, K4, DetectMode.NON_EXPANSION))

# a random maximal Berge-K4-free system, grown one triple at a time
import random
from bergek4.detect import random_berge_free

G = random_berge_free(7, K4, random.Random(1))
print(len(G), "triples, free:", find_berge(G, K4) is None)
