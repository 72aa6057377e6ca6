"""
Trace multigraphs
=================

Fix a core set A. A triple meeting A in two vertices leaves a loop on its
third vertex; a triple meeting A in one vertex leaves an edge between the
other two. Each loop or edge remembers which core vertices produced it.
"""

from bergek4 import K4, balanced_3partite
from bergek4.detect import find_berge_triangle_anchored, random_berge_free
from bergek4.trace import (
    bound_report,
    check_multiplicity_props,
    check_no_sdr,
    components,
    trace,
    z_partition,
)
import random

H = random_berge_free(8, K4, random.Random(7))
anchor = find_berge_triangle_anchored(H)
print("anchored triangle", anchor)

T = trace(H, anchor.labels)
print(len(T.loops), "loops,", len(T.links), "links")
for c in components(T):
    print("  component", sorted(c.vertices), "surplus", c.surplus, "bad" if c.bad else "")

# vertices outside the triangle, grouped by which core labels they see
for key, cell in sorted(z_partition(T, anchor.x, anchor.y).items(), key=lambda kv: sorted(kv[0])):
    if cell:
        print("  Z", sorted(key), sorted(cell))

# in a Berge-K4-free host these lists are always empty
print(check_no_sdr(H, T, anchor), check_multiplicity_props(H, T, anchor))

# the edge-count bounds assume H is a smallest system beating f(n), so a
# random sparse system is expected to miss them
rep = bound_report(H, anchor)
print("m p q =", rep.m, rep.p, rep.q, " alpha =", rep.alpha, " M =", rep.M)
print({k: v for k, v in rep.checks.items()})

# the construction itself has no bad components at all
B = balanced_3partite(9)
print(bound_report(B, find_berge_triangle_anchored(B)).alpha)
