"""
The extremal construction
=========================

Split n vertices into three near-equal parts and take every triple that
meets all three. The result has f(n) = floor(n/3) floor((n+1)/3) floor((n+2)/3)
triples and contains no Berge-K4.
"""

from bergek4 import K4, balanced_3partite, f, is_berge_free, serialize

H = balanced_3partite(6)
print(serialize(H))

# every triple is a transversal, so no pair inside a part is ever covered
for n in range(3, 13):
    H = balanced_3partite(n)
    print(n, len(H), f(n), is_berge_free(H, K4))

# the growth f(n) - f(n-1), computed straight from f
from bergek4.core import diff, discrepancy_report

print([diff(n) for n in range(2, 14)])
print("table rows that disagree with the direct difference:", discrepancy_report(12))
