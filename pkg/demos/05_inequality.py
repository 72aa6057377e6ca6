"""
The counting inequality
=======================

The final step compares a lower bound on the number of triples against
f(n). The gap toomany(n, alpha) is a concave quadratic in alpha, so it is
enough to check alpha = 0 and alpha = 1. Arithmetic is exact.
"""

from fractions import Fraction

from bergek4.trace import check_toomany, toomany

for n in (6, 7, 8, 9, 30, 300):
    print(n, toomany(n, 0), toomany(n, 1), toomany(n, Fraction(1, 2)))

print("non-negative on [6, 300]:", check_toomany(300))
