"""Count the self-intersections of z^2 + 1/z and check them against brute force.

The curve passes through the origin three times, so the single image point 0
hosts three parameter pairs.
"""

import numpy as np

from selfx import LaurentPolynomial, compare, self_intersections, upper_bound

p = LaurentPolynomial.from_dict({2: 1, -1: 1})
report = self_intersections(p)
print(f"p = {p}")
print(f"count = {report.count}, bound = {upper_bound(p.n, p.m)}")
for s in report.intersections:
    print(f"  alpha = {s.alpha / np.pi:.4f} pi, beta = {s.beta / np.pi:.4f} pi, image = {s.image:.2e}")

eq = compare(p)
print(f"oracle agrees: {eq.counts_agree} (max pair distance {eq.max_pair_distance:.1e})")
