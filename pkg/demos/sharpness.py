"""The extremal families z^n + eps z and z^n + eps z^m attain the count bound."""

from math import gcd

from selfx import LaurentPolynomial, extremal, self_intersections, upper_bound

print("n   m   count  bound")
for n in range(2, 7):
    p = LaurentPolynomial.from_dict({n: 1, 1: 0.05})
    print(f"{n:<3d} {1:<3d} {self_intersections(p).count:<6d} {upper_bound(n, 1)}")
for n in range(2, 6):
    for m in range(-n + 1, 0):
        if gcd(n, -m) != 1:
            continue
        count = self_intersections(extremal(n, m, 1e-3)).count
        print(f"{n:<3d} {m:<3d} {count:<6d} {upper_bound(n, m)}")
