"""Any unit-norm spectrum on [-8, 8] is within 0.05 (in l^2) of a positive Jordan curve."""

import sys

import numpy as np

from selfx.embedder import match_fourier

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
rng = np.random.default_rng(seed)
c = rng.normal(size=17) + 1j * rng.normal(size=17)
c /= np.linalg.norm(c)
k = np.arange(-8, 9)
print(f"target: pi * sum k |c_k|^2 = {np.pi * np.sum(k * np.abs(c) ** 2):+.3f}")

result = match_fourier(c, (-8, 8), 0.05, seed=seed)
print(f"coefficient distance: {result.diagnostics['coefficient_distance']:.4f}")
print(f"embedding: simple = {result.simple}, area = {result.signed_area:.3f}, points = {len(result.curve)}")
