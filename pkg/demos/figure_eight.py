"""Approximate the figure-eight cos t + i sin 2t by a positively oriented Jordan curve.

Writes figure_eight.svg (the target with its crossing marked) and
figure_eight_embedded.svg (the certified embedding) to the working directory.
"""

import numpy as np

from selfx import EmbeddingRequest, embed
from selfx.geometry import crossing_segments, intersection_point
from selfx.render import distinct_points, render_svg

theta = 2 * np.pi * np.arange(1024) / 1024
target = np.cos(theta) + 1j * np.sin(2 * theta)

result = embed(EmbeddingRequest(theta, target, p_exponent=2.0, epsilon=0.05, seed=0))
d = result.diagnostics
print(f"simple: {result.simple}")
print(f"signed area: {result.signed_area:.4f}")
print(f"L2 distance: {result.lp_distance:.4f} (budget 0.05)")
print(f"crossings removed: {d['crossings']}, connectors: {d['connectors']}")

n = target.size
hits = crossing_segments([target], closed=True)
marks = distinct_points([intersection_point(target[i], target[(i + 1) % n], target[j], target[(j + 1) % n])
                         for (_, i), (_, j) in hits], 1e-9)
with open("figure_eight.svg", "w", encoding="utf-8") as fh:
    fh.write(render_svg(target, marks, title="target"))
with open("figure_eight_embedded.svg", "w", encoding="utf-8") as fh:
    fh.write(render_svg(result.curve.points, title="embedding"))
print("wrote figure_eight.svg and figure_eight_embedded.svg")
