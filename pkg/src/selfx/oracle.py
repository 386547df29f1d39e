"""Brute-force self-intersection finder used to cross-check the resultant pipeline.

The curve is sampled on a uniform grid; pairs of samples whose images are
close become seeds for Newton's method on ``p(e^{ia}) = p(e^{ib})``.  Nothing
here shares code with the algebraic pipeline except the polynomial evaluator.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial import cKDTree

from .errors import RangeError, SaturationWarning
from .intersector import (
    DEFAULT_TOLERANCES,
    SelfIntersection,
    cluster_pairs,
    self_intersections,
    upper_bound,
)
from .laurent import normalize

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class OracleConfig:
    """Settings of the brute-force search.

    Parameters
    ----------
    grid_size : int
        Number of uniform samples on the circle (at least 64).
    capture_radius : float or None
        Image-space radius for pairing samples.  ``None`` means
        ``3 * max|dp/dtheta| * 2 pi / grid_size``.
    min_separation : float or None
        Smallest accepted parameter distance between the two points of a pair.
        ``None`` means four grid steps.
    newton_iters : int
    residual : float
        Relative acceptance level for ``|p(e^{ia}) - p(e^{ib})|``.
    cluster : float
        Pairs closer than this on the torus are merged.
    """

    grid_size: int = 4096
    capture_radius: float = None
    min_separation: float = None
    newton_iters: int = 60
    residual: float = 1e-10
    cluster: float = 1e-7

    def __post_init__(self):
        if self.grid_size < 64:
            raise ValueError("grid_size must be at least 64")
        if self.min_separation is not None and self.min_separation <= TWO_PI / self.grid_size:
            raise ValueError("min_separation must exceed one grid step")


def _circular_gap(a, b):
    d = np.abs(np.mod(a - b, TWO_PI))
    return np.minimum(d, TWO_PI - d)


def _local_minima(points, I, J, N):
    """Keep candidate index pairs whose image distance is minimal among grid neighbours."""
    d0 = np.abs(points[I] - points[J])
    keep = np.ones(I.size, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            d = np.abs(points[(I + di) % N] - points[(J + dj) % N])
            keep &= d0 <= d
    return keep


def _segment_crossings(points, I, J, N, slack=0.05):
    """Sub-cell seeds where grid chords ``[P_i, P_i+1]`` and ``[P_j, P_j+1]`` cross.

    Returns fractional offsets ``(s, u)`` in grid steps and a mask of crossing pairs.
    """
    a0, a1 = points[I], points[(I + 1) % N]
    b0, b1 = points[J], points[(J + 1) % N]
    da, db, w = a1 - a0, b1 - b0, b0 - a0
    cross = (np.conj(da) * db).imag
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (np.conj(w) * db).imag / cross
        u = (np.conj(w) * da).imag / cross
    hit = np.isfinite(s) & np.isfinite(u) & (s > -slack) & (s < 1 + slack) & (u > -slack) & (u < 1 + slack)
    return s, u, hit


def _newton_pairs(p, dp, a, b, iters):
    """Newton on ``F(a, b) = p(e^{ia}) - p(e^{ib})`` viewed as two real equations."""
    for _ in range(iters):
        ea, eb = np.exp(1j * a), np.exp(1j * b)
        F = p(ea) - p(eb)
        ja = 1j * ea * dp(ea)
        jb = -1j * eb * dp(eb)
        det = ja.real * jb.imag - jb.real * ja.imag
        with np.errstate(divide="ignore", invalid="ignore"):
            da = (jb.imag * F.real - jb.real * F.imag) / det
            db = (-ja.imag * F.real + ja.real * F.imag) / det
        ok = np.isfinite(da) & np.isfinite(db)
        da = np.where(ok, np.clip(da, -0.2, 0.2), 0)
        db = np.where(ok, np.clip(db, -0.2, 0.2), 0)
        a, b = a - da, b - db
        if np.all(np.abs(da) + np.abs(db) < 1e-15):
            break
    return np.mod(a, TWO_PI), np.mod(b, TWO_PI)


def _bound_for(p):
    q, _ = normalize(p)
    try:
        return upper_bound(q.n, q.m)
    except RangeError:
        return 0


def oracle_self_intersections(p, cfg=OracleConfig()):
    """Self-intersections of ``p`` on the circle by sampling and Newton refinement.

    Returns
    -------
    list of SelfIntersection
        Sorted by ``(alpha, beta)``.

    Raises
    ------
    SaturationWarning
        If more than four times the theoretical bound of pairs are accepted,
        which signals a continuum of self-intersections.
    """
    N = cfg.grid_size
    step = TWO_PI / N
    theta = step * np.arange(N)
    on_grid = p.on_circle(theta)
    dp = p.derivative()
    speed = np.abs(dp(np.exp(1j * theta)))
    radius = cfg.capture_radius
    if radius is None:
        radius = 3 * float(np.max(speed)) * step
    min_sep = cfg.min_separation if cfg.min_separation is not None else 4 * step
    scale = 1 + float(np.max(np.abs(on_grid)))
    bound = _bound_for(p)

    if radius <= 0:
        return []
    tree = cKDTree(np.column_stack([on_grid.real, on_grid.imag]))
    links = tree.query_pairs(radius, output_type="ndarray")
    if links.size == 0:
        return []
    I, J = links[:, 0], links[:, 1]
    far = _circular_gap(theta[I], theta[J]) >= min_sep
    I, J = I[far], J[far]
    # seeds: chord crossings (resolve close transversal crossings) and local
    # minima of the image distance (catch tangential touches)
    s, u, hit = _segment_crossings(on_grid, I, J, N)
    minima = _local_minima(on_grid, I, J, N) & ~hit
    seeds_a = np.concatenate([theta[I[hit]] + s[hit] * step, theta[I[minima]]])
    seeds_b = np.concatenate([theta[J[hit]] + u[hit] * step, theta[J[minima]]])
    if seeds_a.size == 0:
        return []

    a, b = _newton_pairs(p, dp, seeds_a, seeds_b, cfg.newton_iters)
    res = np.abs(p.on_circle(a) - p.on_circle(b))
    good = (res < cfg.residual * scale) & (_circular_gap(a, b) >= min_sep)
    a, b, res = a[good], b[good], res[good]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    pairs = np.column_stack([lo, hi])
    # deterministic merge: sort before clustering
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    pairs, res = pairs[order], res[order]
    labels = cluster_pairs(pairs, cfg.cluster)
    found = []
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        k = members[np.argmin(res[members])]
        alpha, beta = pairs[k]
        half = 0.5 * (beta - alpha)
        z = np.exp(0.5j * (alpha + beta))
        found.append(
            SelfIntersection(
                float(alpha), float(beta), complex(p.on_circle(alpha)),
                float(np.cos(half)), complex(z), float(res[k]),
            )
        )
    if len(found) > 4 * bound:
        raise SaturationWarning(len(found), bound)
    found.sort(key=lambda s: (s.alpha, s.beta))
    return found


def pair_distance(s1, s2):
    """Torus distance between two unordered parameter pairs (max-norm)."""
    d_same = max(_circular_gap(s1.alpha, s2.alpha), _circular_gap(s1.beta, s2.beta))
    d_swap = max(_circular_gap(s1.alpha, s2.beta), _circular_gap(s1.beta, s2.alpha))
    return float(min(d_same, d_swap))


@dataclass
class EquivalenceReport:
    """Agreement between the resultant pipeline and the oracle."""

    pipeline_count: int
    oracle_count: int
    counts_agree: bool
    max_pair_distance: float
    matches: list = field(default_factory=list)
    unmatched_pipeline: list = field(default_factory=list)
    unmatched_oracle: list = field(default_factory=list)

    def to_json_dict(self):
        return {
            "count": self.pipeline_count,
            "oracle_count": self.oracle_count,
            "counts_agree": self.counts_agree,
            "max_pair_distance": self.max_pair_distance,
            "matches": [list(m) for m in self.matches],
            "unmatched_pipeline": list(self.unmatched_pipeline),
            "unmatched_oracle": list(self.unmatched_oracle),
        }


def match_pairs(first, second):
    """Optimal one-to-one matching of two pair lists by torus distance.

    Returns ``(matches, max_distance)`` where ``matches`` holds index pairs.
    """
    if not first or not second:
        return [], 0.0
    cost = np.array([[pair_distance(a, b) for b in second] for a in first])
    rows, cols = linear_sum_assignment(cost)
    matches = [(int(r), int(c)) for r, c in zip(rows, cols)]
    return matches, float(cost[rows, cols].max())


def compare(p, tol=DEFAULT_TOLERANCES, cfg=OracleConfig(), seed=0):
    """Run both pipelines on ``p`` and match their pairs."""
    report = self_intersections(p, tol, seed)
    oracle = oracle_self_intersections(p, cfg)
    matches, worst = match_pairs(report.intersections, oracle)
    used_a = {i for i, _ in matches}
    used_b = {j for _, j in matches}
    return EquivalenceReport(
        report.count,
        len(oracle),
        report.count == len(oracle),
        worst,
        matches,
        [i for i in range(report.count) if i not in used_a],
        [j for j in range(len(oracle)) if j not in used_b],
    )
