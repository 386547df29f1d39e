"""Approximation of circle maps by positively oriented embeddings.

Pipeline: fit a Laurent polynomial to the target samples, perturb it until its
self-intersections are finite and transversal, cut small parameter intervals
around every crossing parameter, join the surviving arcs back into one simple
closed polyline, and certify simplicity, orientation and the L^p distance.
The error budget is split evenly between truncation, perturbation and surgery.
"""

from dataclasses import dataclass, field
import heapq
from math import gcd

import numpy as np

from . import geometry as geo
from .errors import (
    BudgetExceeded,
    DomainError,
    ExceptionalInput,
    ExcisionFailure,
    GenericityFailure,
    NoPathFound,
    OrientationFailure,
    SelfxError,
)
from .intersector import DEFAULT_TOLERANCES, self_intersections
from .laurent import LaurentPolynomial, _uniform_grid, detect_exceptional, fit_from_samples, normalize

TWO_PI = 2 * np.pi
#: degree ranges tried by the automatic fit, as half-widths r of [-r, r]
AUTO_DEGREES = (4, 8, 16, 32, 64)
#: samples per full turn when discretizing arcs of q
ARC_SAMPLES = 8192
#: extra Fourier modes reported beyond the polynomial's own range
GUARD_BAND = 32
#: multiples of the budget-safe excision half-width, tried largest first
DELTA_LADDER = (64, 16, 4, 1)
PERTURB_ATTEMPTS = 16
#: smallest accepted |sin| of the angle between the two branches at a crossing
MIN_TRANSVERSALITY = 1e-6
#: resolution of the uniform resampling behind the spectral area estimate
SPECTRAL_GRID = 2**20


@dataclass
class EmbeddingRequest:
    """Target samples plus the approximation settings.

    Parameters
    ----------
    theta, values : array_like
        Samples ``f(e^{i theta})``; non-uniform angles are resampled linearly.
    p_exponent : float
        Norm exponent, at least 1.
    epsilon : float
        L^p budget, positive.
    seed : int
    degree_range : (int, int) or None
        Exponent range of the fit; ``None`` grows it automatically.
    """

    theta: np.ndarray
    values: np.ndarray
    p_exponent: float = 2.0
    epsilon: float = 0.05
    seed: int = 0
    degree_range: tuple = None

    def __post_init__(self):
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise DomainError("epsilon must be positive")
        if not (np.isfinite(self.p_exponent) and self.p_exponent >= 1):
            raise DomainError("p_exponent must be at least 1")
        theta, values = _uniform_grid(self.theta, self.values)
        if theta.size < 8:
            raise DomainError("need at least 8 target samples")
        if not np.all(np.isfinite(values)):
            raise DomainError("target samples must be finite")
        self.theta, self.values = theta, values
        if self.degree_range is not None:
            m, n = (int(v) for v in self.degree_range)
            if n < m:
                raise DomainError("degree_range must satisfy m <= n")
            self.degree_range = (m, n)


@dataclass
class EmbeddingResult:
    """Certified embedding with its diagnostics.

    ``fourier[i]`` is the coefficient of exponent ``fourier_range[0] + i`` of
    the output curve.
    """

    curve: geo.PlanarCurve
    lp_distance: float
    fourier: np.ndarray
    fourier_range: tuple
    simple: bool
    signed_area: float
    modified_measure: float
    diagnostics: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {
            "simple": self.simple,
            "signed_area": self.signed_area,
            "lp_distance": self.lp_distance,
            "modified_measure": self.modified_measure,
            "fourier_range": list(self.fourier_range),
            "fourier": [[float(c.real), float(c.imag)] for c in self.fourier],
            "diagnostics": _plain(self.diagnostics),
        }


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


# distances and spectra -----------------------------------------------------------


def _discrete_lp(diff, p):
    return float(np.mean(np.abs(diff) ** p) ** (1 / p))


def lp_distance(a, b, p_exponent=2.0):
    """L^p distance between a parameterized polyline and circle samples.

    Parameters
    ----------
    a : PlanarCurve
    b : (theta, values)
        Samples, linearly interpolated in the parameter.
    p_exponent : float

    Returns
    -------
    float
        ``((1/2pi) int |a - b|^p)^(1/p)`` by the composite trapezoid rule on
        the union of both parameter grids.
    """
    theta_b, values_b = b
    theta_b = np.mod(np.asarray(theta_b, dtype=float), TWO_PI)
    order = np.argsort(theta_b)
    theta_b, values_b = theta_b[order], np.asarray(values_b, dtype=complex)[order]
    grid = np.unique(np.concatenate([a.params, theta_b, [0.0]]))
    grid = np.append(grid, TWO_PI)
    diff = a.evaluate(grid) - geo.periodic_interp(grid, theta_b, values_b)
    w = np.abs(diff) ** p_exponent
    integral = np.sum(0.5 * (w[1:] + w[:-1]) * np.diff(grid))
    return float((integral / TWO_PI) ** (1 / p_exponent))


def polyline_fourier(curve, k_range):
    """Exact Fourier coefficients of a curve that is linear in the parameter.

    Uses ``hat f(k) = -(1 / (2 pi k^2)) sum_j (s_j - s_{j-1}) e^{-i k theta_j}``,
    where ``s_j`` is the slope on the segment starting at ``theta_j``.
    """
    theta = curve.params
    z = curve.points
    nxt_t = np.append(theta[1:], theta[0] + TWO_PI)
    nxt_z = np.roll(z, -1)
    dt = nxt_t - theta
    slope = (nxt_z - z) / dt
    jump = slope - np.roll(slope, 1)
    kmin, kmax = int(k_range[0]), int(k_range[1])
    ks = np.arange(kmin, kmax + 1)
    out = np.empty(ks.size, dtype=complex)
    step = max(1, 2**22 // theta.size)
    for s in range(0, ks.size, step):
        kk = ks[s:s + step]
        phase = np.exp(-1j * np.outer(kk, theta))
        with np.errstate(divide="ignore", invalid="ignore"):
            out[s:s + step] = -(phase @ jump) / (TWO_PI * kk.astype(float) ** 2)
    zero = ks == 0
    if np.any(zero):
        out[zero] = np.sum(0.5 * (z + nxt_z) * dt) / TWO_PI
    return out


def spectral_area(curve, grid=SPECTRAL_GRID):
    """``pi * sum_k k |hat f(k)|^2`` from a fine uniform resampling of the curve."""
    theta = TWO_PI * np.arange(grid) / grid
    F = np.fft.fft(curve.evaluate(theta)) / grid
    k = np.fft.fftfreq(grid, 1.0 / grid)
    return float(np.pi * np.sum(k * np.abs(F) ** 2))


# fitting -------------------------------------------------------------------------


def _fit(req, budget):
    """Fit, growing the range until the discrete truncation error is below ``budget``."""
    theta, values, p = req.theta, req.values, req.p_exponent
    if req.degree_range is not None:
        ranges = [req.degree_range]
    else:
        ranges = [(-r, r) for r in AUTO_DEGREES if 2 * (2 * r + 1) <= theta.size] or [(-1, 1)]
    err = np.inf
    for m, n in ranges:
        q = fit_from_samples(theta, values, m, n)
        err = _discrete_lp(q.on_circle(theta) - values, p)
        if err < budget:
            return q, err
    raise BudgetExceeded(err, budget, "truncation error above its budget at the largest degree range")


def _compress(q, theta, values, p, allowance, base_err):
    """Drop the smallest coefficients while their moduli sum stays below ``allowance``."""
    c = np.array(q.coeffs)
    order = np.argsort(np.abs(c))
    dropped = np.cumsum(np.abs(c[order]))
    k = int(np.searchsorted(dropped, allowance, side="right"))
    if k == 0:
        return q, base_err
    c[order[:k]] = 0
    out = LaurentPolynomial(c, q.m)
    if out.is_constant():
        return q, base_err
    return out, _discrete_lp(out.on_circle(theta) - values, p)


# genericity ----------------------------------------------------------------------


def _nonconstant_support(q):
    return [k for k in q.support() if k != 0]


def _transversality(q, crossings):
    """Smallest |sin| of the angle between the two branches over all crossings."""
    dq = q.derivative()
    worst = 1.0
    for s in crossings:
        ta = 1j * np.exp(1j * s.alpha) * dq(np.exp(1j * s.alpha))
        tb = 1j * np.exp(1j * s.beta) * dq(np.exp(1j * s.beta))
        denom = abs(ta) * abs(tb)
        if denom == 0:
            return 0.0
        worst = min(worst, abs((np.conj(ta) * tb).imag) / denom)
    return worst


def _perturb(q, seed, delta):
    rng = np.random.default_rng(seed)
    last = None
    for _ in range(PERTURB_ATTEMPTS):
        m, n = q.m, q.n
        terms = q.as_dict()
        size = n - m + 1
        noise = delta * np.sqrt(rng.uniform(0, 1, size)) * np.exp(1j * rng.uniform(0, TWO_PI, size))
        for k, e in zip(range(m, n + 1), noise):
            terms[k] = terms.get(k, 0) + e
        cand = LaurentPolynomial.from_dict(terms)
        support = _nonconstant_support(cand)
        if not support:
            extra = 1
        elif gcd(*support) >= 2 if len(support) > 1 else abs(support[0]) >= 2:
            extra = cand.m + 1 if cand.m + 1 != 0 else cand.m + 2
        else:
            extra = None
        if extra is not None:
            terms = cand.as_dict()
            terms[extra] = terms.get(extra, 0) + delta * np.exp(1j * rng.uniform(0, TWO_PI))
            cand = LaurentPolynomial.from_dict(terms)
        try:
            normalized, _ = normalize(cand)
            if detect_exceptional(normalized).is_exceptional:
                continue
            report = self_intersections(cand, DEFAULT_TOLERANCES, seed)
        except (ExceptionalInput, SelfxError) as exc:
            last = exc
            continue
        if report.count and _transversality(cand, report.intersections) < MIN_TRANSVERSALITY:
            continue
        return cand, report
    raise GenericityFailure(f"no generic perturbation found in {PERTURB_ATTEMPTS} attempts ({last})")


def perturb_to_generic(q, seed, delta):
    """Random perturbation of every coefficient, of modulus at most ``delta``.

    A coefficient of size ``delta`` is added at exponent ``m + 1`` when the
    perturbed polynomial still has support gcd at least 2.  Draws repeat until
    the result is non-exceptional with finitely many transversal
    self-intersections.

    Raises
    ------
    GenericityFailure
        After 16 unsuccessful draws.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    return _perturb(q, seed, delta)[0]


# excision ------------------------------------------------------------------------


def _merged_intervals(centers, half_width):
    """Merge the circular intervals ``[c - h, c + h]``; ``None`` if they cover the circle."""
    c = np.sort(np.mod(np.asarray(centers, dtype=float), TWO_PI))
    lo, hi = c - half_width, c + half_width
    intervals = [[lo[0], hi[0]]]
    for a, b in zip(lo[1:], hi[1:]):
        if a <= intervals[-1][1]:
            intervals[-1][1] = max(intervals[-1][1], b)
        else:
            intervals.append([a, b])
    # wrap-around merge
    if len(intervals) > 1 and intervals[-1][1] >= intervals[0][0] + TWO_PI:
        intervals[0][0] = intervals[-1][0] - TWO_PI
        intervals[0][1] = max(intervals[0][1], intervals[-1][1] - TWO_PI)
        intervals.pop()
    covered = sum(b - a for a, b in intervals)
    if covered >= TWO_PI or (len(intervals) == 1 and intervals[0][1] - intervals[0][0] >= TWO_PI):
        return None
    return intervals


def _arcs_from_gaps(q, intervals, samples):
    h = TWO_PI / samples
    arcs = []
    for (a0, a1), (b0, _) in zip(intervals, intervals[1:] + [[intervals[0][0] + TWO_PI, 0]]):
        s, e = a1, b0
        k = max(8, int(np.ceil((e - s) / h)))
        params = np.linspace(s, e, k + 1)
        s_mod = float(np.mod(s, TWO_PI))
        params = params - s + s_mod
        arcs.append(geo.Arc(q.on_circle(params), (s_mod, s_mod + (e - s)), params))
    return arcs


def _excise_at(q, centers, delta, samples=ARC_SAMPLES, doublings=6):
    for _ in range(doublings + 1):
        intervals = _merged_intervals(centers, delta)
        if intervals is None:
            raise ExcisionFailure("excised intervals cover the whole circle")
        arcs = _arcs_from_gaps(q, intervals, samples)
        if not geo.crossing_segments([a.points for a in arcs], closed=False):
            return arcs, delta, sum(b - a for a, b in intervals)
        delta *= 2
    raise ExcisionFailure("arcs still intersect after enlarging the excised intervals")


def excise_neighborhoods(q, crossings, delta_param, samples=ARC_SAMPLES):
    """Remove parameter intervals of half-width ``delta_param`` around all crossing angles.

    Returns
    -------
    list of Arc
        In circular parameter order.  Each arc's ``param_interval`` starts in
        ``[0, 2 pi)`` and its end may exceed ``2 pi`` when the arc wraps.  An
        empty list means there was nothing to excise (``q`` is injective).

    Raises
    ------
    ExcisionFailure
        When the intervals cover the circle, or the image arcs still meet
        after doubling the half-width six times.
    """
    if not delta_param > 0:
        raise DomainError("delta_param must be positive")
    centers = [a for s in crossings for a in (s.alpha, s.beta)]
    if not centers:
        return []
    return _excise_at(q, centers, delta_param, samples)[0]


# reconnection --------------------------------------------------------------------


def _inner_params(path, t0, t1):
    """Parameters in ``(t0, t1)`` for the interior path points.

    Mostly arclength-proportional; a quarter of the interval is spread by
    index so that increments stay far above rounding even for tiny segments.
    """
    if path.size <= 2:
        return np.zeros(0)
    seg = np.abs(np.diff(path))
    cum = np.cumsum(seg)[:-1] / np.sum(seg)
    uniform = np.arange(1, path.size - 1) / (path.size - 1)
    return t0 + (0.75 * cum + 0.25 * uniform) * (t1 - t0)


def _assemble(chain, params, closing):
    """Join the chain and the closing path; the closing path spans the wrap-around gap."""
    inner = closing[1:-1]
    inner_params = _inner_params(closing, params[-1], params[0] + TWO_PI)
    pts = np.concatenate([chain, inner])
    par = np.mod(np.concatenate([params, inner_params]), TWO_PI)
    start = int(np.argmin(par))
    pts, par = np.roll(pts, -start), np.roll(par, -start)
    return geo.PlanarCurve(pts, par)


def _arc_params(arc):
    if arc.params is not None:
        return arc.params
    return np.linspace(arc.param_interval[0], arc.param_interval[1], arc.points.size)


def _reconnect(arcs, radius):
    arcs = sorted(arcs, key=lambda a: a.param_interval[0])
    n = len(arcs)
    router = geo.WireRouter([a.points for a in arcs], radius)
    ends = [(arcs[i].points[-1], arcs[(i + 1) % n].points[0]) for i in range(n)]
    # Routing order is free.  Joins that are single free mesh edges go first.
    # Routing the others in parameter order would grow one long chain early,
    # and every later detour would have to trace all the earlier ones.
    direct = [i for i in range(n) if router.is_direct(*ends[i])]
    rest = [i for i in range(n) if i not in set(direct)]
    if not rest:
        rest = [direct.pop()]
    wires = {i: router.connect(*ends[i]) for i in direct}
    # Lazy greedy: route the currently cheapest connector next.  Costs are
    # cached and only the top of the heap is re-evaluated, since routes tend
    # to get longer, not shorter, as wires accumulate.
    heap = [(router.route_length(*ends[i]), i) for i in rest]
    heapq.heapify(heap)
    while len(heap) > 1:
        _, i = heapq.heappop(heap)
        fresh = router.route_length(*ends[i])
        if heap and fresh > heap[0][0]:
            heapq.heappush(heap, (fresh, i))
            continue
        wires[i] = router.connect(*ends[i])
    last = heap[0][1]
    base = arcs[0].param_interval[0]

    def assemble():
        pts, par = [arcs[0].points], [_arc_params(arcs[0])]
        for i, nxt in enumerate(arcs[1:]):
            nparams = base + np.mod(_arc_params(nxt) - base, TWO_PI)
            path = router.draw(wires[i])
            pts += [path[1:-1], nxt.points]
            par += [_inner_params(path, par[-1][-1], nparams[0]), nparams]
        return _assemble(np.concatenate(pts), np.concatenate(par), router.draw(wires[n - 1]))

    def kinds():
        return ["chord" if router.wires[wires[i]]["edge"] is not None else "routed" for i in range(n)]

    wires[last] = router.connect(*ends[last])
    curve = assemble()
    if geo.signed_area(curve) > 0:
        return curve, kinds()
    # a barrier from the right-hand side of an arc out to the disk boundary
    # makes that side exterior, so the closed curve turns counterclockwise
    router.remove(wires[last])
    host = max(arcs, key=lambda a: a.points.size)
    if host.points.size < 3:
        raise OrientationFailure("no arc long enough to anchor the orientation barrier")
    j = host.points.size // 2
    side = router.right_side_triangles(*host.points[j - 1:j + 2])
    barrier = router.connect_to_boundary(host.points[j], side)
    wires[last] = router.connect(*ends[last])
    router.remove(barrier)
    curve = assemble()
    if geo.signed_area(curve) > 0:
        return curve, kinds()
    raise OrientationFailure("no closing path produced a positively oriented curve")


def reconnect(arcs, radius):
    """Join disjoint arcs into one simple, positively oriented closed polyline.

    The end of each arc is joined to the start of the next in circular
    parameter order.  All connectors are routed through one triangulation of
    the free space that keeps them from crossing the arcs or each other (see
    :class:`selfx.geometry.WireRouter`).  The connector routed last closes the
    curve; if that yields a negatively oriented curve, it is rerouted around a
    temporary barrier from an arc's right-hand side to the disk boundary.  Connector points get
    parameters in the excised intervals, mostly proportional to arclength.

    Raises
    ------
    NoPathFound
    OrientationFailure
    """
    if not arcs:
        raise DomainError("no arcs to reconnect")
    for a in arcs:
        if np.max(np.abs(a.points)) >= radius:
            raise DomainError("radius must exceed the arcs' extent")
    return _reconnect(arcs, radius)[0]


# the pipeline --------------------------------------------------------------------


def _certify(curve, target, p):
    simple, witnesses = geo.polyline_is_simple(curve)
    area = geo.signed_area(curve)
    dist = lp_distance(curve, target, p)
    return simple, area, dist, witnesses


def _surgery(q, centers, delta, radius, samples):
    arcs, used_delta, removed = _excise_at(q, centers, delta, samples)
    curve, kinds = _reconnect(arcs, radius)
    return curve, used_delta, removed, kinds


def embed(request):
    """Certified positively oriented embedding within ``epsilon`` of the target.

    Raises
    ------
    BudgetExceeded
        When no attempt certifies within the budget.
    GenericityFailure, ExcisionFailure, NoPathFound, OrientationFailure
        Propagated from the surgery when every attempt fails that way.
    """
    req = request
    eps, p = req.epsilon, req.p_exponent
    target = (req.theta, req.values)
    share = eps / 3

    q, trunc = _fit(req, share)
    q, trunc = _compress(q, req.theta, req.values, p, 0.5 * (share - trunc), trunc)
    size = q.n - q.m + 2
    delta = share / (2 * size)
    qg, report = _perturb(q, req.seed, delta)
    perturb_bound = float(np.sum(np.abs(np.array([qg[k] - q[k] for k in range(min(qg.m, q.m), max(qg.n, q.n) + 1)]))))
    R = 1.5 * float(np.max(np.abs(qg.on_circle(req.theta))))
    diag = {
        "fit_range": [q.m, q.n],
        "truncation_error": trunc,
        "perturbation_bound": perturb_bound,
        "crossings": report.count,
        "radius": R,
        "perturb_delta": delta,
    }

    centers = [a for s in report.intersections for a in (s.alpha, s.beta)]
    dense = qg.on_circle(TWO_PI * np.arange(ARC_SAMPLES) / ARC_SAMPLES)
    if not centers and geo.signed_area(dense) > 0:
        curve = geo.PlanarCurve(dense, TWO_PI * np.arange(ARC_SAMPLES) / ARC_SAMPLES)
        return _result(curve, target, p, eps, 0.0, diag | {"surgery": "none"}, qg)
    if not centers:
        centers = [0.0]  # injective but clockwise: cut once and close the other way

    safe = 0.99 * np.pi * (share / (2 * R)) ** p / len(centers)
    last_error = None
    for factor in DELTA_LADDER:
        try:
            curve, used, removed, kinds = _surgery(qg, centers, safe * factor, R, ARC_SAMPLES)
        except (ExcisionFailure, NoPathFound, OrientationFailure) as exc:
            last_error = exc
            continue
        info = diag | {
            "delta_param": used,
            "delta_factor": factor,
            "connectors": kinds,
            "surgery_bound": float((removed / TWO_PI) ** (1 / p) * 2 * R),
        }
        try:
            return _result(curve, target, p, eps, removed, info, qg)
        except BudgetExceeded as exc:
            last_error = exc
    if last_error is None:
        raise BudgetExceeded(np.inf, eps)
    raise last_error


def _result(curve, target, p, eps, removed, diag, q):
    simple, area, dist, witnesses = _certify(curve, target, p)
    if not simple:
        raise BudgetExceeded(dist, eps, f"output curve not simple ({len(witnesses)} crossings)")
    if not area > 0:
        raise BudgetExceeded(dist, eps, "output curve not positively oriented")
    if not dist <= eps:
        raise BudgetExceeded(dist, eps)
    K = max(abs(q.m), abs(q.n)) + GUARD_BAND
    diag = dict(diag)
    diag["spectral_area"] = spectral_area(curve)
    diag["points"] = len(curve)
    diag["max_turning"] = float(np.max(np.abs(geo.turning_angles(np.append(curve.points, curve.points[:2])))))
    return EmbeddingResult(curve, dist, polyline_fourier(curve, (-K, K)), (-K, K), simple, area, removed, diag)


def synthesize(c, k_range, count):
    """Samples of ``sum_k c_k e^{ik theta}`` on a uniform grid of ``count`` points."""
    c = np.asarray(c, dtype=complex)
    k = np.arange(int(k_range[0]), int(k_range[1]) + 1)
    if k.size != c.size:
        raise DomainError("coefficient count must match k_range")
    theta = TWO_PI * np.arange(count) / count
    return theta, np.exp(1j * np.outer(theta, k)) @ c


def match_fourier(c, k_range, epsilon, seed=0, samples=4096):
    """Embedding whose Fourier coefficients are within ``epsilon`` of ``c`` in l^2.

    The L^2 budget handed to :func:`embed` is ``0.9 * epsilon``; the
    coefficients of the output are then recomputed exactly over ``k_range``
    widened by a guard band and the l^2 distance is certified.

    Raises
    ------
    BudgetExceeded
    """
    c = np.asarray(c, dtype=complex)
    if not np.linalg.norm(c) > 0:
        raise DomainError("c must be nonzero")
    kmin, kmax = int(k_range[0]), int(k_range[1])
    count = max(samples, 8 * (kmax - kmin + 1))
    theta, values = synthesize(c, (kmin, kmax), count)
    span = max(abs(kmin), abs(kmax))
    result = embed(EmbeddingRequest(theta, values, 2.0, 0.9 * epsilon, seed, (-span, span)))
    lo, hi = kmin - GUARD_BAND, kmax + GUARD_BAND
    fhat = polyline_fourier(result.curve, (lo, hi))
    padded = np.zeros(hi - lo + 1, dtype=complex)
    padded[kmin - lo:kmin - lo + c.size] = c
    distance = float(np.linalg.norm(padded - fhat))
    if not distance < epsilon:
        raise BudgetExceeded(distance, epsilon, "coefficient distance above budget")
    result.fourier, result.fourier_range = fhat, (lo, hi)
    result.diagnostics["coefficient_distance"] = distance
    return result
