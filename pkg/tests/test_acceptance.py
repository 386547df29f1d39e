"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with pytest (the lines are repeated in the terminal summary) or directly
with ``python tests/test_acceptance.py``.
"""

import io
import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import random_laurent  # noqa: E402
from selfx import (  # noqa: E402
    BoundViolation,
    EmbeddingRequest,
    ExceptionalInput,
    LaurentPolynomial,
    SaturationWarning,
    compare,
    embed,
    extremal,
    lp_distance,
    oracle_self_intersections,
    polyline_fourier,
    polyline_is_simple,
    self_intersections,
    signed_area,
    upper_bound,
)
from selfx.cli import main as cli_main  # noqa: E402
from selfx.documents import dumps, laurent_document  # noqa: E402
from selfx.embedder import match_fourier, synthesize  # noqa: E402
from selfx.pairing import build_g, build_g_star, resultant_in_z, verify_identity  # noqa: E402

L = LaurentPolynomial.from_dict
TWO_PI = 2 * np.pi

#: lines printed so far, echoed by the terminal summary hook in conftest
RESULTS = []


def record(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


# criteria --------------------------------------------------------------------------


def criterion_1(tmp_dir):
    """Triple point of z^2 + z^-1 through the CLI: 3 pairs at image 0, bound 3, < 1 s."""
    path = Path(tmp_dir) / "triple.json"
    path.write_text(dumps(laurent_document(L({2: 1, -1: 1}))), encoding="utf-8")
    out = io.StringIO()
    start = time.perf_counter()
    code = cli_main(["analyze", str(path)], out)
    elapsed = time.perf_counter() - start
    report = json.loads(out.getvalue())
    worst = max(abs(complex(*s["image"])) for s in report["intersections"])
    ok = code == 0 and report["count"] == 3 and report["bound"] == 3 and worst < 1e-8 and elapsed < 1
    return record(1, ok, f"count={report['count']} bound={report['bound']} max|image|={worst:.1e} "
                          f"time={elapsed:.2f}s")


def criterion_2():
    """z^n + 0.05 z attains (n-1)^2 for n = 2..6 in < 5 s total."""
    start = time.perf_counter()
    counts = {n: self_intersections(L({n: 1, 1: 0.05})).count for n in range(2, 7)}
    elapsed = time.perf_counter() - start
    ok = all(c == (n - 1) ** 2 for n, c in counts.items()) and elapsed < 5
    return record(2, ok, f"counts={counts} time={elapsed:.2f}s")


SHARP_CASES = [(2, -1), (3, -1), (3, -2), (4, -1), (4, -3), (5, -2), (5, -3), (5, -4)]


def criterion_3():
    """z^n + eps z^m attains (n-1)(n-m) for every listed (n, m) at eps = 1e-2 and eps = 1e-3."""
    start = time.perf_counter()
    failures = []
    for n, m in SHARP_CASES:
        for eps in (1e-2, 1e-3):
            count = self_intersections(extremal(n, m, eps)).count
            if count != (n - 1) * (n - m):
                failures.append((n, m, eps, count))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 30
    return record(3, ok, f"{len(SHARP_CASES)} cases x 2 eps, failures={failures} time={elapsed:.2f}s")


def _random_exponent_range(rng):
    n = int(rng.integers(2, 7))
    m = int(rng.integers(-n + 1, n))
    return n, m if m != 0 else -1


def criterion_4():
    """Interpolated resultant degree is 2(n-1)(n-m) with a well-resolved leading coefficient."""
    rng = np.random.default_rng(404)
    bad, worst_rel = [], np.inf
    for _ in range(100):
        n, m = _random_exponent_range(rng)
        terms = {k: rng.uniform(0.2, 1) * np.exp(2j * np.pi * rng.uniform()) for k in range(m, n + 1) if k}
        p = L(terms)
        R = resultant_in_z(build_g(p), build_g_star(p))
        rel = R.relative_leading()
        worst_rel = min(worst_rel, rel)
        if R.degree != 2 * (n - 1) * (n - m) or not rel > 1e-8:
            bad.append((n, m, R.degree))
    return record(4, not bad, f"100 polynomials, mismatches={bad} min relative leading={worst_rel:.1e}")


def criterion_5():
    """Defining identity of g holds to 1e-9 at 1000 random (p, theta, z)."""
    rng = np.random.default_rng(505)
    worst = 0.0
    for _ in range(1000):
        p = random_laurent(rng, 1, 6)
        theta = rng.uniform(0, TWO_PI)
        while abs(np.sin(theta)) < 1e-3:
            theta = rng.uniform(0, TWO_PI)
        z = np.exp(1j * rng.uniform(0, TWO_PI))
        worst = max(worst, float(verify_identity(p, theta, z)))
    return record(5, worst < 1e-9, f"max residual={worst:.1e} over 1000 samples")


def criterion_6():
    """Pipeline and oracle agree on 50 random polynomials (n <= 5)."""
    rng = np.random.default_rng(606)
    disagreements, worst = 0, 0.0
    for _ in range(50):
        eq = compare(random_laurent(rng, 2, 5))
        worst = max(worst, eq.max_pair_distance)
        if not eq.counts_agree or eq.max_pair_distance >= 1e-5:
            disagreements += 1
    ok = disagreements == 0
    return record(6, ok, f"disagreements={disagreements}/50 max pair distance={worst:.1e}")


def criterion_7():
    """Count never exceeds the bound on 500 random polynomials."""
    rng = np.random.default_rng(707)
    over, violations = 0, 0
    for _ in range(500):
        p = random_laurent(rng, 2, 6)
        try:
            r = self_intersections(p)
        except BoundViolation:
            violations += 1
            continue
        over += r.count > upper_bound(p.n, p.m)
    ok = over == 0 and violations == 0
    return record(7, ok, f"over bound={over} BoundViolation={violations} of 500")


def criterion_8():
    """Balanced polynomials: counts via the shear match the oracle and obey (n-1)(2n-1)."""
    rng = np.random.default_rng(808)
    mismatches, over, reduced = [], 0, 0
    for _ in range(20):
        p = random_laurent(rng, 2, 5, balanced=True)
        r = self_intersections(p)
        reduced += r.reduced_via_psi
        oracle = len(oracle_self_intersections(p))
        if r.count != oracle:
            mismatches.append((p.n, r.count, oracle))
        over += r.count > (p.n - 1) * (2 * p.n - 1)
    ok = not mismatches and over == 0 and reduced == 20
    return record(8, ok, f"reduced={reduced}/20 mismatches={mismatches} over bound={over}")


def criterion_9():
    """Shoelace area of 4096 samples matches pi * sum k |a_k|^2 to 1e-3 relative."""
    rng = np.random.default_rng(909)
    worst = 0.0
    theta = TWO_PI * np.arange(4096) / 4096
    for _ in range(20):
        p = random_laurent(rng, 1, 5)
        exact = np.pi * sum(k * abs(a) ** 2 for k, a in p.as_dict().items())
        worst = max(worst, abs(signed_area(p.on_circle(theta)) - exact) / abs(exact))
    return record(9, worst < 1e-3, f"max relative error={worst:.1e} over 20 polynomials")


def criterion_10():
    """Figure-eight: certified simple, positive area, L^2 distance < 0.05 within 60 s."""
    theta = TWO_PI * np.arange(1024) / 1024
    values = np.cos(theta) + 1j * np.sin(2 * theta)
    start = time.perf_counter()
    res = embed(EmbeddingRequest(theta, values, 2.0, 0.05, seed=0))
    elapsed = time.perf_counter() - start
    simple = polyline_is_simple(res.curve)[0]
    area = signed_area(res.curve)
    dist = lp_distance(res.curve, (theta, values), 2.0)
    ok = simple and area > 0 and dist < 0.05 and elapsed < 60
    return record(10, ok, f"simple={simple} area={area:.3f} L2={dist:.4f} time={elapsed:.1f}s")


def criterion_11():
    """Random unit-norm spectra on [-8, 8]: embeddings with ||c - f_hat||_2 < 0.05."""
    rng = np.random.default_rng(11)
    lines, ok = [], True
    for i in range(5):
        c = rng.normal(size=17) + 1j * rng.normal(size=17)
        c /= np.linalg.norm(c)
        res = match_fourier(c, (-8, 8), 0.05, seed=i)
        simple = polyline_is_simple(res.curve)[0]
        # coefficients of the output curve, recomputed exactly over a wide band
        K = 256
        fhat = polyline_fourier(res.curve, (-K, K))
        padded = np.zeros(2 * K + 1, dtype=complex)
        padded[K - 8:K + 9] = c
        band = float(np.linalg.norm(padded - fhat))
        # all frequencies at once: by Parseval this is the L^2 distance to the exact target
        fine = synthesize(c, (-8, 8), 2**16)
        full = lp_distance(res.curve, fine, 2.0)
        good = simple and res.signed_area > 0 and band < 0.05 and full < 0.05
        ok &= good
        lines.append(f"{band:.4f}/{full:.4f}")
    return record(11, ok, f"l2 distance (|k|<=256 / all k) per target: {', '.join(lines)}")


def criterion_12():
    """Exceptional inputs are classified; the oracle saturates on the balanced one."""
    statuses = []
    for p in (L({4: 1, -2: 1}), L({1: 1, -1: np.exp(0.9j)})):
        try:
            self_intersections(p)
            statuses.append("None")
        except ExceptionalInput as exc:
            statuses.append(str(exc.status))
    try:
        oracle_self_intersections(L({1: 1, -1: np.exp(0.9j)}))
        saturated = False
    except SaturationWarning:
        saturated = True
    ok = statuses == ["PowerSubstitution(2)", "BalancedModulus"] and saturated
    return record(12, ok, f"statuses={statuses} oracle saturated={saturated}")


CRITERIA = [criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


# pytest entry points ---------------------------------------------------------------


def test_criterion_1(tmp_path):
    assert criterion_1(tmp_path)


@pytest.mark.parametrize("check", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        passed = [criterion_1(tmp)] + [check() for check in CRITERIA]
    print(f"{sum(passed)}/{len(passed)} criteria passed")
    sys.exit(0 if all(passed) else 1)
