"""The twelve acceptance criteria, each reported as one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``; the lines are also
collected into the terminal summary.  Time limits are asserted alongside the
mathematical checks.
"""

import time
from fractions import Fraction

import pytest

from ghostslopes.ghost import GhostContext, d_iw, d_new, d_ur, ghost_coefficient, weight
from ghostslopes.suites import run_suite
from ghostslopes.theorems import distribution, distribution_check, gouvea_bound, gouvea_bound_check, kolmogorov_distance

# one Serre weight per prime; every relevant character is swept
A_FOR = {7: 2, 11: 3, 13: 4}


class Clock:
    def __init__(self):
        self.start = time.perf_counter()

    @property
    def elapsed(self):
        return time.perf_counter() - self.start


def _report(lines, n, ok, detail, seconds):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail}; {seconds:.1f}s)"
    lines.append(line)
    print(line)
    return ok


def _suite(name, p, **cfg):
    return run_suite(name, {"p": p, "a": A_FOR[p], **cfg})


def _render_tables():
    iw, triples = [], []
    for s in range(6):
        ctx = GhostContext(7, 2, s)
        iw.append(" ".join(str(d_iw(ctx, k)) for k in range(2, 15)))
        cells = []
        for kb in range(7):
            k = weight(ctx, kb)
            cells.append(f"({k}, {d_ur(ctx, k)}, {d_new(ctx, k)})")
        triples.append(" ".join(cells))
    return "\n".join(iw), "\n".join(triples)


GOLDEN_IW = """\
1 1 2 2 2 2 3 3 4 4 4 4 5
0 1 1 2 2 2 2 3 3 4 4 4 4
0 0 1 1 2 2 2 2 3 3 4 4 4
0 0 0 1 1 2 2 2 2 3 3 4 4
1 1 1 1 2 2 3 3 3 3 4 4 5
0 1 1 1 1 2 2 3 3 3 3 4 4"""

GOLDEN_TRIPLES = """\
(4, 1, 0) (10, 1, 2) (16, 1, 4) (22, 1, 6) (28, 2, 6) (34, 2, 8) (40, 2, 10)
(6, 0, 2) (12, 1, 2) (18, 1, 4) (24, 1, 6) (30, 1, 8) (36, 2, 8) (42, 2, 10)
(2, 0, 0) (8, 0, 2) (14, 0, 4) (20, 1, 4) (26, 1, 6) (32, 1, 8) (38, 1, 10)
(4, 0, 0) (10, 0, 2) (16, 0, 4) (22, 0, 6) (28, 1, 6) (34, 1, 8) (40, 1, 10)
(6, 0, 2) (12, 1, 2) (18, 1, 4) (24, 1, 6) (30, 1, 8) (36, 2, 8) (42, 2, 10)
(2, 0, 0) (8, 0, 2) (14, 0, 4) (20, 1, 4) (26, 1, 6) (32, 1, 8) (38, 1, 10)"""

GOLDEN_G = [
    {},
    {10: 1, 16: 1, 22: 1},
    {16: 2, 22: 2, 28: 1, 34: 1, 40: 1, 46: 1},
    {16: 1, 22: 3, 28: 2, 34: 2, 40: 2, 46: 2, 52: 1, 58: 1, 64: 1, 70: 1},
]


def test_criterion_01_golden_tables(acceptance_lines):
    clock = Clock()
    iw, triples = _render_tables()
    ctx = GhostContext(7, 2, 0)
    gs = [ghost_coefficient(ctx, n) for n in range(1, 5)]
    ok = (
        iw.encode() == GOLDEN_IW.encode()
        and triples.encode() == GOLDEN_TRIPLES.encode()
        and [g.as_dict() for g in gs] == GOLDEN_G
        and [g.degree for g in gs] == [0, 3, 8, 16]
    )
    t = clock.elapsed
    _report(acceptance_lines, 1, ok and t < 1, "d_Iw rows, (k, d_ur, d_new) rows, g_1..g_4", t)
    assert ok and t < 1


def test_criterion_02_ghost_duality(acceptance_lines):
    clock = Clock()
    reports = {p: _suite("duality", p, kmax=500) for p in (7, 11, 13)}
    ok = all(r.passed for r in reports.values())
    t = clock.elapsed
    checked = sum(r.checked for r in reports.values())
    _report(acceptance_lines, 2, ok and t < 120, f"{checked} weights, k_bullet <= 500, p in 7/11/13", t)
    assert ok, {p: r.counterexample for p, r in reports.items()}
    assert t < 120


def test_criterion_03_vertex_iff_not_near_steinberg(acceptance_lines):
    clock = Clock()
    reports = {p: _suite("vertex", p, count=500, nmax=20, seed=0) for p in (7, 11)}
    ok = all(r.passed for r in reports.values())
    t = clock.elapsed
    checked = sum(r.checked for r in reports.values())
    _report(acceptance_lines, 3, ok and t < 300, f"{checked} Gaussian points, 500 per (p, character)", t)
    assert ok, {p: r.counterexample for p, r in reports.items()}
    assert t < 300


def test_criterion_04_delta_gap(acceptance_lines):
    clock = Clock()
    reports = {p: _suite("delta", p, kmax=200) for p in (7, 11)}
    ok = all(r.passed for r in reports.values())
    t = clock.elapsed
    _report(acceptance_lines, 4, ok and t < 120, "every pair l < l'' for k_bullet <= 200, p in 7/11", t)
    assert ok, {p: r.counterexample for p, r in reports.items()}
    assert t < 120


def test_criterion_05_theta_al_pstab(acceptance_lines):
    clock = Clock()
    reports = {p: _suite("al-theta-pstab", p, kmax=100, count=5) for p in (7, 11)}
    ok = all(r.passed for r in reports.values())
    t = clock.elapsed
    checked = sum(r.checked for r in reports.values())
    _report(acceptance_lines, 5, ok and t < 300, f"{checked} weights up to k_bullet = 100, p in 7/11", t)
    assert ok, {p: r.counterexample for p, r in reports.items()}
    assert t < 300


def test_criterion_06_gouvea_bound(acceptance_lines):
    clock = Clock()
    report = _suite("gouvea", 11, kmax=300)
    ctx = GhostContext(7, 2, 0)
    instance = gouvea_bound(ctx, 28) == (3, 3) and gouvea_bound_check(ctx, 28).ok
    ok = report.passed and instance
    t = clock.elapsed
    _report(acceptance_lines, 6, ok, f"{report.checked} weights at p = 11, plus k = 28 at p = 7 with bound 3", t)
    assert report.passed, report.counterexample
    assert instance


def test_criterion_07_gouvea_mazur(acceptance_lines):
    clock = Clock()
    report = _suite("gm", 11, m_values=[4, 5, 6, 7], pairs=50, seed=0)
    t = clock.elapsed
    ok = report.passed and report.checked == 10 * 4 * 50
    _report(acceptance_lines, 7, ok and t < 300, f"{report.checked} pairs, m = 4..7, p = 11", t)
    assert ok, report.counterexample
    assert t < 300


def test_criterion_08_distribution(acceptance_lines):
    clock = Clock()
    kbs = (50, 100, 200, 400)
    middle_ok = True
    trends = {}
    for ctx in GhostContext(11, A_FOR[11]).relevant():
        ds = []
        for kb in kbs:
            k = weight(ctx, kb)
            st = distribution(ctx, k)
            middle = st.slopes[st.d_ur : st.d_iw - st.d_ur]
            middle_ok &= len(middle) == d_new(ctx, k) and all(s == Fraction(k - 2, 2) for s in middle)
            middle_ok &= distribution_check(ctx, k).ok
            ds.append(kolmogorov_distance(11, st.normalized))
        trends[ctx.s_eps] = ds
    decreasing = all(all(y < x for x, y in zip(ds, ds[1:])) for ds in trends.values())
    t = clock.elapsed
    worst = {s: [f"{float(d):.4f}" for d in ds] for s, ds in trends.items() if not all(y < x for x, y in zip(ds, ds[1:]))}
    detail = f"middle slopes {'exact' if middle_ok else 'WRONG'}; Kolmogorov trend {'decreasing' if decreasing else 'not decreasing for s = ' + str(sorted(worst))}"
    _report(acceptance_lines, 8, middle_ok and decreasing, detail, t)
    assert middle_ok
    assert decreasing, worst


def test_criterion_09_halo(acceptance_lines):
    clock = Clock()
    reports = {p: _suite("halo", p, nmax=50) for p in (7, 11)}
    ok = all(r.passed for r in reports.values())
    t = clock.elapsed
    _report(acceptance_lines, 9, ok, "r in 1/2, 1/3, 2/3; n <= 50; increments strictly increasing", t)
    assert ok, {p: r.counterexample for p, r in reports.items()}


def test_criterion_10_harmonicity(acceptance_lines):
    clock = Clock()
    report = _suite("harmonic", 7, count=200, seed=0)
    t = clock.elapsed
    ok = report.passed and report.checked >= 200
    _report(acceptance_lines, 10, ok and t < 60, f"{report.checked} seeded (n, k0, mu)", t)
    assert ok, report.counterexample
    assert t < 60


def test_criterion_11_mahler(acceptance_lines):
    clock = Clock()
    report = run_suite("mahler", {"p": 7, "nmax": 200})
    t = clock.elapsed
    _report(acceptance_lines, 11, report.passed and t < 300, "Y bounds m <= n <= 147, B to 200, m_n to 300", t)
    assert report.passed, report.counterexample
    assert t < 300


def test_criterion_12_companion(acceptance_lines):
    clock = Clock()
    reports = {p: run_suite("companion", {"p": p, "nmax": 30}) for p in (7, 11)}
    ok = all(r.passed for r in reports.values())
    t = clock.elapsed
    checked = sum(r.checked for r in reports.values())
    _report(acceptance_lines, 12, ok, f"{checked} (a, s) data, n <= 30, p in 7/11", t)
    assert ok, {p: r.counterexample for p, r in reports.items()}


@pytest.mark.parametrize("p", [7, 11])
def test_companion_relations_cover_all_tags(p):
    from ghostslopes.ghost import companion_relation

    tags = {companion_relation(c) for c in GhostContext(p, 2).relevant()}
    assert tags == {"equal", "shift-up", "shift-down"}
