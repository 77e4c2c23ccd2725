"""Verification sweeps: build a list of keyed checks, run them, keep the smallest counterexample."""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from . import delta, mahler, theorems
from .ghost import GhostContext, d_iw_self, d_ur, multiplicity, weight
from .newton import WeightPoint
from .padic import INF
from .verdict import FAIL, INAPPLICABLE, Verdict

__all__ = ["Task", "SuiteReport", "SUITES", "run_suite", "run_tasks", "worker_count"]

WORKERS_ENV = "GHOSTSLOPES_WORKERS"


@dataclass(frozen=True)
class Task:
    key: tuple
    fn: Callable[..., Verdict]
    args: tuple = ()


@dataclass
class SuiteReport:
    suite: str
    checked: int = 0
    inapplicable: int = 0
    counterexample: Optional[dict] = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def as_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "checked": self.checked,
            "inapplicable": self.inapplicable,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        out.update(self.extra)
        return out


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def _call(task: Task) -> tuple[tuple, Verdict]:
    return task.key, task.fn(*task.args)


def run_tasks(name: str, tasks: Sequence[Task], workers: Optional[int] = None) -> SuiteReport:
    """Evaluate every task; the reported failure is the one with the smallest key."""
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_call, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_call(t) for t in tasks]
    report = SuiteReport(name)
    fails = []
    for key, v in results:
        report.checked += 1
        if v.status == INAPPLICABLE:
            report.inapplicable += 1
        elif v.status == FAIL:
            fails.append((key, v))
    if fails:
        key, v = min(fails, key=lambda kv: kv[0])
        report.counterexample = {"key": list(key), "reason": v.reason, **v.data}
    return report


def _contexts(p: int, a: Optional[int], s: Optional[int], b: int = 0) -> list[GhostContext]:
    a_values = range(1, p - 3) if a is None else [a]
    out = []
    for av in a_values:
        base = GhostContext(p, av, 0, b)
        out.extend(base.relevant() if s is None else [base.with_s(s)])
    return out


def _ck(ctx: GhostContext) -> tuple:
    return (ctx.a, ctx.s_eps)


# task builders; each takes the resolved config dict


def duality_tasks(cfg) -> list[Task]:
    return [
        Task(_ck(c) + (kb,), theorems.duality_check, (c, weight(c, kb)))
        for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"])
        for kb in range(cfg.get("kmax", 500) + 1)
    ]


def random_point(rng: random.Random, p: int, center_max: int = 3000) -> WeightPoint:
    center = rng.randrange(2, center_max)
    if rng.random() < 0.2:
        return WeightPoint(center, INF)
    return WeightPoint(center, Fraction(rng.randint(1, 30), rng.randint(1, 6)))


def _vertex(ctx, center, radius, nmax):
    return delta.vertex_agreement(ctx, WeightPoint(center, radius), nmax)


def vertex_tasks(cfg) -> list[Task]:
    tasks = []
    for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"]):
        rng = random.Random(f"{cfg.get('seed', 0)}:{c.p}:{c.a}:{c.s_eps}")
        for i in range(cfg.get("count", 500)):
            w = random_point(rng, c.p)
            tasks.append(Task(_ck(c) + (i,), _vertex, (c, w.center, w.radius, cfg.get("nmax", 20))))
    return tasks


def gouvea_tasks(cfg) -> list[Task]:
    return [
        Task(_ck(c) + (kb,), theorems.gouvea_bound_check, (c, weight(c, kb)))
        for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"])
        for kb in range(cfg.get("kmax", 300) + 1)
    ]


def gm_pairs(ctx: GhostContext, m: int, pairs: int, seed: int) -> list[tuple[int, int]]:
    """Seeded admissible pairs: congruent weights above m - 3 with v_p(k1 - k2) >= m."""
    rng = random.Random(f"gm:{seed}:{ctx.p}:{ctx.a}:{ctx.s_eps}:{m}")
    out = []
    while len(out) < pairs:
        k1 = weight(ctx, rng.randrange(0, 60))
        if k1 <= m - 3:
            continue
        k2 = k1 + (ctx.p - 1) * ctx.p**m * rng.randint(1, 3)
        out.append((k1, k2))
    return out


def gm_tasks(cfg) -> list[Task]:
    ms = cfg.get("m_values") or [cfg.get("m", 4)]
    tasks = []
    for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"]):
        for m in ms:
            for i, (k1, k2) in enumerate(gm_pairs(c, m, cfg.get("pairs", 50), cfg.get("seed", 0))):
                tasks.append(Task(_ck(c) + (m, i), theorems.gm_check, (c, k1, k2, m)))
    return tasks


DIST_KBULLETS = (50, 100, 200, 400)


def dist_tasks(cfg) -> list[Task]:
    kbs = cfg.get("kbullets") or DIST_KBULLETS
    return [
        Task(_ck(c) + (kb,), theorems.distribution_check, (c, weight(c, kb), cfg.get("slack")))
        for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"])
        for kb in kbs
    ]


def _dist_trend(cfg, report: SuiteReport) -> None:
    """Kolmogorov distances must strictly decrease along the k-bullet list."""
    kbs = sorted(cfg.get("kbullets") or DIST_KBULLETS)
    trends = {}
    for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"]):
        ds = [theorems.kolmogorov_distance(c.p, theorems.distribution(c, weight(c, kb)).normalized) for kb in kbs]
        trends[c.label()] = [f"{d.numerator}/{d.denominator}" for d in ds]
        if report.counterexample is None and any(y >= x for x, y in zip(ds, ds[1:])):
            report.counterexample = {"key": list(_ck(c)), "reason": "Kolmogorov distance not decreasing", "distances": trends[c.label()]}
    report.extra["kolmogorov"] = trends


HALO_RADII = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3))


def halo_tasks(cfg) -> list[Task]:
    radii = [Fraction(r) for r in cfg.get("radii") or HALO_RADII]
    return [
        Task(_ck(c) + (r,), theorems.halo_check, (c, r, cfg.get("nmax", 50)))
        for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"])
        for r in radii
    ]


def _y_row(p: int, n: int) -> Verdict:
    for m in range(n + 1):
        v = mahler.Y_bound_check(p, m, n)
        if not v:
            return v
    return Verdict.passed(n=n)


def mahler_tasks(cfg) -> list[Task]:
    p = cfg["p"]
    nmax = cfg.get("nmax", 200)
    tasks = [Task((0, n), _y_row, (p, n)) for n in range(min(nmax, 3 * p * p) + 1)]
    tasks += [Task((1, n), mahler.B_check, (p, n)) for n in range(nmax + 1)]
    tasks += [Task((2, n), mahler.m_poly_check, (p, n)) for n in range(max(nmax, 300) + 1)]
    tasks += [Task((3, n), mahler.integrality_check, (p, n, 50, cfg.get("seed", 0))) for n in range(min(nmax, 100) + 1)]
    tasks.append(Task((4, 0), mahler.Y_inverse_bound_check, (p, min(nmax, 100))))
    return tasks


def delta_tasks(cfg) -> list[Task]:
    return [
        Task(_ck(c) + (kb,), delta.delta_gap_sweep, (c, weight(c, kb)))
        for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"])
        for kb in range(cfg.get("kmax", 200) + 1)
    ]


def harmonic_triples(ctx: GhostContext, count: int, seed: int) -> list[tuple[int, int, int]]:
    rng = random.Random(f"harm:{seed}:{ctx.p}:{ctx.a}:{ctx.s_eps}")
    return [(rng.randint(1, 25), rng.randint(2, 400), rng.randint(1, 4)) for _ in range(count)]


def harmonic_tasks(cfg) -> list[Task]:
    return [
        Task(_ck(c) + (i,), delta.harmonicity_check, (c, n, k0, mu))
        for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"])
        for i, (n, k0, mu) in enumerate(harmonic_triples(c, cfg.get("count", 200), cfg.get("seed", 0)))
    ]


def _compat(ctx: GhostContext, k0: int, count: int) -> Verdict:
    v = theorems.theta_check(ctx, k0, count)
    if not v:
        return v
    if (k0 - ctx.k_eps) % (ctx.p - 1):
        return theorems.al_check(ctx, k0)
    return theorems.pstab_check(ctx, k0)


def al_theta_pstab_tasks(cfg) -> list[Task]:
    """theta at every weight up to the bound, AL off the congruence class, p-stabilization on it."""
    tasks = []
    for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"]):
        top = weight(c, cfg.get("kmax", 100))
        step = cfg.get("stride", 1)
        for k0 in range(2, top + 1, step):
            tasks.append(Task(_ck(c) + (k0,), _compat, (c, k0, cfg.get("count", 5))))
        for kb in range(cfg.get("kmax", 100) + 1):
            k0 = weight(c, kb)
            if (k0 - 2) % step:
                tasks.append(Task(_ck(c) + (k0,), _compat, (c, k0, cfg.get("count", 5))))
    return tasks


def _corank_k(ctx: GhostContext, k: int) -> Verdict:
    D, u = d_iw_self(ctx, k), d_ur(ctx, k)
    for n in range(u + 1, D - u):
        idx = list(range(1, n + 1))
        r, s, m = theorems.corank_bound(ctx, idx, idx, k)
        if m != multiplicity(ctx, n, k):
            return Verdict.failed(k=k, n=n, m=m, multiplicity=multiplicity(ctx, n, k))
    return Verdict.passed(k=k)


def corank_tasks(cfg) -> list[Task]:
    return [
        Task(_ck(c) + (kb,), _corank_k, (c, weight(c, kb)))
        for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"])
        for kb in range(cfg.get("kmax", 200) + 1)
    ]


def companion_tasks(cfg) -> list[Task]:
    return [
        Task(_ck(c), theorems.companion_check, (c, cfg.get("nmax", 30)))
        for c in _contexts(cfg["p"], cfg["a"], cfg["s_eps"], cfg["b"])
    ]


SUITES: dict[str, Callable[[dict], list[Task]]] = {
    "duality": duality_tasks,
    "vertex": vertex_tasks,
    "gouvea": gouvea_tasks,
    "gm": gm_tasks,
    "dist": dist_tasks,
    "halo": halo_tasks,
    "mahler": mahler_tasks,
    "delta": delta_tasks,
    "harmonic": harmonic_tasks,
    "al-theta-pstab": al_theta_pstab_tasks,
    "corank": corank_tasks,
    "companion": companion_tasks,
}


def run_suite(name: str, cfg: dict, workers: Optional[int] = None) -> SuiteReport:
    """Run a named suite; ``cfg`` needs p and may set a, s_eps, b and the sweep bounds."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = {"a": None, "s_eps": None, "b": 0, **{k: v for k, v in cfg.items() if v is not None}}
    report = run_tasks(name, SUITES[name](cfg), workers)
    if name == "dist":
        _dist_trend(cfg, report)
    return report
