"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The Euler criterion builds (or reuses) the cached 25000-cell first-order
reference; the first build takes a minute or two.
"""

import math
import time

import numpy as np
import pytest

from nvdlab.analysis import ConvergenceTable, error_norms, observed_order
from nvdlab.burgers import burgers_run, sine_wave_problem, total_variation, viscous_sine_problem
from nvdlab.config import FULL_SCALE_EULER_CELLS, RunConfig, make_config
from nvdlab.grid import Periodic
from nvdlab.reference import (
    bessel_jn,
    burgers_characteristics,
    euler_reference_first_order,
    platzman_u,
    solve_dambreak,
)
from nvdlab.schemes import HIGH_RESOLUTION, SchemeId, adb_breakpoints, face_value_normalized
from nvdlab.study import convergence_study, restrict
from nvdlab.systems import dam_break_problem, system_run, titarev_toro_problem
from test_reference import jn_power_series

ADB, WACEB, CUBISTA, FOU = SchemeId.ADBQUICKEST, SchemeId.WACEB, SchemeId.CUBISTA, SchemeId.FOU


@pytest.fixture
def verdict(record_property):
    def _verdict(label, ok, detail):
        record_property("criterion", label)
        record_property("detail", detail)
        print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, detail

    return _verdict


def test_criterion_01_limiter_exactness(verdict):
    t0 = time.perf_counter()
    examples = [
        (WACEB, 0.5, None, 0.75),
        (WACEB, 0.9, None, 1.0),
        (CUBISTA, 0.2, None, 0.35),
        (ADB, 0.5, 0.5, 0.625),
        (ADB, -0.2, 0.5, -0.2),
    ]
    worst = max(abs(face_value_normalized(s, p, th) - want) for s, p, th, want in examples)
    ctx = adb_breakpoints(0.5)
    exact_breaks = (ctx.a, ctx.b) == (0.25, 0.75)
    dt = time.perf_counter() - t0
    verdict("1 limiter exactness", worst <= 1e-15 and exact_breaks,
            f"max point error {worst:.1e}, breakpoints(0.5)=({ctx.a}, {ctx.b}), {dt * 1e3:.1f} ms")


def test_criterion_02_limiter_region(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    thetas = np.round(np.arange(1, 11) * 0.1, 10)
    box_ok = identity_ok = True
    for s in HIGH_RESOLUTION:
        for th in thetas:
            p = rng.uniform(0.0, 1.0, 10_000)
            f = face_value_normalized(s, p, th)
            box_ok &= bool(np.all((p <= f) & (f <= np.minimum(2.0 * p, 1.0))))
            out = np.concatenate([rng.uniform(-10, 0, 5000), rng.uniform(1, 10, 5000)])
            out = out[(out < 0) | (out > 1)]
            identity_ok &= bool(np.array_equal(face_value_normalized(s, out, th), out))
    gap = 0.0
    for th in thetas[:-1]:
        c = adb_breakpoints(th)
        for x in (c.a, c.b):
            lo = face_value_normalized(ADB, np.nextafter(x, -1.0), th)
            hi = face_value_normalized(ADB, np.nextafter(x, 2.0), th)
            at = face_value_normalized(ADB, x, th)
            gap = max(gap, abs(lo - at), abs(hi - at))
    dt = time.perf_counter() - t0
    ok = box_ok and identity_ok and gap <= 1e-12 and dt < 1.0
    verdict("2 limiter region", ok,
            f"CBC box {box_ok}, identity outside {identity_ok}, ADB jump at a,b {gap:.1e}, {dt:.2f} s")


@pytest.fixture(scope="module")
def table1():
    cfg = RunConfig().resolve("converge")
    assert cfg.theta == 0.2 and cfg.t_eval == 0.5 and cfg.meshes == (10, 20, 40, 80, 160)
    t0 = time.perf_counter()
    tables = {s: convergence_study(cfg, s) for s in (WACEB, CUBISTA, ADB)}
    return tables, time.perf_counter() - t0


def test_criterion_03a_errors_decrease(verdict, table1):
    tables, dt = table1
    bad = []
    for s, t in tables.items():
        for norm in ("l1", "l2", "linf"):
            e = t.errors(norm)
            if not all(b < a for a, b in zip(e, e[1:])):
                bad.append(f"{s.value}/{norm}")
    verdict("3a errors strictly decrease", not bad and dt < 10.0,
            f"non-monotone: {bad or 'none'}, study {dt:.2f} s")


def test_criterion_03b_adb_beats_waceb(verdict, table1):
    tables, _ = table1
    adb, wac = tables[ADB].errors("l1"), tables[WACEB].errors("l1")
    losing = [(n, a, w) for n, a, w in zip(tables[ADB].n_cells, adb, wac) if a > w]
    detail = ", ".join(f"N={n}: ADB {a:.4g} > WACEB {w:.4g}" for n, a, w in losing) or "ADB <= WACEB at all meshes"
    verdict("3b ADBQUICKEST L1 <= WACEB L1 at every mesh", not losing, detail)


def test_criterion_03c_orders(verdict, table1):
    tables, _ = table1
    p_adb = tables[ADB].orders("l1")[-1]
    others = {s.value: [round(p, 2) for p in tables[s].orders("l1")[1:]] for s in (WACEB, CUBISTA)}
    in_band = all(0.7 <= p <= 1.6 for ps in others.values() for p in ps)
    verdict("3c observed orders", p_adb >= 0.9 and in_band,
            f"ADB finest-pair L1 order {p_adb:.2f}; WACEB/CUBISTA L1 orders (all pairs) {others}")


def test_criterion_04_order_formula(verdict):
    p = observed_order(0.0157, 0.00708)
    verdict("4 order formula", abs(p - 1.149) <= 0.01, f"observed_order(0.0157, 0.00708) = {p:.4f}")


def test_criterion_05_sine_wave_shock(verdict):
    t0 = time.perf_counter()
    linf, tv_rise = {}, {}
    for s in (WACEB, CUBISTA, ADB):
        state = {"tv": None, "rise": -np.inf}

        def watch(t, k, u, state=state):
            tv = total_variation(u[2:-2], periodic=True)
            if state["tv"] is not None:
                state["rise"] = max(state["rise"], tv - state["tv"])
            state["tv"] = tv

        prob = sine_wave_problem(400, s, 0.5, 1.0)
        u0 = np.sin(prob.grid.centers)
        state["tv"] = total_variation(u0, periodic=True)
        res = burgers_run(prob, callback=watch)
        linf[s] = error_norms(res.u, platzman_u(res.x, 1.0, 500)).linf
        tv_rise[s] = state["rise"]
    dt = time.perf_counter() - t0
    ok = linf[ADB] < linf[WACEB] and linf[ADB] < linf[CUBISTA] and tv_rise[ADB] <= 1e-10 and dt < 30.0
    verdict("5 sine wave to shock", ok,
            "rel Linf " + ", ".join(f"{s.value} {v:.4f}" for s, v in linf.items())
            + f"; max TV rise per step ADB {tv_rise[ADB]:.1e} (WACEB {tv_rise[WACEB]:.1e}, "
            f"CUBISTA {tv_rise[CUBISTA]:.1e}); {dt:.1f} s")


def test_criterion_06_viscous_burgers(verdict):
    t0 = time.perf_counter()
    times = (0.1, 0.3, 0.5, 0.7, 0.9)
    overshoot, sign_changes = {}, None
    for nu in (0.1, 1e-4):
        res = burgers_run(viscous_sine_problem(nu, 400, ADB, 0.5, 0.9), snapshot_times=times)
        assert sorted(res.snapshots) == list(times)
        overshoot[nu] = max(float(np.max(np.abs(u))) - 1.0 for u in res.snapshots.values())
        if nu == 1e-4:
            du = np.diff(res.snapshots[0.9])
            du = du[np.abs(du) > 1e-12]
            sign_changes = int(np.sum(np.sign(du[1:]) != np.sign(du[:-1])))
    dt = time.perf_counter() - t0
    ok = overshoot[1e-4] <= 1e-8 and overshoot[0.1] <= 1e-8 and dt < 60.0
    verdict("6 viscous Burgers snapshots", ok,
            f"max |u| - 1: nu=0.1 {overshoot[0.1]:.1e}, nu=1e-4 {overshoot[1e-4]:.1e}; "
            f"slope sign changes at t=0.9 (nu=1e-4) {sign_changes}; {dt:.1f} s")


def test_criterion_07_euler_shock_sine(verdict):
    t0 = time.perf_counter()
    ref = euler_reference_first_order(titarev_toro_problem(25000, FOU), 25000)
    t_ref = time.perf_counter() - t0
    rho_ref = restrict(ref.U, 2500)[0]
    dist, pmin = {}, {}
    for s in (FOU, ADB):
        res = system_run(titarev_toro_problem(2500, s, 0.6, 5.0))
        W = res.primitive
        pmin[s] = (float(W[0].min()), float(W[2].min()))
        dist[s] = error_norms(W[0], rho_ref).l1
    full = make_config({"problem": "euler", "full_scale": "true"}).resolve().n_cells
    dt = time.perf_counter() - t0
    ok = dist[ADB] < dist[FOU] and all(r > 0 and p > 0 for r, p in pmin.values())
    ok = ok and full == FULL_SCALE_EULER_CELLS == 12500
    verdict("7 Euler shock / sine wave", ok,
            f"rel L1(rho) to FOU-25000: ADB {dist[ADB]:.3e} vs FOU {dist[FOU]:.3e}; "
            f"min (rho, p) ADB {pmin[ADB][0]:.3f}, {pmin[ADB][1]:.3f}; "
            f"full-scale flag -> {full} cells; {dt:.0f} s (reference {t_ref:.0f} s)")


def test_criterion_08_dam_break(verdict):
    t0 = time.perf_counter()
    sol = solve_dambreak(1.0, 0.1, 9.81)
    rh = max(max(v) for v in sol.rankine_hugoniot_residuals().values())
    meshes = (100, 200, 400, 800)
    reports = []
    for n in meshes:
        res = system_run(dam_break_problem(n, ADB, 0.6))
        h_exact, _ = sol.sample(res.x / res.t)
        reports.append(error_norms(res.primitive[0], h_exact, "adbquickest", "swe"))
    table = ConvergenceTable("adbquickest", "swe", reports)
    e = table.errors("l1")
    orders = table.orders("l1")[1:]
    fit = -np.polyfit(np.log2(meshes), np.log2(e), 1)[0]
    dt = time.perf_counter() - t0
    decreasing = all(b < a for a, b in zip(e, e[1:]))
    ok = decreasing and min(orders) >= 0.7 and rh <= 1e-10 and dt < 30.0
    verdict("8 SWE dam break", ok,
            "rel L1(h) " + ", ".join(f"{n}:{v:.3e}" for n, v in zip(meshes, e))
            + "; pair orders " + ", ".join(f"{p:.2f}" for p in orders)
            + f" (least-squares slope {fit:.2f}); RH residual {rh:.1e}; {dt:.1f} s")


def test_criterion_09_conservation_determinism(verdict):
    drift = {}

    def watcher(key, sums0, n):
        prev = {"s": sums0}

        def cb(t, k, q):
            comps = q[..., 2:-2] if q.ndim == 1 else q[:, 2:-2]
            s = np.array([math.fsum(c) for c in np.atleast_2d(comps)])
            drift[key] = max(drift.get(key, 0.0), float(np.max(np.abs(s - prev["s"]))) / n)
            prev["s"] = s

        return cb

    burg = sine_wave_problem(400, ADB, 0.5, 1.5)
    u0 = np.sin(burg.grid.centers)
    r1 = burgers_run(burg, callback=watcher("burgers", np.array([math.fsum(u0)]), 400))
    r2 = burgers_run(burg)

    eul = titarev_toro_problem(400, ADB, 0.6, 1.0).with_changes(left=Periodic(), right=None)
    U0 = eul.ic.sample(eul.grid.centers, eul.model)
    e1 = system_run(eul, callback=watcher("euler", np.array([math.fsum(c) for c in U0]), 400))
    e2 = system_run(eul)

    same = r1.u.tobytes() == r2.u.tobytes() and e1.U.tobytes() == e2.U.tobytes()
    ok = same and drift["burgers"] <= 1e-12 and drift["euler"] <= 1e-12
    verdict("9 conservation and determinism", ok,
            f"max per-step |sum change|/N: burgers {drift['burgers']:.1e}, euler {drift['euler']:.1e}; "
            f"repeat runs bitwise identical: {same}")


def test_criterion_10_oracles(verdict):
    rng = np.random.default_rng(10)
    x = rng.uniform(0.0, 2.0 * np.pi, 100)
    series_gap = max(float(np.max(np.abs(platzman_u(x, t) - burgers_characteristics(x, t))))
                     for t in np.linspace(0.05, 0.9, 18))
    bessel_gap = max(abs(bessel_jn(n, xv) - jn_power_series(n, xv))
                     for n in range(21) for xv in np.linspace(-10, 10, 81))
    rec_gap = 0.0
    for _ in range(300):
        n = int(rng.integers(1, 500))
        xv = float(rng.uniform(-500, 500))
        lhs = bessel_jn(n - 1, xv) + bessel_jn(n + 1, xv)
        rhs = 2 * n / xv * bessel_jn(n, xv)
        rec_gap = max(rec_gap, abs(lhs - rhs) / max(1.0, abs(rhs)))
    ok = series_gap <= 1e-6 and bessel_gap <= 1e-12 and rec_gap <= 1e-9
    verdict("10 oracle cross-validation", ok,
            f"series vs characteristics {series_gap:.1e}; J_n vs power series {bessel_gap:.1e}; "
            f"recurrence {rec_gap:.1e}")
