"""Acceptance checks, one test per criterion; each prints a PASS/FAIL line."""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from cpmmg.adequacy import coefficient_of_variation, run_ibgc_sber
from cpmmg.casemodel import parse_case_document
from cpmmg.cybernet import Scenario
from cpmmg.dispatch.config import DispatchConfig, JointDispatchConfig, PredictionPolicy
from cpmmg.dispatch.joint import joint_horizon
from cpmmg.dispatch.network import ps_allocate
from cpmmg.dispatch.normal import NormalCache
from cpmmg.engine import Simulation, SimulationConfig, simulate
from conftest import single_mg_doc
from oracles import fraction_ibgc_sber, grid_joint_optimum, random_exchange_hour, random_joint_instance


@pytest.fixture(scope="module")
def cache():
    return NormalCache()


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}")
    return emit


def _run(case, series, cache, years, seed, **kw):
    return Simulation(case, series, SimulationConfig(years=years, seed=seed, **kw), cache).run()


def test_criterion_1_analytic_unavailability(report):
    lam, mu, years = 1.0, 100.0, 2000
    case = parse_case_document(single_mg_doc(lam=lam, mu=mu, peak=1.0))
    t0 = time.perf_counter()
    r = simulate(case, config=SimulationConfig(years=years, seed=0))
    wall = time.perf_counter() - t0
    expect = 8760 * lam / (lam + mu)
    err = abs(r.total - expect) / expect
    ok = err <= 0.05 and wall < 30
    report(1, ok, f"EENS {r.total:.3f} vs {expect:.3f} MWh/yr (error {err:.2%}), {wall:.1f} s")
    assert ok


def test_criterion_2_lp_against_grid_search(report):
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(50):
        units, soc0, cap, lam = random_joint_instance(np.random.default_rng(1000 + seed))
        _, obj = joint_horizon(units, soc0, JointDispatchConfig(lambda_ser=lam), edges=[((1,), cap)])
        ref = grid_joint_optimum(units, soc0, cap, lam)
        # the LP relaxes the grid, so it may only be cheaper, never dearer
        assert obj <= ref + 1e-9
        worst = max(worst, abs(obj - ref) / max(abs(ref), 1e-9))
    wall = time.perf_counter() - t0
    ok = worst <= 1e-3 and wall < 60
    report(2, ok, f"50 instances, worst relative gap {worst:.2e}, {wall:.1f} s")
    assert ok


def test_criterion_3_ibgc_sber_rational_oracle(report):
    rng = np.random.default_rng(2024)
    bad = 0
    for _ in range(1000):
        ex, ls, demand, costs = random_exchange_hour(rng)
        ib, sb = run_ibgc_sber(ex, ls, demand, costs, 2.0)
        oib, osb = fraction_ibgc_sber(ex, ls, demand, costs, 2.0)
        got_ib = [[Fraction(float(v)) for v in row] for row in ib]
        got_sb = [[Fraction(float(v)) for v in row] for row in sb]
        bad += (got_ib != oib) or (got_sb != osb)
    report(3, bad == 0, f"1000 joint-operation hours, {bad} mismatches")
    assert bad == 0


def test_criterion_4_proportional_shares(report):
    rng = np.random.default_rng(77)
    worst_flow = worst_ratio = 0.0
    for _ in range(1000):
        sign = rng.choice([-1.0, 1.0])
        claims = sign * rng.uniform(0.01, 2.0, rng.integers(1, 7))
        # counterflow below the claims and capacity below the net claim: the line is over-claimed
        counter = -sign * rng.dirichlet(np.ones(2))[:rng.integers(0, 3)] * rng.uniform(0, 0.9) * np.abs(claims).sum()
        cap = rng.uniform(0.0, 0.99) * (np.abs(claims).sum() - np.abs(counter).sum())
        alloc = ps_allocate(claims, cap, counter)
        flow = abs(alloc.sum() + counter.sum())
        # post-allocation same-direction total = capacity + counterflow
        worst_flow = max(worst_flow, abs(np.abs(alloc).sum() - (cap + np.abs(counter).sum())))
        worst_flow = max(worst_flow, abs(flow - cap))
        for i in range(len(claims)):
            for j in range(i + 1, len(claims)):
                worst_ratio = max(worst_ratio, abs(alloc[i] / alloc[j] - claims[i] / claims[j]))
    ok = worst_flow <= 1e-9 and worst_ratio <= 1e-9
    report(4, ok, f"1000 instances, flow error {worst_flow:.1e}, ratio error {worst_ratio:.1e}")
    assert ok


def test_criterion_5_paired_scenario_trends(bundled, bundled_series, cache, report):
    t0 = time.perf_counter()
    fails = []
    rows = []
    for seed in range(10):
        r = {name: _run(bundled, bundled_series, cache, 200, seed, scenario=sc).total for name, sc in [
            ("default", Scenario()), ("ideal", Scenario(ideal_cyber=True)),
            ("no_protection", Scenario(no_internal_protection=True)), ("backup", Scenario(backup_supply=True))]}
        rows.append(r)
        if not r["ideal"] <= r["default"]:
            fails.append((seed, "ideal > default"))
        if not r["no_protection"] >= r["default"] >= r["backup"]:
            fails.append((seed, "protection ordering"))
    wall = time.perf_counter() - t0
    ok = not fails and wall < 600
    mean = {k: np.mean([r[k] for r in rows]) for k in rows[0]}
    report(5, ok, "10 seeds x 200 years, mean EENS " + ", ".join(f"{k} {v:.2f}" for k, v in mean.items())
           + f", violations {fails}, {wall:.0f} s")
    assert ok


def test_criterion_6_convergence_rate(bundled, bundled_series, cache, report):
    r = _run(bundled, bundled_series, cache, 1600, 6)
    y = r.yearly_totals
    covs = {n: coefficient_of_variation(y[:n]) for n in (100, 400, 1600)}
    scaled = {n: covs[n] * math.sqrt(n) / (covs[100] * math.sqrt(100)) for n in covs}
    ok = covs[100] > covs[400] > covs[1600] and all(0.5 <= s <= 2.0 for s in scaled.values())
    report(6, ok, "CoV " + ", ".join(f"N={n}: {c:.4f}" for n, c in covs.items())
           + "; CoV*sqrt(N) relative to N=100: " + ", ".join(f"{s:.2f}" for s in scaled.values()))
    assert ok


def test_criterion_7_tini_sensitivity(bundled, bundled_series, cache, report):
    tot = {}
    for t_ini in (1, 5):
        disp = DispatchConfig(prediction=PredictionPolicy(t_ini=t_ini))
        tot[t_ini] = _run(bundled, bundled_series, cache, 500, 7, dispatch=disp).total
    change = abs(tot[5] - tot[1]) / tot[1]
    ok = change < 0.05
    report(7, ok, f"EENS {tot[1]:.4f} (t_ini 1) vs {tot[5]:.4f} (t_ini 5), change {change:.3%}")
    assert ok


def test_criterion_8_invariants(bundled, bundled_series, cache, report):
    sim = Simulation(bundled, bundled_series, SimulationConfig(years=100, seed=8, check_invariants=True), cache)
    sim.run()
    mon = sim.monitor
    ok = mon.ok and mon.hours > 0 and mon.contexts > 0
    report(8, ok, f"{mon.hours} dispatched unit-hours, {mon.contexts} operation contexts, "
                  f"{len(mon.violations)} violations")
    assert ok, mon.violations[:10]
