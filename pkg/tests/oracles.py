"""Independent reference implementations used by the tests."""
from fractions import Fraction

import numpy as np

from cpmmg.casemodel import EssSpec
from cpmmg.dispatch.units import UnitData

Q = 0.05  # grid step, MW and MWh


def make_unit(ctrl, costs, wind=None, pv=None, de_cap=(), de_cost=(), ess=None, unctrl=None, forced=None,
              price=None, mg="MG", phi_ess=1):
    ctrl = np.atleast_2d(np.asarray(ctrl, dtype=float))
    R, T = ctrl.shape
    z = np.zeros((R, T))
    unctrl = z.copy() if unctrl is None else np.atleast_2d(np.asarray(unctrl, float))
    forced = z.copy() if forced is None else np.atleast_2d(np.asarray(forced, float))
    return UnitData(mg, np.arange(T), np.zeros(T) if wind is None else np.asarray(wind, float),
                    np.zeros(T) if pv is None else np.asarray(pv, float),
                    np.asarray(de_cap, float), np.asarray(de_cost, float), ess, phi_ess if ess else 0,
                    np.asarray(costs, float), ctrl + unctrl + forced, forced, ctrl, unctrl,
                    None if price is None else np.asarray(price, float))


def random_joint_instance(rng, T=3):
    """Two islanded MGs with storage, diesel and two priced segments; data on the Q grid."""
    units, soc0 = [], []
    for m in range(2):
        costs = np.sort(rng.choice([0.1, 0.15, 0.2, 2.0, 12.87, 15.1], 2, replace=False))
        ctrl = Q * rng.integers(0, 9, (2, T))
        ren = Q * rng.integers(0, 7, T)
        de_cap = [Q * rng.integers(0, 7)]
        de_cost = [float(rng.choice([0.05, 0.08, 0.3, 1.0, 5.0]))]
        kmax = int(rng.integers(2, 9))
        rate = Q * rng.integers(1, 5)
        ess = EssSpec(rate, rate, 1.0, 1.0, 0.0, Q * kmax, float(rng.choice([0.0, 0.002, 0.01])),
                      float(rng.choice([0.0, 0.002, 0.01])))
        units.append(make_unit(ctrl, costs, wind=ren, de_cap=de_cap, de_cost=de_cost, ess=ess, mg=f"MG{m + 1}"))
        soc0.append(Q * int(rng.integers(0, kmax + 1)))
    cap = Q * int(rng.integers(1, 9))
    lam = float(rng.choice([0.1, 0.5, 1.0]))
    return units, soc0, cap, lam


def _merit_cost(need, ren, options):
    """Cheapest way to close a balance gap of ``need`` MW (negative = surplus)."""
    if need < -ren - 1e-9:
        return np.inf
    if need <= 0:
        return 0.0
    cost = 0.0
    for c, cap in options:
        v = min(cap, need)
        cost += c * v
        need -= v
        if need <= 1e-12:
            return cost
    return np.inf


def grid_joint_optimum(units, soc0, cap, lam):
    """Brute force over Q-grid storage moves and Q-grid exchanges.

    For fixed storage moves and exchange the remaining single-hour problem of
    each MG is a merit-order fill, solved exactly.  Dynamic programming over
    the joint SOC grid enumerates every storage trajectory.
    """
    T = units[0].T
    ks = [int(round(u.ess.soc_max / Q)) for u in units]
    rates = [int(round(u.ess.max_charge / Q)) for u in units]
    xs = np.arange(-int(round(cap / Q)), int(round(cap / Q)) + 1)
    V = np.full((ks[0] + 1, ks[1] + 1), np.inf)
    V[int(round(soc0[0] / Q)), int(round(soc0[1] / Q))] = 0.0
    for t in range(T):
        tabs = []
        for m, u in enumerate(units):
            options = sorted([(float(u.de_cost[d]), float(u.de_cap[d])) for d in range(len(u.de_cap))]
                             + [(float(u.seg_cost[r]), float(u.ctrl[r, t])) for r in range(u.R)])
            ren = float(u.wind[t] + u.pv[t])
            load = float(u.serve[:, t].sum())
            ds = np.arange(-rates[m], rates[m] + 1)
            tab = np.empty((len(ds), len(xs)))
            sign = 1 if m == 0 else -1
            for i, d in enumerate(ds):
                move = d * Q
                ess_cost = move * u.ess.charge_cost if d > 0 else -move * u.ess.discharge_cost
                for j, x in enumerate(xs):
                    need = load - ren + move - sign * x * Q
                    tab[i, j] = ess_cost + _merit_cost(need, ren, options)
            tabs.append((ds, tab))
        (da, ta), (db, tb) = tabs
        G = (ta[:, None, :] + tb[None, :, :] + lam * Q * np.abs(xs)[None, None, :]).min(2)
        W = np.full_like(V, np.inf)
        for i, a in enumerate(da):
            for j, b in enumerate(db):
                if abs(a) > ks[0] or abs(b) > ks[1]:
                    continue
                src = V[max(0, -a):ks[0] + 1 - max(0, a), max(0, -b):ks[1] + 1 - max(0, b)]
                dst = W[max(0, a):ks[0] + 1 - max(0, -a), max(0, b):ks[1] + 1 - max(0, -b)]
                np.minimum(dst, src + G[i, j], out=dst)
        V = W
    return float(V.min())


def fraction_ibgc_sber(ex, ls, demand, costs, thr):
    """Exact rational re-implementation of the IbGC/SbER greedy."""
    ex = [Fraction(v) for v in ex]
    ls = [[Fraction(v) for v in row] for row in ls]
    demand = [[Fraction(v) for v in row] for row in demand]
    n = len(ex)
    ib = [[Fraction(0)] * len(c) for c in costs]
    sb = [[Fraction(0)] * len(c) for c in costs]
    for m in range(n):
        if ex[m] < 0 and sum(ls[m]) > 0:
            left = -ex[m]
            for r in reversed(range(len(costs[m]))):
                take = min(ls[m][r], left)
                ib[m][r] = take
                left -= take
    trigger = any(ex[m] < 0 and ls[m][r] > 0 and costs[m][r] >= thr
                  for m in range(n) for r in range(len(costs[m])))
    if trigger:
        for m in range(n):
            if ex[m] > 0:
                left = ex[m]
                for r in range(len(costs[m])):
                    take = max(min(demand[m][r] - ls[m][r], left), Fraction(0))
                    sb[m][r] = take
                    left -= take
    return ib, sb


def random_exchange_hour(rng, n_max=4, r_max=5):
    """Dyadic data so float arithmetic is exact and comparable with fractions."""
    n = int(rng.integers(2, n_max + 1))
    ex = [float(rng.integers(-40, 41)) / 64 for _ in range(n)]
    costs, ls, demand = [], [], []
    for _ in range(n):
        R = int(rng.integers(1, r_max + 1))
        c = np.sort(rng.choice([0.1, 0.12, 0.15, 0.2, 2.0, 12.87, 15.1], R, replace=False))
        d = rng.integers(0, 33, R) / 64
        shed = np.minimum(d, rng.integers(0, 33, R) / 64) * (rng.random(R) < 0.5)
        costs.append(c)
        demand.append(d)
        ls.append(shed)
    return ex, ls, demand, costs
