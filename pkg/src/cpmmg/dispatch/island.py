"""Islanded operation of a single microgrid.

Before a repair-time prediction exists the microgrid follows a one-hour rule
cascade; afterwards it solves the day-ahead LP over the predicted horizon
with no exchange and a free final state of charge.
"""
from __future__ import annotations

import numpy as np

from .model import LpOptions, solve_dispatch
from .units import UnitData, UnitSchedule


def merit_fill(caps, costs, need: float) -> np.ndarray:
    """Cheapest-first dispatch of ``need`` MW; ties go to the lower index."""
    caps = np.asarray(caps, dtype=float)
    out = np.zeros_like(caps)
    order = sorted(range(len(caps)), key=lambda k: (costs[k], k))
    for k in order:
        if need <= 0:
            break
        out[k] = min(caps[k], need)
        need -= out[k]
    return out


def charge_headroom(unit: UnitData, soc: float) -> float:
    e = unit.ess
    if e is None:
        return 0.0
    return min(e.max_charge, max(e.soc_max - soc, 0.0) / (e.charge_eff * unit.dt)) * unit.phi_ess


def discharge_headroom(unit: UnitData, soc: float) -> float:
    e = unit.ess
    if e is None:
        return 0.0
    return min(e.max_discharge, max(soc - e.soc_min, 0.0) * e.discharge_eff / unit.dt) * unit.phi_ess


def island_conservative_step(unit: UnitData, soc_prev: float | None, reserve_cost: float | None = None,
                             ) -> UnitSchedule:
    """One-hour rule cascade for an islanded microgrid (``unit.T == 1``).

    Cases, with ``zeta`` the load net of available renewables:

    I    renewables cover load plus full charging: diesel off, charge fully,
         curtail renewables to balance.
    II   ``zeta + charge`` within diesel capacity: charge fully, diesel at merit.
    III  ``zeta`` within diesel capacity: diesel at maximum, surplus charges.
    IV   diesel plus discharge covers ``zeta``: diesel at maximum, discharge rest.
    V    otherwise diesel and discharge at maximum, shed cheapest segments.

    With ``reserve_cost`` set, storage in cases IV/V only serves the part of
    the gap that would otherwise shed segments costing at least that much.
    """
    if unit.T != 1:
        raise ValueError("conservative step takes a one-hour unit")
    dt = unit.dt
    soc = soc_prev if unit.ess is not None else None
    load = float(unit.serve.sum())
    W, PV = float(unit.wind[0]), float(unit.pv[0])
    zeta = load - (W + PV)
    pch = charge_headroom(unit, soc) if soc is not None else 0.0
    pdch = discharge_headroom(unit, soc) if soc is not None else 0.0
    de_total = float(unit.de_cap.sum())
    D, R = len(unit.de_cap), unit.R
    de = np.zeros(D)
    ch = dch = 0.0
    w, pv = W, PV
    shed_c = np.zeros(R)
    shed_u = np.zeros(R)
    if zeta + pch <= 0:
        case = "I"
        ch = pch
        target = load + pch
        f = target / (W + PV) if W + PV > 0 else 0.0
        w, pv = W * f, PV * f
    elif zeta + pch <= de_total:
        case = "II"
        ch = pch
        de = merit_fill(unit.de_cap, unit.de_cost, zeta + pch)
    elif zeta <= de_total:
        case = "III"
        de = unit.de_cap.astype(float).copy()
        ch = de_total - zeta
    elif zeta <= de_total + pdch and reserve_cost is None:
        case = "IV"
        de = unit.de_cap.astype(float).copy()
        dch = zeta - de_total
    else:
        de = unit.de_cap.astype(float).copy()
        gap = zeta - de_total
        ctrl = unit.ctrl[:, 0]
        if reserve_cost is not None:
            cheap = float(ctrl[unit.seg_cost < reserve_cost].sum())
            dch = min(pdch, max(0.0, gap - cheap))
        else:
            dch = pdch
        gap -= dch
        case = "IV" if gap <= 1e-12 else "V"
        order = sorted(range(R), key=lambda r: (unit.seg_cost[r], r))
        for r in order:
            if gap <= 0:
                break
            shed_c[r] = min(ctrl[r], gap)
            gap -= shed_c[r]
        for r in order:  # last resort: loads whose controller is unreachable
            if gap <= 1e-12:
                break
            shed_u[r] = min(unit.unctrl[r, 0], gap)
            gap -= shed_u[r]
    if soc is not None:
        e = unit.ess
        new = soc + (ch * e.charge_eff - dch / e.discharge_eff) * dt
        new = float(np.clip(new, e.soc_min, e.soc_max))
    else:
        new = soc_prev
    s = UnitSchedule(unit, de[:, None], np.array([ch]), np.array([dch]), np.array([w]), np.array([pv]),
                     np.zeros(1), shed_c[:, None], shed_u[:, None],
                     np.array([new if new is not None else np.nan]), soc_prev, {"case": case})
    return s


def island_horizon(unit: UnitData, soc_start: float | None, dump=None) -> UnitSchedule:
    """Horizon LP with zero exchange and free terminal state of charge."""
    (s,), _ = solve_dispatch([unit], [soc_start], LpOptions(exchange="none", name=f"island_{unit.mg}"), dump)
    return s
