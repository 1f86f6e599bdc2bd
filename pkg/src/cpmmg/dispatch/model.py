"""One LP template for every optimisation-based schedule.

The normal-day, island-horizon, joint-step and joint-horizon problems only
differ in how the exchange variable is priced or fixed, whether the final
state of charge must return to its initial value, and whether the one-hour
storage-hold term is present.  :func:`build_dispatch_lp` covers all of them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lp import LpError, LpProblem
from .units import UnitData, UnitSchedule

UNCONTROLLED_FACTOR = 1000.0


@dataclass
class LpOptions:
    exchange: str = "none"  # none | market | pool
    terminal_soc: bool = False
    hold: tuple[float, float] | None = None  # (charge, discharge) multipliers
    lambda_ser: float = 0.0
    ex_lo: Sequence[np.ndarray] | None = None
    ex_hi: Sequence[np.ndarray] | None = None
    edges: Sequence[tuple[tuple[int, ...], float]] = ()
    name: str = "dispatch"


@dataclass
class LpIndex:
    w: list = field(default_factory=list)
    pv: list = field(default_factory=list)
    de: list = field(default_factory=list)
    ch: list = field(default_factory=list)
    dch: list = field(default_factory=list)
    soc: list = field(default_factory=list)
    sc: list = field(default_factory=list)
    su: list = field(default_factory=list)
    buy: list = field(default_factory=list)
    sell: list = field(default_factory=list)


def uncontrolled_penalty(units: Sequence[UnitData]) -> float:
    top = max((float(u.seg_cost.max()) for u in units if u.R), default=1.0)
    return UNCONTROLLED_FACTOR * (1.0 + top)


def build_dispatch_lp(units: Sequence[UnitData], soc0: Sequence[float | None],
                      opt: LpOptions) -> tuple[LpProblem, LpIndex]:
    p = LpProblem(opt.name)
    ix = LpIndex()
    pen = uncontrolled_penalty(units)
    T = units[0].T
    for k, u in enumerate(units):
        dt = u.dt
        D, R = len(u.de_cap), u.R
        w = p.add_vars(f"w{k}", T, 0.0, u.wind)
        pv = p.add_vars(f"pv{k}", T, 0.0, u.pv)
        de = p.add_vars(f"de{k}", (D, T), 0.0, np.repeat(u.de_cap[:, None], T, 1),
                        np.repeat(u.de_cost[:, None] * dt, T, 1))
        sc = p.add_vars(f"ls{k}", (R, T), 0.0, u.ctrl, np.repeat(u.seg_cost[:, None] * dt, T, 1))
        su = p.add_vars(f"lu{k}", (R, T), 0.0, u.unctrl, pen * dt)
        terms = [(w, 1.0), (pv, 1.0)] + [(de[d], 1.0) for d in range(D)]
        terms += [(sc[r], 1.0) for r in range(R)] + [(su[r], 1.0) for r in range(R)]
        ch = dch = soc = None
        if u.ess is not None:
            e = u.ess
            c_ch, c_dch = e.charge_cost * dt, e.discharge_cost * dt
            if opt.hold is not None:
                c_ch -= opt.hold[0] * e.charge_eff * dt
                c_dch += opt.hold[1] / e.discharge_eff * dt
            ch = p.add_vars(f"ch{k}", T, 0.0, e.max_charge * u.phi_ess, c_ch)
            dch = p.add_vars(f"dch{k}", T, 0.0, e.max_discharge * u.phi_ess, c_dch)
            soc = p.add_vars(f"soc{k}", T, e.soc_min, e.soc_max)
            s0 = float(np.clip(soc0[k], e.soc_min, e.soc_max))
            # soc_t - soc_{t-1} - eta_ch ch_t dt + dch_t dt / eta_dch = 0, soc_{-1} = s0
            rhs = np.zeros(T)
            rhs[0] = s0
            prev = np.concatenate([soc[:1], soc[:-1]])
            pcoef = np.full(T, -1.0)
            pcoef[0] = 0.0
            p.add_rows("eq", [(soc, 1.0), (prev, pcoef), (ch, -e.charge_eff * dt),
                              (dch, dt / e.discharge_eff)], rhs, f"soc{k}")
            if opt.terminal_soc:
                p.add_rows("eq", [(soc[[T - 1]], 1.0)], [s0], f"term{k}")
            terms += [(dch, 1.0), (ch, -1.0)]
        buy = sell = None
        if opt.exchange == "market":
            lo = -np.inf if opt.ex_lo is None else opt.ex_lo[k]
            hi = np.inf if opt.ex_hi is None else opt.ex_hi[k]
            price = u.price * dt
            buy = p.add_vars(f"buy{k}", T, 0.0, np.maximum(hi, 0.0), price)
            sell = p.add_vars(f"sell{k}", T, 0.0, np.maximum(-np.asarray(lo), 0.0), -price)
            terms += [(buy, 1.0), (sell, -1.0)]
        elif opt.exchange == "pool":
            buy = p.add_vars(f"buy{k}", T, 0.0, np.inf, opt.lambda_ser * dt)
            sell = p.add_vars(f"sell{k}", T, 0.0, np.inf)
            terms += [(buy, 1.0), (sell, -1.0)]
        p.add_rows("eq", terms, u.serve.sum(0), f"bal{k}")
        for name, v in (("w", w), ("pv", pv), ("de", de), ("ch", ch), ("dch", dch), ("soc", soc),
                        ("sc", sc), ("su", su), ("buy", buy), ("sell", sell)):
            getattr(ix, name).append(v)
    if opt.exchange == "pool":
        p.add_rows("eq", [(ix.buy[k], 1.0) for k in range(len(units))]
                   + [(ix.sell[k], -1.0) for k in range(len(units))], np.zeros(T), "pool")
        for e, (side, cap) in enumerate(opt.edges):
            if not side:
                continue
            terms = [(ix.buy[k], 1.0) for k in side] + [(ix.sell[k], -1.0) for k in side]
            p.add_rows("ub", terms, np.full(T, cap), f"line{e}p")
            p.add_rows("ub", [(c, -v) for c, v in terms], np.full(T, cap), f"line{e}n")
    return p, ix


def extract(units: Sequence[UnitData], soc0, ix: LpIndex, x: np.ndarray) -> list[UnitSchedule]:
    out = []
    for k, u in enumerate(units):
        T = u.T
        z = np.zeros(T)
        ch = x[ix.ch[k]] if ix.ch[k] is not None else z.copy()
        dch = x[ix.dch[k]] if ix.dch[k] is not None else z.copy()
        if ix.soc[k] is not None:
            soc = _soc_path(u, float(np.clip(soc0[k], u.ess.soc_min, u.ess.soc_max)), ch, dch)
            s0 = float(np.clip(soc0[k], u.ess.soc_min, u.ess.soc_max))
        else:
            s0 = soc0[k]
            soc = np.full(T, np.nan if s0 is None else s0)
        ex = (x[ix.buy[k]] - x[ix.sell[k]]) if ix.buy[k] is not None else z.copy()
        out.append(UnitSchedule(u, x[ix.de[k]].reshape(len(u.de_cap), T), ch, dch, x[ix.w[k]], x[ix.pv[k]],
                                ex, x[ix.sc[k]].reshape(u.R, T), x[ix.su[k]].reshape(u.R, T), soc, s0))
    return out


def _soc_path(u: UnitData, s0: float, ch, dch) -> np.ndarray:
    e = u.ess
    path = s0 + np.cumsum((ch * e.charge_eff - dch / e.discharge_eff) * u.dt)
    return np.clip(path, e.soc_min, e.soc_max)


def solve_dispatch(units: Sequence[UnitData], soc0, opt: LpOptions, dump=None) -> tuple[list[UnitSchedule], float]:
    p, ix = build_dispatch_lp(units, soc0, opt)
    if dump is not None:
        dump(p)
    sol = p.solve()
    if not sol.ok:
        raise LpError(f"{opt.name}: {sol.status} ({sol.message})")
    return extract(units, soc0, ix, sol.x), sol.objective
