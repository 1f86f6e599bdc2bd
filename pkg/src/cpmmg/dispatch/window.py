"""Dispatch of one contingency window across all of its zones."""
from __future__ import annotations

import itertools
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from ..adequacy import AdequacyLedger, run_ibgc_sber
from ..casemodel import CaseModel
from ..cybernet import AvailabilityFrame
from ..sampler import HOURS
from ..zoning import IO, JO, NO, OperationContext, Zone
from .config import DispatchConfig
from .island import island_conservative_step, island_horizon
from .joint import joint_horizon, joint_step
from .normal import NormalScheduler
from .units import Plant, UnitSchedule, concat_schedules


class LpDumper:
    """Writes every LP of a run as numbered ``.lp`` files."""

    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.count = itertools.count()

    def __call__(self, problem) -> None:
        k = next(self.count)
        (self.dir / f"{k:06d}_{problem.name}.lp").write_text(problem.to_lp_text())


def horizon_segments(policy, n: int, first: int):
    """Yield ``(exec_start, exec_end, horizon_end)`` covering ``[first, n)``.

    Horizons come from the prediction policy; an execution segment stops at
    the next scheduled update or at the predicted end, whichever is first.
    """
    cur = first
    updates = policy.update_points(0, n)
    while cur < n:
        hz = policy.predicted_end(cur, n)
        nxt = min([u for u in updates if u > cur] + [hz, n])
        yield cur, nxt, hz
        cur = nxt


class WindowRunner:
    def __init__(self, case: CaseModel, plant: Plant, normal: NormalScheduler, ledger: AdequacyLedger,
                 config: DispatchConfig | None = None, monitor=None):
        self.case = case
        self.plant = plant
        self.normal = normal
        self.ledger = ledger
        self.config = config or DispatchConfig()
        self.monitor = monitor
        self.mean_price = plant.series.mean_price
        self.dump = LpDumper(self.config.lp_dump_dir) if self.config.lp_dump_dir else None

    # ------------------------------------------------------------------
    def run_window(self, ctx: OperationContext, frame: AvailabilityFrame, year: int, start: int, end: int,
                   soc_start: Callable[[str], float | None]) -> dict:
        """Dispatch ``[start, end)`` of ``year``; returns end-of-window SOC by MG."""
        case = self.case
        hours = np.arange(start, end, dtype=np.int64) + year * HOURS
        soc_out: dict[str, float | None] = {}
        if self.monitor is not None:
            self.monitor.check_context(case, ctx)
        for m in case.microgrids:
            tag = m.tag
            if tag in ctx.shutdown:
                live = set(m.section_ids)
                self.ledger.record_shedding(year, tag, self.plant.section_demand(tag, hours, live), "SD")
                soc_out[tag] = soc_start(tag)  # storage holds its charge
                continue
            dead = ctx.dead.intersection(m.section_ids)
            if dead:
                self.ledger.record_shedding(year, tag, self.plant.section_demand(tag, hours, dead), "SD")
                if m.ess is not None and m.ess.section in dead:
                    soc_out[tag] = soc_start(tag)
        for z in ctx.zones:
            if not z.parts:
                continue
            if z.mode == NO:
                self._normal_zone(z, frame, year, hours, soc_out)
            elif z.mode == IO:
                self._island_zone(z, frame, year, hours, soc_start, soc_out)
            elif z.mode == JO:
                self._joint_zone(z, frame, year, hours, soc_start, soc_out)
        return soc_out

    # ------------------------------------------------------------------
    def _normal_zone(self, z: Zone, frame, year, hours, soc_out) -> None:
        units = [self.plant.unit(p.mg, hours, frame, p.sections) for p in z.parts]
        for u in units:
            if u.forced.any():
                self.ledger.record_shedding(year, u.mg, u.forced, "GC", u.dt)
        # supplier shortfall (only reachable with a small backup capacity)
        demand = sum(u.serve.sum(0) for u in units)
        supply = z.capacity + sum(u.wind + u.pv + u.de_cap.sum() for u in units)
        short = np.maximum(demand - supply, 0.0)
        if short.any():
            segs = sorted(((c, k, r) for k, u in enumerate(units) for r, c in enumerate(u.seg_cost)))
            shed = [np.zeros_like(u.ctrl) for u in units]
            for t in np.flatnonzero(short > 0):
                gap = short[t]
                for src in ("ctrl", "unctrl"):  # uncontrollable load only as a last resort
                    for c, k, r in segs:
                        if gap <= 0:
                            break
                        v = min(getattr(units[k], src)[r, t], gap)
                        shed[k][r, t] += v
                        gap -= v
            for u, s in zip(units, shed):
                self.ledger.record_shedding(year, u.mg, s, "GC", u.dt)
        for p, u in zip(z.parts, units):
            if u.has_ess:
                soc_out[p.mg] = self.normal.soc_at(p.mg, int(hours[-1]) + 1)

    def _island_zone(self, z: Zone, frame, year, hours, soc_start, soc_out) -> None:
        part = z.parts[0]
        unit = self.plant.unit(part.mg, hours, frame, part.sections)
        soc = soc_start(part.mg) if unit.has_ess else None
        T = unit.T
        pol = self.config.prediction
        n_ini = min(pol.t_ini, T)
        pieces: list[UnitSchedule] = []
        for i in range(n_ini):
            s = island_conservative_step(unit.slice(i, i + 1), soc, self.config.ess_reserve_cost)
            pieces.append(s)
            soc = float(s.soc[-1]) if unit.has_ess else None
        for a, b, hz in horizon_segments(pol, T, n_ini):
            u = self._extend(part, frame, hours, a, hz, unit)
            s = island_horizon(u, soc, self.dump).slice(0, b - a)
            pieces.append(s)
            soc = float(s.soc[-1]) if unit.has_ess else None
        sched = concat_schedules(pieces)
        if self.monitor is not None:
            self.monitor.check_schedule(sched)
        self.ledger.record_shedding(year, part.mg, sched.ls, IO, unit.dt)
        if unit.has_ess:
            soc_out[part.mg] = soc

    def _joint_zone(self, z: Zone, frame, year, hours, soc_start, soc_out) -> None:
        units = [self.plant.unit(p.mg, hours, frame, p.sections) for p in z.parts]
        soc = [soc_start(u.mg) if u.has_ess else None for u in units]
        T = units[0].T
        pol, jc = self.config.prediction, self.config.joint
        n_ini = min(pol.t_ini, T)
        pieces: list[list[UnitSchedule]] = [[] for _ in units]
        for i in range(n_ini):
            ss = joint_step([u.slice(i, i + 1) for u in units], soc, jc, self.mean_price, z.edges, self.dump)
            for k, s in enumerate(ss):
                pieces[k].append(s)
            soc = [float(s.soc[-1]) if u.has_ess else None for s, u in zip(ss, units)]
        for a, b, hz in horizon_segments(pol, T, n_ini):
            us = [self._extend(p, frame, hours, a, hz, u) for p, u in zip(z.parts, units)]
            ss, _ = joint_horizon(us, soc, jc, z.edges, self.dump)
            for k, s in enumerate(ss):
                pieces[k].append(s.slice(0, b - a))
            soc = [float(pieces[k][-1].soc[-1]) if u.has_ess else None for k, u in enumerate(units)]
        scheds = [concat_schedules(p) for p in pieces]
        for s in scheds:
            if self.monitor is not None:
                self.monitor.check_schedule(s)
            self.ledger.record_shedding(year, s.mg, s.ls, JO, s.unit.dt)
        if self.monitor is not None:
            self.monitor.check_pool(scheds, z)
        self._indices(year, scheds)
        for u, s in zip(units, soc):
            if u.has_ess:
                soc_out[u.mg] = s

    def _indices(self, year, scheds) -> None:
        thr = self.config.joint.lambda_thr
        T = scheds[0].unit.T
        ls = [s.ls for s in scheds]
        ib_tot = [np.zeros(s.unit.R) for s in scheds]
        sb_tot = [np.zeros(s.unit.R) for s in scheds]
        for t in range(T):
            ex = [float(s.ex[t]) if abs(s.ex[t]) > 1e-9 else 0.0 for s in scheds]
            ib, sb = run_ibgc_sber(ex, [l[:, t] for l in ls], [s.unit.lhat[:, t] for s in scheds],
                                   [s.unit.seg_cost for s in scheds], thr, scheds[0].unit.dt)
            for k in range(len(scheds)):
                ib_tot[k] += ib[k]
                sb_tot[k] += sb[k]
        for s, ib, sb in zip(scheds, ib_tot, sb_tot):
            if ib.any() or sb.any():
                self.ledger.record_indices(year, s.mg, ib, sb)

    def _extend(self, part, frame, hours, a, hz, unit):
        """Unit over ``[a, hz)`` of the window, reaching past its end if predicted so."""
        if hz <= unit.T:
            return unit.slice(a, hz)
        ext = np.arange(hours[0] + a, hours[0] + hz, dtype=np.int64)
        return self.plant.unit(part.mg, ext, frame, part.sections)
