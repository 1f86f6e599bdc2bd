"""Normal (grid-connected) day-ahead scheduling.

Each microgrid minimises its own cost against the hourly energy price with
its storage returning to its initial state of charge at the end of the day.
The DMS then checks line and substation limits and caps offending claims
with the proportional rule until the schedules are feasible.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from ..casemodel import CaseModel
from .config import DispatchConfig
from .model import LpOptions, solve_dispatch
from .network import dms_coordinate
from .units import Plant, UnitData, UnitSchedule


def initial_soc(unit_or_ess) -> float | None:
    """Mid-range state of charge used to open every normal day."""
    e = getattr(unit_or_ess, "ess", unit_or_ess)
    if e is None:
        return None
    return 0.5 * (e.soc_min + e.soc_max)


def schedule_normal_day(unit: UnitData, soc_start: float | None, ex_lo=None, ex_hi=None,
                        dump=None) -> UnitSchedule:
    """Single-MG day schedule at the market price with terminal SOC = initial SOC."""
    opt = LpOptions(exchange="market", terminal_soc=True,
                    ex_lo=None if ex_lo is None else [ex_lo], ex_hi=None if ex_hi is None else [ex_hi],
                    name=f"normal_{unit.mg}")
    (s,), _ = solve_dispatch([unit], [soc_start], opt, dump)
    return s


@dataclass
class NormalDay:
    schedules: dict  # mg -> UnitSchedule over the 24 hours
    flows: dict
    sub: np.ndarray
    iterations: int

    def soc_at(self, mg: str, hour_of_day: int) -> float | None:
        """State of charge at the start of ``hour_of_day`` (0..24)."""
        s = self.schedules[mg]
        if s.soc0 is None:
            return None
        return s.soc0 if hour_of_day == 0 else float(s.soc[hour_of_day - 1])


def case_fingerprint(case: CaseModel, series) -> str:
    """Hash of everything a normal day depends on."""
    from ..casemodel import case_to_document
    doc = case_to_document(case)
    keep = {"microgrids": [{k: v for k, v in m.items() if k not in ("internal_switches", "sections")}
                           for m in doc["microgrids"]],
            "lines": [{k: l[k] for k in ("from", "to", "capacity")} for l in doc["lines"]],
            "sub": doc["substation"].get("capacity")}
    h = hashlib.sha256(json.dumps(keep, sort_keys=True).encode())
    for a in (series.wind_cf, series.pv_cf, series.load_frac, series.price):
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()[:16]


class NormalCache:
    """Day schedules keyed by series day; shareable across runs of one case."""

    def __init__(self):
        self.fingerprint: str | None = None
        self.days: dict[int, NormalDay] = {}

    def bind(self, fingerprint: str) -> None:
        if self.fingerprint is None:
            self.fingerprint = fingerprint
        elif self.fingerprint != fingerprint:
            raise ValueError("normal-day cache was built for a different case or series")


class NormalScheduler:
    def __init__(self, case: CaseModel, plant: Plant, config: DispatchConfig | None = None,
                 cache: NormalCache | None = None, dump=None):
        self.case = case
        self.plant = plant
        self.config = config or DispatchConfig()
        self.cache = cache if cache is not None else NormalCache()
        self.cache.bind(case_fingerprint(case, plant.series))
        self.dump = dump
        self.n_days = len(plant.series) // 24

    def day(self, hour: int) -> NormalDay:
        d = (hour // 24) % self.n_days
        got = self.cache.days.get(d)
        if got is None:
            got = self._solve_day(d)
            self.cache.days[d] = got
        return got

    def _solve_day(self, d: int) -> NormalDay:
        hours = np.arange(24 * d, 24 * d + 24)
        units = {m.tag: self.plant.unit(m.tag, hours) for m in self.case.microgrids}
        scheds: dict[str, UnitSchedule] = {}

        def solve(mg, lo, hi):
            u = units[mg]
            lo_ = None if np.all(np.isneginf(lo)) else lo
            hi_ = None if np.all(np.isposinf(hi)) else hi
            scheds[mg] = schedule_normal_day(u, initial_soc(u), lo_, hi_, self.dump)
            return scheds[mg].ex

        ex, flows, sub, it = dms_coordinate(self.case.graph, solve, 24,
                                            self.case.graph.substation_capacity,
                                            self.config.dms_iteration_cap)
        return NormalDay(scheds, flows, sub, it)

    def soc_at(self, mg: str, hour: int) -> float | None:
        """Normal-operation SOC at the start of absolute ``hour``."""
        return self.day(hour).soc_at(mg, hour % 24)
