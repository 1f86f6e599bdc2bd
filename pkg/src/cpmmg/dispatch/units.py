"""Dispatch units: the resources and demand of one microgrid part over a span of hours."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..casemodel import CaseModel, EssSpec, SegmentCatalog
from ..cybernet import AvailabilityFrame
from ..series import ExogenousSeries


@dataclass
class UnitData:
    """Available resources and segment demand of one unit.

    Demand arrays have shape (R, T): ``lhat`` is the raw segment demand,
    ``forced`` the share behind failed transformers, ``ctrl`` the share that
    can be shed through a working load controller and ``unctrl`` the share
    whose controller is unreachable.  ``lhat = forced + ctrl + unctrl``.
    """

    mg: str
    hours: np.ndarray
    wind: np.ndarray
    pv: np.ndarray
    de_cap: np.ndarray
    de_cost: np.ndarray
    ess: EssSpec | None
    phi_ess: int
    seg_cost: np.ndarray
    lhat: np.ndarray
    forced: np.ndarray
    ctrl: np.ndarray
    unctrl: np.ndarray
    price: np.ndarray | None = None
    dt: float = 1.0

    @property
    def T(self) -> int:
        return len(self.hours)

    @property
    def R(self) -> int:
        return len(self.seg_cost)

    @property
    def serve(self) -> np.ndarray:
        """Demand that must be served unless shed (L^seg)."""
        return self.ctrl + self.unctrl

    @property
    def has_ess(self) -> bool:
        return self.ess is not None

    def slice(self, a: int, b: int) -> "UnitData":
        return UnitData(self.mg, self.hours[a:b], self.wind[a:b], self.pv[a:b], self.de_cap,
                        self.de_cost, self.ess, self.phi_ess, self.seg_cost, self.lhat[:, a:b],
                        self.forced[:, a:b], self.ctrl[:, a:b], self.unctrl[:, a:b],
                        None if self.price is None else self.price[a:b], self.dt)


@dataclass
class MgStatic:
    tag: str
    catalog: SegmentCatalog
    lp_section: tuple[str, ...]
    lp_tr: tuple[str | None, ...]
    lp_lc: tuple[str | None, ...]
    peak: np.ndarray


class Plant:
    """Case-bound factory for :class:`UnitData`."""

    def __init__(self, case: CaseModel, series: ExogenousSeries):
        self.case = case
        self.series = series
        self.static = {}
        for m in case.microgrids:
            cat = case.catalog(m.tag)
            self.static[m.tag] = MgStatic(
                m.tag, cat, tuple(lp.section for lp in m.load_points),
                tuple(lp.transformer for lp in m.load_points),
                tuple(lp.lc for lp in m.load_points),
                np.array([lp.peak_load for lp in m.load_points]))

    def catalog(self, mg: str) -> SegmentCatalog:
        return self.static[mg].catalog

    def unit(self, mg: str, hours, frame: AvailabilityFrame | None = None,
             sections=None) -> UnitData:
        """Unit for microgrid ``mg`` restricted to ``sections`` (all when None).

        ``frame`` None means every element is available.
        """
        case, s = self.case, self.static[mg]
        spec = case.mg(mg)
        hours = np.asarray(hours, dtype=np.int64)
        idx = self.series.index(hours)
        cf_w, cf_pv = self.series.wind_cf[idx], self.series.pv_cf[idx]
        frac = self.series.load_frac[idx]
        av = frame.mg[mg] if frame is not None else None
        inside = (lambda sec: True) if sections is None else (lambda sec: sec in sections)

        def ren(r, cf, phi):
            if r is None or not inside(r.section):
                return np.zeros(len(hours))
            return r.capacity * cf * (phi if av is not None else 1)

        wind = ren(spec.wind, cf_w, av.wind if av else 1)
        pv = ren(spec.pv, cf_pv, av.pv if av else 1)
        de_cap = np.array([d.max_output * (av.diesel[k] if av else 1) if inside(d.section) else 0.0
                           for k, d in enumerate(spec.diesels)])
        de_cost = np.array([d.cost for d in spec.diesels])
        ess = spec.ess if spec.ess is not None and inside(spec.ess.section) else None
        phi_ess = (av.ess if av else 1) if ess is not None else 0

        present = np.array([inside(sec) for sec in s.lp_section], dtype=float)
        tr = np.array(av.tr, dtype=float) if av else np.ones(len(present))
        lc = np.array(av.lc, dtype=float) if av else np.ones(len(present))
        W = s.catalog.weights  # (L, R) in MW at full load
        lhat = (W * present[:, None]).T @ np.ones(len(present))
        lhat = np.outer(lhat, frac)
        forced = np.outer((W * (present * (1 - tr))[:, None]).sum(0), frac)
        ctrl = np.outer((W * (present * tr * lc)[:, None]).sum(0), frac)
        unctrl = np.outer((W * (present * tr * (1 - lc))[:, None]).sum(0), frac)
        price = self.series.price[idx]
        return UnitData(mg, hours, wind, pv, de_cap, de_cost, ess, int(phi_ess),
                        np.asarray(s.catalog.costs, dtype=float), lhat, forced, ctrl, unctrl,
                        price, self.series.dt)

    def section_demand(self, mg: str, hours, sections) -> np.ndarray:
        """Raw (R, T) segment demand located in ``sections``."""
        s = self.static[mg]
        idx = self.series.index(np.asarray(hours, dtype=np.int64))
        present = np.array([sec in sections for sec in s.lp_section], dtype=float)
        return np.outer((s.catalog.weights * present[:, None]).sum(0), self.series.load_frac[idx])


@dataclass
class UnitSchedule:
    """Dispatch of one unit; power in MW per hour, ``soc`` at the end of each hour."""

    unit: UnitData
    de: np.ndarray
    ch: np.ndarray
    dch: np.ndarray
    w: np.ndarray
    pv: np.ndarray
    ex: np.ndarray
    shed_ctrl: np.ndarray
    shed_unctrl: np.ndarray
    soc: np.ndarray
    soc0: float | None
    notes: dict = field(default_factory=dict)

    @property
    def mg(self) -> str:
        return self.unit.mg

    @property
    def ls(self) -> np.ndarray:
        """Recorded interruption per segment: forced plus shed."""
        return self.unit.forced + self.shed_ctrl + self.shed_unctrl

    @property
    def buy(self) -> np.ndarray:
        return np.maximum(self.ex, 0.0)

    @property
    def sell(self) -> np.ndarray:
        return np.maximum(-self.ex, 0.0)

    def balance_residual(self) -> np.ndarray:
        u = self.unit
        supply = self.w + self.pv + self.de.sum(0) + self.dch - self.ch + self.ex
        served = (u.serve - self.shed_ctrl - self.shed_unctrl).sum(0)
        return supply - served

    def cost(self) -> float:
        u = self.unit
        c = float(u.de_cost @ self.de.sum(1)) if len(u.de_cost) else 0.0
        c += float((u.seg_cost[:, None] * self.shed_ctrl).sum())
        if u.ess is not None:
            c += u.ess.charge_cost * self.ch.sum() + u.ess.discharge_cost * self.dch.sum()
        return c * u.dt

    def slice(self, a: int, b: int) -> "UnitSchedule":
        soc0 = self.soc0 if a == 0 else (self.soc[a - 1] if self.soc0 is not None else None)
        return UnitSchedule(self.unit.slice(a, b), self.de[:, a:b], self.ch[a:b], self.dch[a:b],
                            self.w[a:b], self.pv[a:b], self.ex[a:b], self.shed_ctrl[:, a:b],
                            self.shed_unctrl[:, a:b], self.soc[a:b], soc0, dict(self.notes))


def concat_schedules(parts: list[UnitSchedule]) -> UnitSchedule:
    """Join consecutive schedules of the same unit along time."""
    if len(parts) == 1:
        return parts[0]
    u0 = parts[0].unit
    cat = np.concatenate
    unit = UnitData(u0.mg, cat([p.unit.hours for p in parts]), cat([p.unit.wind for p in parts]),
                    cat([p.unit.pv for p in parts]), u0.de_cap, u0.de_cost, u0.ess, u0.phi_ess,
                    u0.seg_cost, cat([p.unit.lhat for p in parts], 1), cat([p.unit.forced for p in parts], 1),
                    cat([p.unit.ctrl for p in parts], 1), cat([p.unit.unctrl for p in parts], 1),
                    None if u0.price is None else cat([p.unit.price for p in parts]), u0.dt)
    return UnitSchedule(unit, cat([p.de for p in parts], 1), cat([p.ch for p in parts]),
                        cat([p.dch for p in parts]), cat([p.w for p in parts]), cat([p.pv for p in parts]),
                        cat([p.ex for p in parts]), cat([p.shed_ctrl for p in parts], 1),
                        cat([p.shed_unctrl for p in parts], 1), cat([p.soc for p in parts]),
                        parts[0].soc0, {})


def idle_schedule(unit: UnitData, soc0: float | None) -> UnitSchedule:
    T, D, R = unit.T, len(unit.de_cap), unit.R
    z = np.zeros(T)
    soc = np.full(T, soc0 if soc0 is not None else np.nan)
    return UnitSchedule(unit, np.zeros((D, T)), z.copy(), z.copy(), z.copy(), z.copy(), z.copy(),
                        np.zeros((R, T)), np.zeros((R, T)), soc, soc0)
