"""EENS ledger, interruption-compensation indices, convergence statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

MODES = ("JO", "SD", "IO", "GC")
MODE_INDEX = {m: i for i, m in enumerate(MODES)}
NEG_TOL = 1e-9


def run_ibgc_sber(ex: Sequence[float], ls: Sequence[np.ndarray], demand: Sequence[np.ndarray],
                  costs: Sequence[np.ndarray], lambda_thr: float, dt: float = 1.0):
    """Per-unit IbGC and SbER increments for one joint-operation hour.

    Parameters
    ----------
    ex : signed exchange of each unit (positive = purchase), MW
    ls : interrupted power per segment of each unit, MW
    demand : raw segment demand of each unit, MW (served = demand - ls)
    costs : ascending segment interruption costs of each unit
    lambda_thr : cost from which interrupted load makes sold energy expensive

    Returns
    -------
    ibgc, sber : lists of per-segment energies (MWh)

    Sellers that interrupt load fill IbGC from their dearest segment down,
    up to the energy sold.  If any seller interrupts a segment costing at
    least ``lambda_thr``, each buyer fills SbER from its cheapest served
    segment up, up to the energy bought.
    """
    n = len(ex)
    ibgc = [np.zeros(len(c)) for c in costs]
    sber = [np.zeros(len(c)) for c in costs]
    sellers = [m for m in range(n) if ex[m] < 0]
    buyers = [m for m in range(n) if ex[m] > 0]
    for m in sellers:
        if ls[m].sum() > 0:
            d1 = -ex[m] * dt
            for r in range(len(costs[m]) - 1, -1, -1):
                v = min(ls[m][r] * dt, d1)
                ibgc[m][r] = v
                d1 -= v
    expensive = sum(float(ls[m][r]) for m in sellers for r in range(len(costs[m]))
                    if costs[m][r] >= lambda_thr)
    if expensive > 0:
        for m in buyers:
            d2 = ex[m] * dt
            for k in range(len(costs[m])):
                v = min((demand[m][k] - ls[m][k]) * dt, d2)
                v = max(v, 0.0)
                sber[m][k] = v
                d2 -= v
    return ibgc, sber


@dataclass
class YearRecord:
    year: int
    eens: np.ndarray  # (n_mg, S, 4) MWh
    ibgc: np.ndarray  # (n_mg, S)
    sber: np.ndarray

    @property
    def total(self) -> float:
        return float(self.eens.sum())


class AdequacyLedger:
    """Per-year EENS/IbGC/SbER records.

    Reports sum records in year order, so merging ledgers built in any
    order gives bit-identical results.
    """

    def __init__(self, mg_tags: Sequence[str], seg_costs: Mapping[str, Sequence[float]]):
        self.mg_tags = tuple(mg_tags)
        self.seg_costs = {m: tuple(seg_costs[m]) for m in self.mg_tags}
        self.S = max((len(v) for v in self.seg_costs.values()), default=0)
        self.index = {m: i for i, m in enumerate(self.mg_tags)}
        self.records: dict[int, YearRecord] = {}

    def new_year(self, year: int) -> YearRecord:
        n = len(self.mg_tags)
        rec = YearRecord(year, np.zeros((n, self.S, len(MODES))), np.zeros((n, self.S)), np.zeros((n, self.S)))
        self.records[year] = rec
        return rec

    def year(self, year: int) -> YearRecord:
        return self.records.get(year) or self.new_year(year)

    def record_shedding(self, year: int, mg: str, ls: np.ndarray, mode: str, dt: float = 1.0) -> None:
        """Add interrupted power ``ls`` (R,) or (R, T) in MW under ``mode``."""
        ls = np.asarray(ls, dtype=float)
        if ls.size and ls.min() < -NEG_TOL:
            raise AssertionError(f"negative interruption for {mg}: {ls.min()}")
        e = np.clip(ls, 0.0, None)
        if e.ndim == 2:
            e = e.sum(1)
        rec = self.year(year)
        rec.eens[self.index[mg], :len(e), MODE_INDEX[mode]] += e * dt

    def record_indices(self, year: int, mg: str, ibgc: np.ndarray, sber: np.ndarray) -> None:
        rec = self.year(year)
        i = self.index[mg]
        rec.ibgc[i, :len(ibgc)] += ibgc
        rec.sber[i, :len(sber)] += sber

    def merge(self, other: "AdequacyLedger") -> "AdequacyLedger":
        if other.mg_tags != self.mg_tags:
            raise ValueError("ledgers describe different systems")
        out = AdequacyLedger(self.mg_tags, self.seg_costs)
        for src in (self, other):
            for y, r in src.records.items():
                if y in out.records:
                    raise ValueError(f"year {y} recorded twice")
                out.records[y] = r
        return out

    @property
    def years(self) -> list[int]:
        return sorted(self.records)

    def yearly_totals(self) -> np.ndarray:
        return np.array([self.records[y].total for y in self.years])

    def summed(self):
        n = len(self.mg_tags)
        e = np.zeros((n, self.S, len(MODES)))
        ib = np.zeros((n, self.S))
        sb = np.zeros((n, self.S))
        for y in self.years:
            r = self.records[y]
            e += r.eens
            ib += r.ibgc
            sb += r.sber
        return e, ib, sb


def coefficient_of_variation(yearly: np.ndarray) -> float | None:
    """``std / (mean * sqrt(N))`` of yearly totals; None when undefined."""
    yearly = np.asarray(yearly, dtype=float)
    n = len(yearly)
    if n < 2:
        return None
    mean = yearly.mean()
    if mean <= 0:
        return None
    return float(yearly.std(ddof=1) / (mean * math.sqrt(n)))


@dataclass
class AdequacyReport:
    years: int
    mg_tags: tuple[str, ...]
    seg_costs: dict
    eens: np.ndarray  # (n_mg, S, 4) MWh/year
    ibgc: np.ndarray
    sber: np.ndarray
    yearly_totals: np.ndarray
    cov: float | None
    meta: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return float(self.eens.sum())

    def eens_mg(self, mg: str) -> float:
        return float(self.eens[self.mg_tags.index(mg)].sum())

    def eens_mode(self, mode: str) -> float:
        return float(self.eens[:, :, MODE_INDEX[mode]].sum())

    def convergence(self) -> np.ndarray:
        """Running mean of yearly totals: row N is the mean of the first N years."""
        y = self.yearly_totals
        return np.cumsum(y) / np.arange(1, len(y) + 1)


def summarize(ledger: AdequacyLedger, meta: dict | None = None) -> AdequacyReport:
    n = len(ledger.records)
    if n < 1:
        raise ValueError("no sample years recorded")
    e, ib, sb = ledger.summed()
    yearly = ledger.yearly_totals()
    return AdequacyReport(n, ledger.mg_tags, dict(ledger.seg_costs), e / n, ib / n, sb / n, yearly,
                          coefficient_of_variation(yearly), dict(meta or {}))


def histogram(yearly, bin_width: float | None = None, bins: int = 20):
    """Fixed-width frequency table over [0, max].

    Returns ``(edges, counts)`` with ``len(edges) == len(counts) + 1``.
    """
    yearly = np.asarray(yearly, dtype=float)
    if len(yearly) < 1:
        raise ValueError("need at least one year")
    top = float(yearly.max()) if len(yearly) else 0.0
    if bin_width is None:
        if bins < 1:
            raise ValueError("bins must be >= 1")
        bin_width = top / bins if top > 0 else 1.0
    if not bin_width > 0:
        raise ValueError("bin width must be positive")
    nb = max(1, int(math.floor(top / bin_width)) + (0 if top > 0 and top % bin_width == 0 else 1))
    idx = np.minimum(np.floor(np.clip(yearly, 0, None) / bin_width).astype(int), nb - 1)
    counts = np.bincount(idx, minlength=nb)
    edges = bin_width * np.arange(nb + 1)
    return edges, counts
