"""Hourly exogenous series: renewables, load shape and energy price.

The load shape is the IEEE-RTS chronological profile built from its weekly,
daily and hourly percentage tables.  Wind and PV come from a seeded
seasonal-plus-diurnal generator, and a CSV file can replace all of it.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np

HOURS_PER_YEAR = 8760

# IEEE-RTS weekly peak (% of annual peak), weeks 1..52, year starting in January
RTS_WEEKLY = np.array([
    86.2, 90.0, 87.8, 83.4, 88.0, 84.1, 83.2, 80.6, 74.0, 73.7, 71.5, 72.7, 70.4,
    75.0, 72.1, 80.0, 75.4, 83.7, 87.0, 88.0, 85.6, 81.1, 90.0, 88.7, 89.6, 86.1,
    75.5, 81.6, 80.1, 88.0, 72.2, 77.6, 80.0, 72.9, 72.6, 70.5, 78.0, 69.5, 72.4,
    72.4, 74.3, 74.4, 80.0, 88.1, 88.5, 90.9, 94.0, 89.0, 94.2, 97.0, 100.0, 95.2,
])
# daily peak (% of weekly peak), Monday..Sunday
RTS_DAILY = np.array([93.0, 100.0, 98.0, 96.0, 94.0, 77.0, 75.0])
# hourly load (% of daily peak), hour 0 = midnight-1am
RTS_HOURLY = {
    ("winter", "weekday"): [67, 63, 60, 59, 59, 60, 74, 86, 95, 96, 96, 95,
                            95, 95, 93, 94, 99, 100, 100, 96, 91, 83, 73, 63],
    ("winter", "weekend"): [78, 72, 68, 66, 64, 65, 66, 70, 80, 88, 90, 91,
                            90, 88, 87, 87, 91, 100, 99, 97, 94, 92, 87, 81],
    ("summer", "weekday"): [64, 60, 58, 56, 56, 58, 64, 76, 87, 95, 99, 100,
                            99, 100, 100, 97, 96, 96, 93, 92, 92, 93, 87, 72],
    ("summer", "weekend"): [74, 70, 66, 65, 64, 62, 62, 66, 81, 86, 91, 93,
                            93, 92, 91, 91, 92, 94, 95, 95, 100, 93, 88, 80],
    ("spring", "weekday"): [63, 62, 60, 58, 59, 65, 72, 85, 95, 99, 100, 99,
                            93, 92, 90, 88, 90, 92, 96, 98, 96, 90, 80, 70],
    ("spring", "weekend"): [75, 73, 69, 66, 65, 65, 68, 74, 83, 89, 92, 94,
                            91, 90, 90, 86, 85, 88, 92, 100, 97, 95, 90, 85],
}


def rts_season(week: int) -> str:
    """Season of a 1-based week: winter 1-8 and 44-52, summer 18-30."""
    if week <= 8 or week >= 44:
        return "winter"
    if 18 <= week <= 30:
        return "summer"
    return "spring"  # spring and fall share one table


def rts_load_profile(hours: int = HOURS_PER_YEAR) -> np.ndarray:
    """Hourly load as a fraction of the annual peak.

    The tables describe 52 weeks = 364 days; the last day is repeated to
    reach 8760 hours.  Longer horizons tile the year.
    """
    days = []
    for w in range(52):
        for d in range(7):
            kind = "weekday" if d < 5 else "weekend"
            hourly = np.asarray(RTS_HOURLY[(rts_season(w + 1), kind)], dtype=float)
            days.append(RTS_WEEKLY[w] * RTS_DAILY[d] * hourly / 1e6)
    days.append(days[-1])
    year = np.concatenate(days)
    return np.resize(year, hours)


@dataclass(frozen=True)
class ExogenousSeries:
    """Hourly series over a horizon (cycled if the study runs longer)."""

    wind_cf: np.ndarray
    pv_cf: np.ndarray
    load_frac: np.ndarray
    price: np.ndarray
    dt: float = 1.0

    def __post_init__(self):
        n = len(self.wind_cf)
        for name in ("pv_cf", "load_frac", "price"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"series '{name}' has length {len(getattr(self, name))}, expected {n}")
        if n == 0 or n % 24:
            raise ValueError(f"series length {n} is not a positive multiple of 24")
        for name in ("wind_cf", "pv_cf", "load_frac"):
            a = getattr(self, name)
            if np.any(a < 0) or np.any(a > 1):
                raise ValueError(f"series '{name}' has values outside [0, 1]")
        for name in ("wind_cf", "pv_cf", "load_frac", "price"):
            getattr(self, name).setflags(write=False)

    def __len__(self) -> int:
        return len(self.wind_cf)

    def index(self, hours) -> np.ndarray:
        """Map absolute simulation hours onto series indices."""
        return np.asarray(hours) % len(self)

    def window(self, start: int, stop: int) -> "ExogenousSeries":
        idx = self.index(np.arange(start, stop))
        return ExogenousSeries(self.wind_cf[idx], self.pv_cf[idx], self.load_frac[idx],
                               self.price[idx], self.dt)

    @property
    def mean_price(self) -> float:
        return float(np.mean(self.price))


def synthetic_series(years: int = 1, seed: int = 0, *, wind_mean: float = 0.35,
                     pv_peak: float = 0.85, price_base: float = 0.05,
                     noise: float = 0.15) -> ExogenousSeries:
    """Seeded synthetic series.

    Wind: seasonal (winter high) plus diurnal (night high) sinusoid with an
    AR(1) disturbance bounded by ``noise``.  PV: clipped solar bell between
    6:00 and 18:00 scaled by season and a daily cloudiness draw.  Price
    follows the load shape.
    """
    hours = HOURS_PER_YEAR * years
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0x5E41E5,)))
    t = np.arange(hours)
    doy = (t // 24) % 365
    hod = t % 24
    season = np.cos(2 * np.pi * doy / 365.0)  # +1 in January

    ar = np.empty(hours)
    eps = rng.normal(0.0, 1.0, hours)
    x = 0.0
    for i in range(hours):
        x = 0.97 * x + 0.243 * eps[i]  # unit stationary variance
        ar[i] = x
    wind = wind_mean * (1 + 0.3 * season + 0.15 * np.cos(2 * np.pi * (hod - 3) / 24))
    wind = np.clip(wind + noise * np.clip(ar, -2.5, 2.5), 0.0, 1.0)

    bell = np.clip(np.sin(np.pi * (hod + 0.5 - 6) / 12), 0.0, None)
    bell[(hod < 6) | (hod >= 18)] = 0.0
    clouds = rng.uniform(0.55, 1.0, hours // 24 + 1)[t // 24]
    pv = np.clip(pv_peak * bell * (1 - 0.25 * season) * clouds, 0.0, 1.0)

    load = rts_load_profile(hours)
    price = price_base * (0.6 + 0.5 * load)
    return ExogenousSeries(wind, pv, load, price)


def read_series_csv(path: str | Path, clamp: bool = True) -> ExogenousSeries:
    """Read ``hour,wind_cf,pv_cf,load_frac,price`` rows."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"hour", "wind_cf", "pv_cf", "load_frac", "price"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise ValueError(f"{path}: header must contain {sorted(need)}")
        rows = list(reader)
    data = {k: np.array([float(r[k]) for r in rows]) for k in need}
    hours = data["hour"].astype(int)
    if not np.array_equal(hours, np.arange(len(rows))) and not np.array_equal(hours, np.arange(1, len(rows) + 1)):
        raise ValueError(f"{path}: hour column must be consecutive")
    if clamp:
        for k in ("wind_cf", "pv_cf", "load_frac"):
            data[k] = np.clip(data[k], 0.0, 1.0)
    return ExogenousSeries(data["wind_cf"], data["pv_cf"], data["load_frac"], data["price"])


def write_series_csv(series: ExogenousSeries, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["hour", "wind_cf", "pv_cf", "load_frac", "price"])
        for i in range(len(series)):
            w.writerow([i, repr(float(series.wind_cf[i])), repr(float(series.pv_cf[i])),
                        repr(float(series.load_frac[i])), repr(float(series.price[i]))])


def build_series(config: Mapping[str, Any] | None = None, horizon_years: int = 1,
                 seed: int = 0) -> ExogenousSeries:
    """Series from a case ``series`` block.

    Keys: ``csv`` (path, overrides everything), ``years`` (synthetic length,
    default ``horizon_years``), ``seed`` and generator keyword overrides.
    A constant series is requested with ``{"constant": {...}}``.
    """
    config = dict(config or {})
    if "csv" in config:
        s = read_series_csv(config["csv"], clamp=config.get("clamp", True))
        return s
    if "constant" in config:
        c = config["constant"]
        n = HOURS_PER_YEAR
        return ExogenousSeries(np.full(n, float(c.get("wind_cf", 0.0))),
                               np.full(n, float(c.get("pv_cf", 0.0))),
                               np.full(n, float(c.get("load_frac", 1.0))),
                               np.full(n, float(c.get("price", 0.05))))
    years = int(config.pop("years", horizon_years))
    seed = int(config.pop("seed", seed))
    kw = {k: float(v) for k, v in config.items()
          if k in ("wind_mean", "pv_peak", "price_base", "noise")}
    return synthetic_series(years, seed, **kw)
