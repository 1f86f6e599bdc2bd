"""Sequential Monte Carlo sampling of two-state component histories.

Each component owns an independent random stream derived from the master
seed and a hash of its id, so adding or removing a component leaves every
other history unchanged and per-component sampling order is irrelevant.
Sojourn times left over at the end of a year carry into the next one.
"""
from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .casemodel import CaseModel, ComponentSpec

HOURS = 8760
UP, DOWN = 1, 0


def component_rng(seed: int, cid: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(zlib.crc32(cid.encode()),)))


def draw_interval(rate: float, rng: np.random.Generator) -> float:
    """Exponential sojourn in hours for a rate per year; infinite for rate 0."""
    if rate <= 0:
        return math.inf
    u = 1.0 - rng.random()  # (0, 1]
    return -math.log(u) / rate * HOURS


@dataclass(frozen=True)
class StateTimeline:
    """Alternating up/down intervals covering one year."""

    id: str
    intervals: tuple[tuple[float, float, int], ...]
    residual: float
    end_state: int

    def down_intervals(self) -> list[tuple[float, float]]:
        return [(a, b) for a, b, s in self.intervals if s == DOWN]

    def down_hours(self) -> list[tuple[int, int]]:
        """Hour blocks ``[h0, h1)`` whose mid-point falls in a down interval."""
        out = []
        for a, b in self.down_intervals():
            h0 = math.ceil(a - 0.5)
            h1 = min(math.ceil(b - 0.5), HOURS)
            if h1 > h0:
                out.append((h0, h1))
        return out

    def unavailability(self) -> float:
        return sum(b - a for a, b in self.down_intervals()) / HOURS


@dataclass(frozen=True)
class ContingencyWindow:
    start: int
    end: int
    failed: frozenset

    @property
    def hours(self) -> int:
        return self.end - self.start


class Sampler:
    """Year-by-year timeline generator with residual carry-over."""

    def __init__(self, case: CaseModel, seed: int, components: Iterable[ComponentSpec] | None = None):
        comps = list(case.components.values()) if components is None else list(components)
        self.specs = {c.id: c for c in sorted(comps, key=lambda c: c.id) if c.failure_rate > 0}
        self.seed = seed
        self.rngs = {cid: component_rng(seed, cid) for cid in self.specs}
        # (state, remaining hours) entering the next year
        self.carry: dict[str, tuple[int, float]] = {}
        self.year = 0

    def _one(self, spec: ComponentSpec) -> StateTimeline:
        rng = self.rngs[spec.id]
        if spec.id in self.carry:
            state, remain = self.carry[spec.id]
        else:
            state, remain = UP, draw_interval(spec.failure_rate, rng)
        t = 0.0
        iv = []
        while True:
            end = t + remain
            if end >= HOURS:
                iv.append((t, float(HOURS), state))
                self.carry[spec.id] = (state, end - HOURS)
                return StateTimeline(spec.id, tuple(iv), end - HOURS, state)
            iv.append((t, end, state))
            t = end
            state = DOWN if state == UP else UP
            remain = draw_interval(spec.failure_rate if state == UP else spec.repair_rate, rng)

    def next_year(self) -> dict[str, StateTimeline]:
        out = {cid: self._one(spec) for cid, spec in self.specs.items()}
        self.year += 1
        return out


def build_timelines(case: CaseModel, sampler: Sampler) -> dict[str, StateTimeline]:
    """Timelines of the sampler's next year (components with zero rate omitted)."""
    return sampler.next_year()


def contingency_windows(timelines: Mapping[str, StateTimeline] | Mapping[str, list],
                        ) -> list[ContingencyWindow]:
    """Maximal hour runs with a constant, nonempty failed set."""
    events: dict[int, list] = {}
    for cid, tl in timelines.items():
        blocks = tl.down_hours() if isinstance(tl, StateTimeline) else tl
        for h0, h1 in blocks:
            events.setdefault(h0, []).append((cid, +1))
            events.setdefault(h1, []).append((cid, -1))
    out = []
    active: set = set()
    points = sorted(events)
    for i, h in enumerate(points):
        # removals first, so back-to-back blocks of one id stay active
        for cid, d in events[h]:
            if d < 0:
                active.discard(cid)
        for cid, d in events[h]:
            if d > 0:
                active.add(cid)
        if i + 1 < len(points) and active:
            out.append(ContingencyWindow(h, points[i + 1], frozenset(active)))
    return _merge(out)


def _merge(ws: list[ContingencyWindow]) -> list[ContingencyWindow]:
    out: list[ContingencyWindow] = []
    for w in ws:
        if out and out[-1].end == w.start and out[-1].failed == w.failed:
            out[-1] = ContingencyWindow(out[-1].start, w.end, w.failed)
        else:
            out.append(w)
    return out
