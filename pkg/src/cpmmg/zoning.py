"""Fault isolation, connected zones and operation modes.

The physical network is a graph whose nodes are feeder sections (plus the
``grid`` and ``backup`` sources) and whose edges are switches or solid
joints.  A faulted section is isolated by the nearest switches that can
open; a switch whose breaker controller is unreachable stays closed, so the
dead region grows past it.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .casemodel import BACKUP, GRID, CaseModel
from .cybernet import AvailabilityFrame

NO, JO, IO, SD = "NO", "JO", "IO", "SD"
MODES = (JO, SD, IO, "GC")  # ledger columns; NO shedding is booked as GC


@dataclass(frozen=True)
class Part:
    """Live sections of one microgrid inside one zone: the dispatch unit."""

    mg: str
    sections: frozenset


@dataclass(frozen=True)
class ZoneEdge:
    """Closed POI line inside a zone: flow = sum of ``side`` part injections."""

    line: str
    capacity: float
    side: tuple[int, ...]  # indices into Zone.parts on the downstream side


@dataclass(frozen=True)
class Zone:
    sections: frozenset
    mode: str
    parts: tuple[Part, ...] = ()
    supplier: str | None = None
    capacity: float = 0.0
    edges: tuple[ZoneEdge, ...] = ()

    @property
    def mgs(self) -> tuple[str, ...]:
        return tuple(p.mg for p in self.parts)


@dataclass(frozen=True)
class OperationContext:
    zones: tuple[Zone, ...]
    dead: frozenset
    shutdown: frozenset  # microgrids in shutdown
    section_zone: Mapping[str, int] = field(default_factory=dict)

    def section_mode(self, section: str, mg: str) -> str:
        if section in self.dead or mg in self.shutdown:
            return SD
        return self.zones[self.section_zone[section]].mode

    def modes(self) -> dict[str, tuple[str, ...]]:
        """Distinct modes of each microgrid's live parts (for criticality)."""
        out: dict[str, set] = {}
        for z in self.zones:
            for p in z.parts:
                out.setdefault(p.mg, set()).add(z.mode)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    def is_normal(self) -> bool:
        """True when nothing changed relative to full grid-connected operation."""
        return (not self.dead and not self.shutdown and len(self.zones) == 1
                and self.zones[0].mode == NO and self.zones[0].supplier == GRID)


class Topology:
    """Static adjacency of the section graph for one case."""

    def __init__(self, case: CaseModel):
        self.case = case
        self.owner = case.section_owner()
        self.adj: dict[str, list[tuple[str, str]]] = {s: [] for s in self.owner}
        self.adj[GRID] = []
        self.adj[BACKUP] = []
        for key in sorted(case.switches):
            a, b = case.switches[key].ends
            self.adj[a].append((key, b))
            self.adj[b].append((key, a))
        self.section_lines = {s.id: s.lines for m in case.microgrids for s in m.sections}
        self.line_of_switch = {l.switch: l for l in case.graph.lines}


def _faulted(topo: Topology, down: frozenset) -> set:
    return {s for s, lines in topo.section_lines.items() if any(l in down for l in lines)}


def isolate(topo: Topology, frame: AvailabilityFrame) -> frozenset:
    """Sections de-energized by fault isolation.

    Starting from each faulted section the dead region spreads across solid
    joints and across switches that are closed and cannot be opened.  A
    physically failed switch is already open.
    """
    case = topo.case
    dead = set(_faulted(topo, frame.down))
    queue = deque(sorted(dead))
    while queue:
        u = queue.popleft()
        for key, v in topo.adj[u]:
            if v in (GRID, BACKUP) or v in dead:
                continue
            sw = case.switches[key]
            if sw.normally_open or not frame.switch_up[key]:
                continue
            if sw.id is not None and frame.accessible[key]:
                continue
            dead.add(v)
            queue.append(v)
    return frozenset(dead)


def _open_edges(topo: Topology, frame: AvailabilityFrame) -> set:
    """Switch keys that are open in the post-contingency configuration."""
    case = topo.case
    opened = set()
    forced_io = {m.tag for m in case.microgrids
                 if not frame.mg[m.tag].dms_link and not frame.mg[m.tag].shutdown}
    for key, sw in case.switches.items():
        if sw.normally_open or not frame.switch_up[key]:
            opened.add(key)
            continue
        if sw.role in ("poi", "feeder"):
            if not frame.dms_up:
                opened.add(key)
                continue
            ends_mg = {topo.owner.get(e) for e in sw.ends} - {None}
            if ends_mg & forced_io:
                opened.add(key)
    return opened


def partition_zones(case: CaseModel, frame: AvailabilityFrame, topo: Topology | None = None,
                    ) -> tuple[frozenset, list[frozenset]]:
    """Dead sections and connected groups of live sections.

    Each group may include the ``grid`` pseudo-node when it stays fed by
    the substation.
    """
    topo = topo or Topology(case)
    dead = isolate(topo, frame)
    opened = _open_edges(topo, frame)
    grid_ok = case.upstream not in frame.down and frame.grid_link and frame.dms_up
    seen = set(dead)
    groups = []
    starts = ([GRID] if grid_ok else []) + sorted(topo.owner)
    for s in starts:
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for key, v in topo.adj[u]:
                if key in opened or v in seen or v == BACKUP or (v == GRID and not grid_ok):
                    continue
                seen.add(v)
                comp.add(v)
                stack.append(v)
        groups.append(frozenset(comp))
    return dead, groups


def _zone_edges(topo: Topology, sections: frozenset, parts: list[Part], opened: set) -> tuple:
    """POI lines inside a zone with the part indices on their far side."""
    case = topo.case
    part_of = {s: i for i, p in enumerate(parts) for s in p.sections}
    edges = []
    for key in sorted(case.switches):
        sw = case.switches[key]
        if sw.role != "poi" or key in opened:
            continue
        a, b = sw.ends
        if a not in sections or b not in sections:
            continue
        # sections reachable from b without crossing this edge
        side = {b}
        stack = [b]
        while stack:
            u = stack.pop()
            for k2, v in topo.adj[u]:
                if k2 == key or k2 in opened or v in side or v not in sections:
                    continue
                side.add(v)
                stack.append(v)
        idx = tuple(sorted({part_of[s] for s in side if s in part_of}))
        edges.append(ZoneEdge(topo.line_of_switch[key].id, topo.line_of_switch[key].capacity, idx))
    return tuple(edges)


def classify_modes(case: CaseModel, frame: AvailabilityFrame, dead: frozenset,
                   groups: Iterable[frozenset], topo: Topology | None = None) -> OperationContext:
    """Label each connected group NO, JO or IO and collect dispatch parts."""
    topo = topo or Topology(case)
    shutdown = frozenset(m.tag for m in case.microgrids if frame.mg[m.tag].shutdown)
    opened = _open_edges(topo, frame)
    zones = []
    section_zone = {}
    order = {m.tag: i for i, m in enumerate(case.microgrids)}
    for g in groups:
        secs = frozenset(s for s in g if s not in (GRID, BACKUP))
        if not secs:  # substation alone, nothing to supply
            continue
        by_mg: dict[str, set] = {}
        for s in secs:
            mg = topo.owner[s]
            if mg not in shutdown:
                by_mg.setdefault(mg, set()).add(s)
        parts = [Part(mg, frozenset(by_mg[mg])) for mg in sorted(by_mg, key=order.get)]
        if GRID in g:
            mode, supplier, cap = NO, GRID, case.graph.substation_capacity
        elif len(parts) >= 2:
            mode, supplier, cap = JO, None, 0.0
        elif len(parts) == 1:
            mode, supplier, cap = IO, None, 0.0
        else:
            mode, supplier, cap = SD, None, 0.0
        edges = _zone_edges(topo, secs, parts, opened) if mode == JO else ()
        for s in secs:
            section_zone[s] = len(zones)
        zones.append(Zone(secs, mode, tuple(parts), supplier, cap, edges))
    return OperationContext(tuple(zones), dead, shutdown, section_zone)


def backup_tie_state(case: CaseModel, frame: AvailabilityFrame, ctx: OperationContext) -> OperationContext:
    """Close the normally-open backup tie for an unsupplied zone that reaches it."""
    b = case.graph.backup
    if b is None or not b.enabled or b.section in ctx.dead:
        return ctx
    key = b.switch
    if not frame.switch_up[key] or not frame.accessible[key]:
        return ctx
    zi = ctx.section_zone.get(b.section)
    if zi is None:
        return ctx
    z = ctx.zones[zi]
    if z.mode in (NO,) or not z.parts:
        return ctx
    zones = list(ctx.zones)
    zones[zi] = Zone(z.sections, NO, z.parts, BACKUP, b.capacity, ())
    return OperationContext(tuple(zones), ctx.dead, ctx.shutdown, ctx.section_zone)


class Zoner:
    """Cached failed-set -> operation context evaluation."""

    def __init__(self, case: CaseModel):
        self.case = case
        self.topo = Topology(case)
        self._cache: dict[frozenset, OperationContext] = {}

    def context(self, frame: AvailabilityFrame) -> OperationContext:
        hit = self._cache.get(frame.down)
        if hit is None:
            dead, groups = partition_zones(self.case, frame, self.topo)
            hit = classify_modes(self.case, frame, dead, groups, self.topo)
            hit = backup_tie_state(self.case, frame, hit)
            self._cache[frame.down] = hit
        return hit
