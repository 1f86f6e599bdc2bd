"""Cyber topology, minimal path sets and element availability.

Each communication route between two cyber nodes is stored as the set of
node and link ids along it.  A route works when all of its elements are up,
so the link between two nodes is available iff one of its minimal path sets
is disjoint from the failed set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .casemodel import BACKUP, GRID, CaseModel

PathSets = tuple[frozenset, ...]


def _order(paths: Iterable[frozenset]) -> PathSets:
    return tuple(sorted(set(paths), key=lambda p: (len(p), sorted(p))))


class CyberGraph:
    """Undirected multigraph of cyber nodes joined by link components.

    Parameters
    ----------
    edges : iterable of (link id, node a, node b)
    nodes : extra isolated nodes
    relays : nodes allowed in the interior of a route.  ``None`` means any
        node may forward traffic.
    """

    def __init__(self, edges: Iterable[tuple[str, str, str]], nodes: Iterable[str] = (),
                 relays: Iterable[str] | None = None):
        self.adj: dict[str, list[tuple[str, str]]] = {}
        for n in nodes:
            self.adj.setdefault(n, [])
        for eid, a, b in edges:
            self.adj.setdefault(a, []).append((eid, b))
            self.adj.setdefault(b, []).append((eid, a))
        for v in self.adj.values():
            v.sort()
        self.relays = None if relays is None else frozenset(relays)
        self._paths: dict[tuple[str, str], PathSets] = {}

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self.adj))

    def incident(self, node: str) -> tuple[str, ...]:
        return tuple(e for e, _ in self.adj.get(node, ()))

    def paths(self, src: str, dst: str) -> PathSets:
        key = (src, dst) if src <= dst else (dst, src)
        if key not in self._paths:
            self._paths[key] = enumerate_minimal_paths(self, src, dst)
        return self._paths[key]


def enumerate_minimal_paths(graph: CyberGraph, src: str, dst: str) -> PathSets:
    """All minimal path sets between ``src`` and ``dst``.

    Depth-first enumeration of simple routes; supersets are dropped so the
    result is the minimal sum-of-products form of the connection.
    """
    for n in (src, dst):
        if n not in graph.adj:
            raise KeyError(f"unknown cyber node '{n}'")
    if src == dst:
        return (frozenset([src]),)
    found = []
    relays = graph.relays
    elems = [src]
    visited = {src}

    def dfs(u):
        for eid, v in graph.adj[u]:
            if v in visited:
                continue
            if v == dst:
                found.append(frozenset(elems + [eid, v]))
                continue
            if relays is not None and v not in relays:
                continue
            visited.add(v)
            elems.extend((eid, v))
            dfs(v)
            elems.pop()
            elems.pop()
            visited.discard(v)

    dfs(src)
    found = sorted(set(found), key=len)
    minimal: list[frozenset] = []
    for p in found:
        if not any(q <= p for q in minimal):
            minimal.append(p)
    return _order(minimal)


def link_available(paths: PathSets, up: Callable[[str], bool] | None = None,
                   down: frozenset | set | None = None) -> bool:
    """Structure function: some path set has every element up.

    Give either a predicate ``up`` or the set of failed ids ``down``.
    """
    if down is not None:
        return any(p.isdisjoint(down) for p in paths)
    return any(all(up(e) for e in p) for p in paths)


def build_cyber_graph(case: CaseModel) -> CyberGraph:
    nodes = {case.dms}
    for m in case.microgrids:
        nodes.add(m.mgcc)
    relays = case.defaults.get("cyber_relays")
    if relays is None:
        relays = sorted(nodes)
    return CyberGraph(((e.id, e.a, e.b) for e in case.cyber_edges), nodes, relays)


# --------------------------------------------------------------------------
# availability frame


@dataclass(frozen=True)
class MgAvailability:
    mgcc_up: bool
    dms_link: bool
    isolated: bool
    wind: int
    pv: int
    ess: int
    diesel: tuple[int, ...]
    lc: tuple[int, ...]
    tr: tuple[int, ...]

    @property
    def shutdown(self) -> bool:
        return (not self.mgcc_up) or self.isolated


@dataclass(frozen=True)
class AvailabilityFrame:
    """Element-level consequences of one failed set.

    Frames depend only on the failed set, so one frame serves every hour of
    a contingency window.  ``hour`` is informational.
    """

    down: frozenset
    dms_up: bool
    grid_link: bool
    mg: Mapping[str, MgAvailability]
    accessible: Mapping[str, bool]
    switch_up: Mapping[str, bool]
    hour: int | None = None

    def all_islanded(self) -> bool:
        return not self.dms_up


@dataclass(frozen=True)
class Scenario:
    """Consequence-mapping switches (see :func:`cpmmg.engine.scenario_transform`)."""

    distributed_control: bool = False
    ablate_indirect: bool = False
    no_internal_protection: bool = False
    backup_supply: bool = False
    ideal_cyber: bool = False


class CyberModel:
    """Case-bound evaluator of cyber-failure consequences with caching."""

    def __init__(self, case: CaseModel, scenario: Scenario | None = None):
        self.case = case
        self.scenario = scenario or Scenario()
        self.graph = build_cyber_graph(case)
        self._cache: dict[frozenset, AvailabilityFrame] = {}

    def effective_down(self, down: frozenset) -> frozenset:
        """Failed set after distributed-control substitution."""
        if not self.scenario.distributed_control:
            return down
        case = self.case
        out = set(down)
        for m in case.microgrids:
            peers = [c for c in m.mcs] + [lp.lc for lp in m.load_points if lp.lc]
            if m.mgcc in out and not any(p in down for p in peers):
                out.discard(m.mgcc)
        if case.dms in out and not any(m.mgcc in out for m in case.microgrids):
            out.discard(case.dms)
        return frozenset(out)

    def reach(self, a: str | None, b: str | None, down: frozenset) -> bool:
        if a is None or b is None:
            return True
        return link_available(self.graph.paths(a, b), down=down)

    def switch_accessible(self, key: str, down: frozenset) -> bool:
        """CBC up and some controller up with a working route to it."""
        sw = self.case.switches[key]
        if sw.id is None:
            return False
        if self.scenario.ablate_indirect:
            return sw.id not in down
        if sw.cbc is not None and sw.cbc in down:
            return False
        if sw.cbc is None:
            return any(c not in down for c in sw.controllers)
        return any(c not in down and self.reach(c, sw.cbc, down) for c in sw.controllers)

    def frame(self, down: frozenset, hour: int | None = None) -> AvailabilityFrame:
        down = frozenset(down)
        hit = self._cache.get(down)
        if hit is not None:
            return hit
        fr = self._frame(down, hour)
        self._cache[down] = fr
        return fr

    def _frame(self, raw_down: frozenset, hour) -> AvailabilityFrame:
        case = self.case
        down = self.effective_down(raw_down)
        ablate = self.scenario.ablate_indirect
        dms_up = case.dms not in down
        mgs = {}
        for m in case.microgrids:
            mgcc_up = m.mgcc not in down
            dms_link = dms_up and mgcc_up and self.reach(case.dms, m.mgcc, down)
            inc = self.graph.incident(m.mgcc)
            isolated = bool(inc) and all(e in down for e in inc)

            def phi(der):
                if der is None:
                    return 0
                ok = der.physical not in down if der.physical else True
                if der.mc:
                    ok = ok and der.mc not in down and self.reach(m.mgcc, der.mc, down)
                return int(ok)

            lcs = []
            for lp in m.load_points:
                if ablate or lp.lc is None:
                    lcs.append(1)
                else:
                    lcs.append(int(lp.lc not in down and self.reach(m.mgcc, lp.lc, down)))
            mgs[m.tag] = MgAvailability(
                mgcc_up, dms_link, isolated, phi(m.wind), phi(m.pv), phi(m.ess),
                tuple(phi(d) for d in m.diesels), tuple(lcs),
                tuple(int(lp.transformer not in down) if lp.transformer else 1 for lp in m.load_points))
        acc = {k: self.switch_accessible(k, down) for k in case.switches}
        sw_up = {k: (sw.id is None or sw.id not in down) for k, sw in case.switches.items()}
        grid_link = case.upstream_link is None or case.upstream_link not in down
        return AvailabilityFrame(raw_down, dms_up, grid_link, mgs, acc, sw_up, hour)


def availability_frame(model: CyberModel, down: Iterable[str], t: int | None = None) -> AvailabilityFrame:
    return model.frame(frozenset(down), t)


def ess_availability(phys: int, mc: int, link: int) -> int:
    """Product form of the storage availability."""
    return int(phys) * int(mc) * int(link)


__all__ = [
    "CyberGraph", "enumerate_minimal_paths", "link_available", "build_cyber_graph",
    "MgAvailability", "AvailabilityFrame", "Scenario", "CyberModel", "availability_frame",
    "ess_availability", "GRID", "BACKUP",
]
