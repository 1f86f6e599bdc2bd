"""Radial line flows, proportional-share congestion allocation and the DMS loop."""
from __future__ import annotations

import logging
from typing import Callable, Mapping

import numpy as np

from ..casemodel import MmgGraph

log = logging.getLogger(__name__)
TOL = 1e-7


class DmsIterationError(RuntimeError):
    """The congestion loop did not settle within the iteration cap."""


def line_flows(graph: MmgGraph, ex: Mapping[str, np.ndarray]) -> tuple[dict, np.ndarray]:
    """Leaf-to-root recursion of line flows.

    ``P_line[m->n] = P_ex[n] + sum over children k of P_line[n->k]``, with
    positive exchange meaning purchase.  The substation term is
    ``P_sub = -sum(P_ex)``.
    """
    flows: dict[str, np.ndarray] = {}

    def down(n):
        tot = np.asarray(ex[n], dtype=float).copy()
        for l in graph.lines:
            if l.sending == n:
                f = down(l.receiving)
                flows[l.id] = f
                tot = tot + f
        return tot

    total = down(graph.root)
    return flows, -total


def ps_allocate(claims, capacity: float, counterflow=()) -> np.ndarray:
    """Proportional rule for an over-claimed line.

    Same-direction claims share the endowment ``capacity + sum|counterflow|``
    in proportion to their size; under-claimed lines are returned unchanged.
    """
    claims = np.asarray(claims, dtype=float)
    total = np.abs(claims).sum()
    endow = capacity + np.abs(np.asarray(counterflow, dtype=float)).sum()
    if total <= endow:
        return claims.copy()
    return claims * (endow / total)


def congestion_caps(graph: MmgGraph, ex: Mapping[str, np.ndarray], hi: dict, lo: dict,
                    sub_capacity: float | None = None) -> list[tuple[str, int]]:
    """Tighten per-MG exchange bounds for every violated limit; returns violations."""
    flows, sub = line_flows(graph, ex)
    checks = [(l.id, graph.subtree(l.receiving), flows[l.id], l.capacity) for l in graph.lines]
    if sub_capacity is not None:
        checks.append(("substation", graph.topological(), -sub, sub_capacity))
    bad = []
    for name, members, flow, cap in checks:
        for t in np.flatnonzero(np.abs(flow) > cap + TOL):
            sign = np.sign(flow[t])
            vals = np.array([ex[m][t] for m in members])
            same = np.sign(vals) == sign
            alloc = ps_allocate(vals[same], cap, vals[~same])
            for m, a in zip(np.asarray(members)[same], alloc):
                if sign > 0:
                    hi[m][t] = min(hi[m][t], a)
                else:
                    lo[m][t] = max(lo[m][t], a)
            bad.append((name, int(t)))
    return bad


def dms_coordinate(graph: MmgGraph, solve: Callable[[str, np.ndarray, np.ndarray], np.ndarray],
                   T: int, sub_capacity: float | None = None, cap: int = 20):
    """Iterate MG schedules until no line or substation limit is violated.

    ``solve(mg, lo, hi)`` returns the MG's exchange profile subject to the
    bounds.  Returns ``(ex, flows, sub, iterations)``.
    """
    mgs = graph.topological()
    hi = {m: np.full(T, np.inf) for m in mgs}
    lo = {m: np.full(T, -np.inf) for m in mgs}
    ex = {m: solve(m, lo[m], hi[m]) for m in mgs}
    for it in range(1, cap + 1):
        bad = congestion_caps(graph, ex, hi, lo, sub_capacity)
        if not bad:
            flows, sub = line_flows(graph, ex)
            return ex, flows, sub, it
        log.debug("DMS iteration %d: binding %s", it, sorted(set(n for n, _ in bad)))
        changed = {m for m in mgs if np.any(hi[m] < np.inf) or np.any(lo[m] > -np.inf)}
        for m in sorted(changed):
            ex[m] = solve(m, lo[m], hi[m])
    binding = sorted(set(n for n, _ in congestion_caps(graph, ex, hi, lo, sub_capacity)))
    if not binding:
        flows, sub = line_flows(graph, ex)
        return ex, flows, sub, cap
    raise DmsIterationError(f"congestion loop did not settle in {cap} iterations; binding: {binding}")
