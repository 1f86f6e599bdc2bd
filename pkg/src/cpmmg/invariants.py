"""Runtime checks of physical and bookkeeping invariants.

The monitor is optional; when attached to a run it inspects every
dispatched hour and every operation context and keeps a list of breaches
instead of raising, so a whole run can be audited at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .adequacy import AdequacyLedger, summarize
from .zoning import IO, JO, NO, OperationContext

BAL_TOL = 1e-6
BOUND_TOL = 1e-7


@dataclass
class InvariantMonitor:
    hours: int = 0
    contexts: int = 0
    violations: list = field(default_factory=list)

    def _fail(self, kind: str, detail: str) -> None:
        self.violations.append((kind, detail))

    def check_schedule(self, s) -> None:
        u = s.unit
        self.hours += u.T
        res = np.abs(s.balance_residual())
        if res.max(initial=0.0) > BAL_TOL:
            self._fail("energy-balance", f"{u.mg} hours {u.hours[res > BAL_TOL][:3]} residual {res.max():.3g}")
        lo_bad = min(s.de.min(initial=0), s.ch.min(initial=0), s.dch.min(initial=0), s.w.min(initial=0),
                     s.pv.min(initial=0), s.shed_ctrl.min(initial=0), s.shed_unctrl.min(initial=0))
        if lo_bad < -BOUND_TOL:
            self._fail("bounds", f"{u.mg} negative dispatch {lo_bad:.3g}")
        if np.any(s.w > u.wind + BOUND_TOL) or np.any(s.pv > u.pv + BOUND_TOL):
            self._fail("bounds", f"{u.mg} renewable above availability")
        if np.any(s.de > u.de_cap[:, None] + BOUND_TOL):
            self._fail("bounds", f"{u.mg} diesel above capacity")
        if np.any(s.shed_ctrl > u.ctrl + BOUND_TOL) or np.any(s.shed_unctrl > u.unctrl + BOUND_TOL):
            self._fail("shedding", f"{u.mg} shedding above its bound")
        ls = s.ls
        if np.any(ls < u.forced - BOUND_TOL) or np.any(ls > u.lhat + BOUND_TOL):
            self._fail("shedding", f"{u.mg} interruption outside [forced, demand]")
        if u.ess is not None:
            e = u.ess
            if np.any(s.ch > e.max_charge * u.phi_ess + BOUND_TOL) or \
                    np.any(s.dch > e.max_discharge * u.phi_ess + BOUND_TOL):
                self._fail("soc", f"{u.mg} storage power above rating")
            if np.any(s.soc < e.soc_min - BOUND_TOL) or np.any(s.soc > e.soc_max + BOUND_TOL):
                self._fail("soc", f"{u.mg} SOC outside bounds")
            prev = np.concatenate([[s.soc0], s.soc[:-1]])
            step = s.soc - prev - (s.ch * e.charge_eff - s.dch / e.discharge_eff) * u.dt
            if np.abs(step).max(initial=0.0) > BAL_TOL:
                self._fail("soc", f"{u.mg} SOC recursion off by {np.abs(step).max():.3g}")

    def check_pool(self, scheds, zone) -> None:
        net = sum(s.ex for s in scheds)
        if np.abs(net).max(initial=0.0) > BAL_TOL:
            self._fail("energy-balance", f"pooled exchange does not net to zero ({np.abs(net).max():.3g})")
        for e in zone.edges:
            flow = sum((scheds[k].ex for k in e.side), np.zeros(scheds[0].unit.T))
            if np.abs(flow).max(initial=0.0) > e.capacity + BAL_TOL:
                self._fail("line-limit", f"{e.line} flow {np.abs(flow).max():.3g} > {e.capacity}")

    def check_context(self, case, ctx: OperationContext) -> None:
        self.contexts += 1
        seen = set()
        for z in ctx.zones:
            if seen & z.sections:
                self._fail("zone-partition", "zones overlap")
            seen |= z.sections
            n = len(z.parts)
            if z.mode == JO and n < 2 or z.mode == IO and n != 1:
                self._fail("zone-partition", f"{z.mode} zone with {n} microgrids")
            if z.mode == NO and z.supplier is None:
                self._fail("zone-partition", "normal zone without a supplier")
            for p in z.parts:
                if not p.sections <= z.sections:
                    self._fail("zone-partition", "part outside its zone")
        if seen & ctx.dead:
            self._fail("zone-partition", "dead section inside a zone")
        every = set(case.section_owner())
        if (seen | ctx.dead) != every:
            self._fail("zone-partition", f"sections not covered: {sorted(every - seen - ctx.dead)}")

    def check_ledger(self, ledger: AdequacyLedger) -> None:
        """Merging year records in different groupings must give identical reports."""
        years = ledger.years
        if len(years) < 3:
            return
        parts = []
        for k in range(3):
            sub = AdequacyLedger(ledger.mg_tags, ledger.seg_costs)
            sub.records = {y: ledger.records[y] for y in years if y % 3 == k}
            parts.append(sub)
        a, b, c = parts
        r1 = summarize(a.merge(b).merge(c))
        r2 = summarize(a.merge(b.merge(c)))
        r3 = summarize(c.merge(a).merge(b))
        for r in (r2, r3):
            if not (np.array_equal(r1.eens, r.eens) and np.array_equal(r1.ibgc, r.ibgc)
                    and np.array_equal(r1.sber, r.sber)):
                self._fail("ledger-merge", "merge order changed the report")

    @property
    def ok(self) -> bool:
        return not self.violations
