"""Year loop: sample histories, find contingency windows, dispatch, book EENS."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .adequacy import AdequacyLedger, AdequacyReport, summarize
from .casemodel import CYBER_KINDS, CaseModel, SwitchSpec, dumps_case
from .cybernet import CyberModel, Scenario
from .dispatch.config import DispatchConfig
from .dispatch.normal import NormalCache, NormalScheduler
from .dispatch.units import Plant
from .dispatch.window import WindowRunner
from .invariants import InvariantMonitor
from .sampler import HOURS, Sampler, contingency_windows
from .series import ExogenousSeries, build_series
from .zoning import Zoner

log = logging.getLogger(__name__)


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class SimulationConfig:
    years: int = 100
    seed: int = 0
    scenario: Scenario = Scenario()
    dispatch: DispatchConfig = DispatchConfig()
    check_invariants: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.years < 1:
            raise ValueError("years must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def scenario_transform(case: CaseModel, flags: Scenario) -> CaseModel:
    """Case variant for a study scenario.

    ``ideal_cyber`` zeroes every cyber failure rate; ``no_internal_protection``
    turns internal switches into solid joints and drops their components;
    ``backup_supply`` enables the backup tie.  Distributed control and the
    indirect-impact ablation act on the consequence mapping instead.
    """
    if flags.ideal_cyber and (flags.distributed_control or flags.ablate_indirect):
        raise ScenarioError("--ideal-cyber already removes every cyber failure; "
                            "it cannot be combined with --distributed-control or --ablate-indirect")
    comps = dict(case.components)
    switches = dict(case.switches)
    edges = list(case.cyber_edges)
    graph = case.graph
    if flags.ideal_cyber:
        comps = {k: (dataclasses.replace(c, failure_rate=0.0) if c.kind in CYBER_KINDS else c)
                 for k, c in comps.items()}
    if flags.no_internal_protection:
        gone = set()
        for key, sw in list(switches.items()):
            if sw.role == "internal" and sw.id is not None:
                gone.update(x for x in (sw.id, sw.cbc) if x)
                switches[key] = SwitchSpec(None, "internal", sw.ends)
        for e in edges:
            if e.a in gone or e.b in gone:
                gone.add(e.id)
        edges = [e for e in edges if e.id not in gone]
        comps = {k: c for k, c in comps.items() if k not in gone}
    if flags.backup_supply:
        if graph.backup is None:
            raise ScenarioError("--backup-supply: the case defines no backup tie")
        graph = dataclasses.replace(graph, backup=dataclasses.replace(graph.backup, enabled=True))
    return dataclasses.replace(case, components=comps, switches=switches, cyber_edges=tuple(edges), graph=graph)


def config_hash(case: CaseModel, config: SimulationConfig, series: ExogenousSeries) -> str:
    h = hashlib.sha256(dumps_case(case).encode())
    h.update(json.dumps(_config_dict(config), sort_keys=True, default=str).encode())
    for a in (series.wind_cf, series.pv_cf, series.load_frac, series.price):
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()


def _config_dict(config: SimulationConfig) -> dict:
    d = dataclasses.asdict(config)
    d["dispatch"].pop("lp_dump_dir", None)
    d.pop("threads", None)
    d.pop("check_invariants", None)
    return d


@dataclass
class Simulation:
    """Bound objects of one run; exposed for inspection and tests."""

    case: CaseModel
    series: ExogenousSeries
    config: SimulationConfig
    normal_cache: NormalCache | None = None
    monitor: InvariantMonitor | None = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        cfg = self.config
        self.case_t = scenario_transform(self.case, cfg.scenario)
        self.plant = Plant(self.case_t, self.series)
        self.cyber = CyberModel(self.case_t, cfg.scenario)
        self.zoner = Zoner(self.case_t)
        self.normal = NormalScheduler(self.case_t, self.plant, cfg.dispatch, self.normal_cache)
        self.ledger = AdequacyLedger(self.case_t.mg_tags,
                                     {m: self.plant.catalog(m).costs for m in self.case_t.mg_tags})
        if cfg.check_invariants and self.monitor is None:
            self.monitor = InvariantMonitor()
        self.runner = WindowRunner(self.case_t, self.plant, self.normal, self.ledger, cfg.dispatch, self.monitor)
        self.transformers = frozenset(c.id for c in self.case_t.components.values() if c.kind == "transformer")
        self.stats = {"windows": 0, "dispatched": 0}

    def run_year(self, year: int, windows) -> None:
        self.ledger.new_year(year)
        carried: dict | None = None
        prev_end = None
        for w in windows:
            self.stats["windows"] += 1
            frame = self.cyber.frame(w.failed)
            ctx = self.zoner.context(frame)
            if ctx.is_normal() and not (w.failed & self.transformers):
                carried, prev_end = None, None
                continue
            self.stats["dispatched"] += 1
            base = carried if (carried is not None and prev_end == w.start) else {}
            start_abs = year * HOURS + w.start

            def soc_start(mg, base=base, start_abs=start_abs):
                if mg in base and base[mg] is not None:
                    return base[mg]
                return self.normal.soc_at(mg, start_abs)

            carried = self.runner.run_window(ctx, frame, year, w.start, w.end, soc_start)
            prev_end = w.end

    def run(self) -> AdequacyReport:
        cfg = self.config
        t0 = time.perf_counter()
        sampler = Sampler(self.case_t, cfg.seed)
        years = [(y, contingency_windows(sampler.next_year())) for y in range(cfg.years)]
        if cfg.threads > 1:
            with ThreadPoolExecutor(cfg.threads) as pool:
                list(pool.map(lambda a: self.run_year(*a), years))
        else:
            for y, ws in years:
                self.run_year(y, ws)
        if self.monitor is not None:
            self.monitor.check_ledger(self.ledger)
        meta = {
            "seed": cfg.seed,
            "years": cfg.years,
            "scenario": dataclasses.asdict(cfg.scenario),
            "t_ini": cfg.dispatch.prediction.t_ini,
            "lambda_ser": cfg.dispatch.joint.lambda_ser,
            "lambda_thr": cfg.dispatch.joint.lambda_thr,
            "lambda_ess": (cfg.dispatch.joint.lambda_ess if cfg.dispatch.joint.lambda_ess is not None
                           else self.series.mean_price),
            "config_hash": config_hash(self.case, cfg, self.series),
            "case": self.case.name,
        }
        report = summarize(self.ledger, meta)
        self.stats["wall_time"] = time.perf_counter() - t0
        return report


def simulate(case: CaseModel, series: ExogenousSeries | None = None,
             config: SimulationConfig | None = None, normal_cache: NormalCache | None = None,
             monitor: InvariantMonitor | None = None) -> AdequacyReport:
    """Run the adequacy study and return the annualised report."""
    config = config or SimulationConfig()
    if series is None:
        series = build_series(case.series, 1, config.seed)
    return Simulation(case, series, config, normal_cache, monitor).run()
