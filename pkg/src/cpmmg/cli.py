"""Command-line front end: run a study and write plot-ready reports."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from .adequacy import MODES, AdequacyReport, coefficient_of_variation, histogram
from .casemodel import CaseError, bundled_case_path, parse_case
from .cybernet import Scenario
from .dispatch.config import DispatchConfig, JointDispatchConfig, PredictionPolicy
from .engine import ScenarioError, SimulationConfig, Simulation
from .series import build_series

log = logging.getLogger("cpmmg")

REPORT_FILES = ("eens_by_mode.csv", "ibgc_sber.csv", "convergence.csv", "histogram.csv", "summary.json")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cpmmg", description="Monte Carlo adequacy study of a cyber-physical multi-microgrid system.",
                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a study and write reports", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    r.add_argument("--case", default=str(bundled_case_path()), help="case JSON file")
    r.add_argument("--years", type=int, default=1000, help="number of sample years")
    r.add_argument("--seed", type=int, default=0, help="master random seed")
    r.add_argument("--out", default="out", help="output directory")
    r.add_argument("--ideal-cyber", action="store_true", help="no cyber component ever fails")
    r.add_argument("--no-internal-protection", action="store_true", help="remove switches inside microgrids")
    r.add_argument("--backup-supply", action="store_true", help="enable the backup tie")
    r.add_argument("--distributed-control", action="store_true",
                   help="lower-level controllers take over when the DMS or an MGCC fails")
    r.add_argument("--ablate-indirect", action="store_true",
                   help="ignore switch mis-operation and load-controller consequences")
    r.add_argument("--t-ini", type=int, default=None, help="hours before the repair time is predicted (case default)")
    r.add_argument("--lambda-thr", type=float, default=None, help="$/MWh threshold for expensive interruptions (case default)")
    r.add_argument("--lambda-ser", type=float, default=None, help="$/MWh internal trade price (case default)")
    r.add_argument("--lambda-ess", type=float, default=None, help="$/MWh storage hold value (mean energy price)")
    r.add_argument("--emit-lp-dumps", action="store_true", help="write every LP to OUT/lp/")
    r.add_argument("--threads", type=int, default=1, help="worker threads for year dispatch")
    r.add_argument("--check-invariants", action="store_true", help="audit every dispatched hour")
    r.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args, case) -> SimulationConfig:
    d = case.defaults
    pick = lambda v, key, default: v if v is not None else d.get(key, default)  # noqa: E731
    joint = JointDispatchConfig(lambda_ser=float(pick(args.lambda_ser, "lambda_ser", 0.5)),
                                lambda_ess=args.lambda_ess,
                                lambda_thr=float(pick(args.lambda_thr, "lambda_thr", 2.0)))
    pred = PredictionPolicy(t_ini=int(pick(args.t_ini, "t_ini", 1)))
    dispatch = DispatchConfig(joint, pred, dms_iteration_cap=int(d.get("dms_iteration_cap", 20)),
                              lp_dump_dir=str(Path(args.out) / "lp") if args.emit_lp_dumps else None)
    scenario = Scenario(distributed_control=args.distributed_control, ablate_indirect=args.ablate_indirect,
                        no_internal_protection=args.no_internal_protection, backup_supply=args.backup_supply,
                        ideal_cyber=args.ideal_cyber)
    return SimulationConfig(years=args.years, seed=args.seed, scenario=scenario, dispatch=dispatch,
                            check_invariants=args.check_invariants, threads=args.threads)


def _f(x: float) -> str:
    return repr(float(x))


def emit_reports(report: AdequacyReport, out, formats=("csv", "json")) -> list[Path]:
    """Write the report files into ``out`` and return their paths."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def table(name, header, rows):
        path = out / name
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        written.append(path)

    if "csv" in formats:
        rows = []
        for i, m in enumerate(report.mg_tags):
            for r, c in enumerate(report.seg_costs[m]):
                for k, mode in enumerate(MODES):
                    rows.append([m, r + 1, _f(c), mode, _f(report.eens[i, r, k])])
        table("eens_by_mode.csv", ["mg", "segment", "cost", "mode", "eens_mwh_per_year"], rows)
        rows = [[m, r + 1, _f(c), _f(report.ibgc[i, r]), _f(report.sber[i, r])]
                for i, m in enumerate(report.mg_tags) for r, c in enumerate(report.seg_costs[m])]
        table("ibgc_sber.csv", ["mg", "segment", "cost", "ibgc_mwh_per_year", "sber_mwh_per_year"], rows)
        y = report.yearly_totals
        run = report.convergence()
        rows = []
        for n in range(1, len(y) + 1):
            cov = coefficient_of_variation(y[:n])
            rows.append([n, _f(run[n - 1]), "" if cov is None else _f(cov)])
        table("convergence.csv", ["years", "mean_eens", "cov"], rows)
        edges, counts = histogram(y)
        table("histogram.csv", ["bin_lo", "bin_hi", "count"],
              [[_f(edges[i]), _f(edges[i + 1]), int(counts[i])] for i in range(len(counts))])
    if "json" in formats:
        summary = {
            "seed": report.meta.get("seed"),
            "years": report.years,
            "config_hash": report.meta.get("config_hash"),
            "total_eens": report.total,
            "cov": report.cov,
            "eens_by_mg": {m: report.eens_mg(m) for m in report.mg_tags},
            "eens_by_mode": {mode: report.eens_mode(mode) for mode in MODES},
            "ibgc_total": float(report.ibgc.sum()),
            "sber_total": float(report.sber.sum()),
            "meta": report.meta,
        }
        path = out / "summary.json"
        path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


def prepare(args) -> Simulation:
    """Everything that can fail on bad input: case, flags, series, scenario."""
    case = parse_case(args.case)
    config = config_from_args(args, case)
    series = build_series(case.series, 1, config.seed)
    return Simulation(case, series, config)


def execute(sim: Simulation, out) -> int:
    t0 = time.perf_counter()
    report = sim.run()
    emit_reports(report, out)
    wall = time.perf_counter() - t0
    cov = "n/a" if report.cov is None else f"{report.cov:.4f}"
    print(f"total EENS {report.total:.4f} MWh/yr  CoV {cov}  years {report.years}  wall {wall:.1f} s")
    if sim.monitor is not None and not sim.monitor.ok:
        for kind, detail in sim.monitor.violations[:20]:
            print(f"invariant {kind}: {detail}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    """Exit 0 on success, 1 on invalid input, 2 on failures during the run."""
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        sim = prepare(args)
    except (UsageError, CaseError, ScenarioError, ValueError, OSError) as e:
        print(f"cpmmg: error: {e}", file=sys.stderr)
        return 1
    try:
        return execute(sim, args.out)
    except Exception as e:  # solver failures, unwritable output
        print(f"cpmmg: runtime error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
