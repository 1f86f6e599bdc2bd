"""Fully coordinated operation of an islanded group of microgrids."""
from __future__ import annotations

from typing import Sequence

from .config import JointDispatchConfig
from .model import LpOptions, solve_dispatch
from .units import UnitData, UnitSchedule


def _edges(edges) -> list[tuple[tuple[int, ...], float]]:
    out = []
    for e in edges:
        side, cap = (e.side, e.capacity) if hasattr(e, "side") else e
        out.append((tuple(side), float(cap)))
    return out


def joint_step(units: Sequence[UnitData], soc_prev: Sequence[float | None], cfg: JointDispatchConfig,
               mean_price: float, edges=(), dump=None) -> list[UnitSchedule]:
    """One-hour pooled LP with the storage-hold term.

    The hold term ``lambda_ess * (c_{t-1} - c_t)`` expands to a credit of
    ``lambda_ess * eta_ch`` per MW charged and a charge of
    ``lambda_ess / eta_dch`` per MW discharged.
    """
    if any(u.T != 1 for u in units):
        raise ValueError("joint step takes one-hour units")
    opt = LpOptions(exchange="pool", hold=cfg.hold(mean_price), lambda_ser=cfg.lambda_ser,
                    edges=_edges(edges), name="joint_step")
    scheds, _ = solve_dispatch(units, soc_prev, opt, dump)
    return scheds


def joint_horizon(units: Sequence[UnitData], soc_start: Sequence[float | None], cfg: JointDispatchConfig,
                  edges=(), dump=None) -> tuple[list[UnitSchedule], float]:
    """Pooled LP over the predicted horizon (no hold term, free final SOC)."""
    opt = LpOptions(exchange="pool", lambda_ser=cfg.lambda_ser, edges=_edges(edges), name="joint_horizon")
    return solve_dispatch(units, soc_start, opt, dump)
