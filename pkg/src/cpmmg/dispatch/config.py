"""Dispatch settings: joint-operation prices and repair-time prediction policy."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class JointDispatchConfig:
    """Prices used in joint operation.

    ``lambda_ess`` None means the mean energy price of the series.  Setting
    ``lambda_ess_charge``/``lambda_ess_discharge`` splits the storage-hold
    multiplier so stored energy is only released for dearer segments.
    """

    lambda_ser: float = 0.5
    lambda_ess: float | None = None
    lambda_thr: float = 2.0
    lambda_ess_charge: float | None = None
    lambda_ess_discharge: float | None = None

    def __post_init__(self):
        if not self.lambda_ser > 0:
            raise ValueError("lambda_ser must be > 0")
        if self.lambda_ess is not None and self.lambda_ess < 0:
            raise ValueError("lambda_ess must be >= 0")

    def hold(self, mean_price: float) -> tuple[float, float]:
        base = mean_price if self.lambda_ess is None else self.lambda_ess
        ch = base if self.lambda_ess_charge is None else self.lambda_ess_charge
        dch = base if self.lambda_ess_discharge is None else self.lambda_ess_discharge
        return ch, dch


@dataclass(frozen=True)
class PredictionPolicy:
    """When the remaining repair time becomes known and how well.

    ``t_ini`` hours are run with the one-hour strategies.  After that the
    horizon problem covers the predicted remaining duration, re-solved at the
    hour offsets in ``updates``.  ``scale`` multiplies the true remaining
    duration (1.0 = exact first prediction).
    """

    t_ini: int = 1
    updates: Sequence[int] = ()
    scale: float = 1.0

    def __post_init__(self):
        if self.t_ini < 1:
            raise ValueError("t_ini must be >= 1")
        if self.scale <= 0:
            raise ValueError("scale must be > 0")

    def predicted_end(self, now: int, true_end: int) -> int:
        remaining = true_end - now
        return now + max(1, int(math.ceil(remaining * self.scale - 1e-9)))

    def update_points(self, start: int, stop: int) -> list[int]:
        return sorted({start + u for u in self.updates if 0 < u and start + u < stop})


@dataclass(frozen=True)
class DispatchConfig:
    joint: JointDispatchConfig = JointDispatchConfig()
    prediction: PredictionPolicy = PredictionPolicy()
    dms_iteration_cap: int = 20
    ess_reserve_cost: float | None = None  # island one-hour rule: keep storage for dearer segments
    lp_dump_dir: str | None = None
