"""One microgrid fed only by the upstream grid: EENS against the two-state formula.

With a flat 1 MW load, an upstream supply that fails at rate lam and is
repaired at rate mu is unavailable for a fraction lam / (lam + mu) of the
time, so the expected energy not supplied is 8760 * lam / (lam + mu) MWh/yr.

    python demos/single_microgrid_check.py
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from conftest import single_mg_doc  # noqa: E402

from cpmmg import SimulationConfig, parse_case_document, simulate  # noqa: E402

lam, mu = 1.0, 100.0
case = parse_case_document(single_mg_doc(lam=lam, mu=mu))
expect = 8760 * lam / (lam + mu)
for years in (100, 500, 2000):
    r = simulate(case, config=SimulationConfig(years=years, seed=0))
    print(f"{years:5d} years  EENS {r.total:8.3f} MWh/yr  analytic {expect:.3f}  "
          f"error {100 * (r.total / expect - 1):+5.2f} %  CoV {r.cov:.4f}")
