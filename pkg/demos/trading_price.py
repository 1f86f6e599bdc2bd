"""Effect of the internal trade price on joint operation.

Microgrids in a joint zone only trade when the seller's price undercuts the
buyer's interruption cost.  In the bundled case the cheap load segments cost
0.1 to 0.2 $/MWh, so trades at the default price only rescue expensive
segments; lowering the price lets cheap segments import too and shows up as
less joint-operation EENS and nonzero IbGC.  SbER only counts sales made
while some buyer sheds load costing at least lambda_thr, so the last row
lowers that threshold as well.

    python demos/trading_price.py [years]
"""
import sys

from cpmmg import DispatchConfig, JointDispatchConfig, Simulation, SimulationConfig, build_series, load_bundled_case
from cpmmg.dispatch.normal import NormalCache

years = int(sys.argv[1]) if len(sys.argv) > 1 else 60
case = load_bundled_case()
series = build_series(case.series, 1, 0)
cache = NormalCache()
print(f"{'lambda_ser':>10s} {'lambda_thr':>10s} {'EENS':>8s} {'JO EENS':>8s} {'IbGC':>8s} {'SbER':>8s}")
for price, thr in ((1.0, 2.0), (0.5, 2.0), (0.05, 2.0), (0.01, 2.0), (0.01, 0.1)):
    joint = JointDispatchConfig(lambda_ser=price, lambda_thr=thr)
    cfg = SimulationConfig(years=years, seed=1, dispatch=DispatchConfig(joint))
    r = Simulation(case, series, cfg, cache).run()
    print(f"{price:10.2f} {thr:10.2f} {r.total:8.3f} {r.eens_mode('JO'):8.3f} {r.ibgc.sum():8.4f} {r.sber.sum():8.4f}")
