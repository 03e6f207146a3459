"""Attitude and gyro-bias RMSE of the three navigation filters over time.

A smaller version of ``twoframes bench``: fewer runs, printed as a table.

    python demos/nav_benchmark.py [runs] [seed]
"""
import sys

from twoframes.scenarios import ScenarioConfig, run_monte_carlo

runs = int(sys.argv[1]) if len(sys.argv) > 1 else 20
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
cfg = ScenarioConfig(runs=runs, seed=seed)
res = run_monte_carlo(cfg)

marks = [0.0, 10.0, 20.0, 40.0, 60.0, 80.0]
idx = [int(round(m / cfg.dt_s)) for m in marks]
for metric, label in (("rmse_att_deg", "attitude RMSE [deg]"), ("rmse_bw_degps", "gyro bias RMSE [deg/s]")):
    print(label)
    print(f"  {'t [s]':<10}" + "".join(f"{m:>9.0f}" for m in marks))
    for f, curves in res.rmse.items():
        print(f"  {f:<10}" + "".join(f"{curves[metric][k]:9.3f}" for k in idx))
print("runtime [s]: " + ", ".join(f"{f} {s:.1f}" for f, s in res.runtime_s.items()))
