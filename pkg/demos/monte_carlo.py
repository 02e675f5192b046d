"""
A small Monte-Carlo study
=========================

MSE and median of the three estimators of nu over seeded replications,
on the design p = 100, AR(1) rho = 0.6. Pass the number of replications
as the first argument (default 50; the reference results use 500+).

The same study from the shell:

    heavytail bench --p 100 --n 150,300,600 --nu 3,5 --reps 500 --threads 4
"""

import sys

from heavytail.bench import run_grid
from heavytail.sampling import ExperimentDesign

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 50
base = ExperimentDesign(p=100, n=150, nu=5.0, rho=0.6, replications=reps, seed=1)

for report in run_grid(base, ns=[150, 300, 600], nus=[5.0]):
    print(f"n = {report.design.n}  ({report.wall_time:.1f} s)")
    for row in report.rows:
        print(f"  {row.method:>9}: median {row.median:6.3f}  IQR [{row.q1:6.3f}, {row.q3:6.3f}]  MSE {row.mse:7.3f}")
