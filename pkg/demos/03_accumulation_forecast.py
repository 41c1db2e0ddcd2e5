"""Forecasting the drift of long rotation products.

A product of M singular values drifts away from 1; because log(product)
is a sum of many small independent terms, the product is approximately
log-normal with mu_Y = mu_X**M and
sigma_Y = mu_X**M * sqrt(exp(M*(sigma_X/mu_X)**2) - 1).  This demo
measures the drift directly and compares it with the forecast computed
from the same run's per-rotation moments.
"""
from givens import experiments as xp
from givens.rotations import COMPLEX_ALGOS

M = 3000
N = 400

print(f"products of M={M} singular values, N={N} repetitions (u units):")
print(f"  {'algo':10} {'measured avg':>13} {'forecast avg':>13} "
      f"{'measured std':>13} {'forecast std':>13}")
for algo in COMPLEX_ALGOS:
    res = xp.run_accum2(algo, m=M, n=N, seed=1, threads=2)
    fc = res.forecast
    print(f"  {algo.value:10} {res.stats.avg:13.2f} {fc.mu_y_err_u:13.2f} "
          f"{res.stats.std:13.2f} {fc.sigma_y_u:13.2f}")

print("\nthe drift scales like M * avg(sigma-1) and the spread like "
      "sqrt(M) * std(sigma): pick the generator with the smallest bias")
