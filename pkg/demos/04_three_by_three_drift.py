"""Rotating a 3x3 identity many times: norm drift and orthogonality.

Rotations are applied round-robin to the coordinate planes (1,2), (2,3),
(1,3).  Each row is hit by two of every three rotations, so the Frobenius
norm of the product satisfies
1.5*(||V_M||_F/sqrt(3) - 1) ~ prod(sigma_i) - 1, while the off-diagonal
mass of V^H V measures the loss of orthogonality (which the 2x2 case
cannot show).
"""
from givens import experiments as xp
from givens.rotations import COMPLEX_ALGOS

M = 3000
N = 60

print("round-robin plane schedule:",
      [xp.schedule_3x3(k) for k in range(1, 7)], "...")

print(f"\nM={M} rotations, N={N} repetitions (u units):")
print(f"  {'algo':10} {'prod-1':>9} {'norm proxy':>11} {'offdiag':>9}")
for algo in COMPLEX_ALGOS:
    res = xp.run_accum3(algo, m=M, n=N, seed=1, threads=2)
    print(f"  {algo.value:10} {res.prod_stats.avg:9.2f} "
          f"{res.norm_stats.avg:11.2f} {res.ortho_stats.avg:9.2f}")

print("\nnorm proxy tracks prod-1; the reduced-rounding generator keeps "
      "the columns most orthogonal")
