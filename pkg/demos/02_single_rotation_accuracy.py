"""Single-rotation accuracy shoot-out at desk scale.

Generates random pairs with uniform angles and log-uniform moduli, runs
every complex generator, and prints the accuracy tables: the deviation of
the singular value sigma = sqrt(c^2 + |s|^2) from 1, and relative
backward errors, all in units of the binary32 unit roundoff.
"""
from givens import experiments as xp
from givens.rotations import COMPLEX_ALGOS
from givens.sampling import default_spec

SAMPLES = 200_000

spec = default_spec(SAMPLES, seed=1)
results = {algo: xp.run_single_accuracy(algo, spec, threads=2)
           for algo in COMPLEX_ALGOS}

print(f"sigma errors over {SAMPLES} samples, in units of u:")
print(f"  {'algo':10} {'avg':>9} {'std':>8} {'avg|.|':>8} "
      f"{'std|.|':>8} {'max|.|':>8}")
for algo, res in results.items():
    st = res.sigma_stats
    print(f"  {algo.value:10} {st.avg:+9.2e} {st.std:8.3f} "
          f"{st.avg_abs:8.3f} {st.std_abs:8.3f} {st.max_abs:8.3f}")

print("\nrelative backward errors, in units of u:")
for algo, res in results.items():
    st = res.backward_stats
    print(f"  {algo.value:10} avg={st.avg:6.3f}  max={st.max_abs:6.3f}")

print("\nexpected ordering: cast < new < 3.9-style < 3.10-style "
      "on both tables")
