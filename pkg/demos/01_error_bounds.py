"""Tour of the rounding-error bound calculus.

Shows how the square root of an accumulated error factor compresses the
error count: sqrt(1 + theta_n) stays within 1 + gamma(alpha*n) with
alpha just above one half, and for small n the integer bound
gamma(floor(n/2) + 1) applies.
"""
from givens import errbounds as eb

U32 = 2.0 ** -24
U64 = 2.0 ** -53

print("gamma(x, u) = x*u/(1-x*u), the worst-case factor for x roundings")
for x in (1, 2, 4, 10):
    print(f"  gamma({x:2d}, u32) = {eb.gamma(x, U32):.3e}")

print("\nsquare-root compression: sqrt(1+gamma_x) = 1+gamma_(abar*x)")
for x in (2, 10, 100, 4728):
    ab = eb.alpha_bar(x, U32)
    a = eb.alpha(x, U32)
    res = (1 + eb.gamma(ab * x, U32)) ** 2 - (1 + eb.gamma(x, U32))
    print(f"  x={x:5d}: alpha_bar={ab:.10f} alpha={a:.10f} "
          f"identity residual={res:+.1e}")

print("\ninteger criterion: |theta| <= gamma(floor(n/2)+1) holds up to...")
for name, u in (("binary32", U32), ("binary64", U64)):
    first = eb.first_failing_n(u)
    print(f"  {name}: first failing n = {first} "
          f"(so the bound holds for every n <= {first - 1})")

print("\nsmall-n table (binary32): gamma_(n/2) <= gamma_(alpha*n) "
      "<= gamma_(floor(n/2)+1)")
print(f"  {'n':>3} {'gamma_alpha_n':>14} {'gamma_half_n':>14} "
      f"{'gamma_floor+1':>14}")
for n, g_a, g_h, g_f in eb.small_n_table(10, U32):
    print(f"  {n:3d} {g_a:14.6e} {g_h:14.6e} {g_f:14.6e}")

ratio = eb.gamma(3, U32) / eb.gamma(4, U32)
print(f"\ngamma_3/gamma_4 = {ratio:.6f} < 0.75: expect error accumulation "
      "about 25% below the 4-rounding estimate")
