"""Bounds for square roots of accumulated rounding-error factors.

A chain of ``x`` roundings perturbs a value by at most
``gamma(x, u) = x*u / (1 - x*u)``.  Taking a square root of such a
perturbed value compresses the error: ``sqrt(1 + theta_n)`` can be
written ``1 + theta`` with ``|theta| <= gamma(alpha(n, u) * n, u)``
where ``alpha`` lies strictly between one half and one, and for small
``n`` the integer-index bound ``gamma(floor(n/2) + 1, u)`` applies.

All bound arithmetic here is evaluated in binary64 regardless of which
format's unit roundoff ``u`` is passed.  The factors ``alpha`` and
``alpha_bar`` are computed through the cancellation-free rewriting
``(1 - sqrt(1 - w)) / w == 1 / (1 + sqrt(1 - w))`` so that the defining
identities can be checked to a few ulps.  Note that for ``x*u`` below
about ``2**-52`` the true values ``0.5 + O(x*u)`` round to exactly 0.5
in binary64.
"""
from __future__ import annotations

import math
from typing import Iterator


def gamma(x: float, u: float) -> float:
    """Worst-case relative error factor ``x*u / (1 - x*u)``.

    ``x`` counts accumulated roundings and may be fractional.  Strictly
    increasing in ``x`` over the domain ``0 <= x < 1/u``.
    """
    if not 0 <= x < 1.0 / u:
        raise ValueError(f"gamma requires 0 <= x < 1/u, got x={x}, 1/u={1.0 / u}")
    w = x * u
    return w / (1.0 - w)


def alpha_bar(x: float, u: float) -> float:
    """Factor with ``sqrt(1 + gamma(x, u)) == 1 + gamma(alpha_bar * x, u)``."""
    if not 0 < x < 1.0 / u:
        raise ValueError(f"alpha_bar requires 0 < x < 1/u, got x={x}")
    w = x * u
    return 1.0 / (1.0 + math.sqrt(1.0 - w))


def alpha(x: float, u: float) -> float:
    """Factor with ``sqrt(1 - gamma(x, u)) == 1 - gamma(alpha * x, u)``.

    Valid for ``0 < x < 1/(2u)``; always at least :func:`alpha_bar`.
    """
    if not 0 < x < 0.5 / u:
        raise ValueError(f"alpha requires 0 < x < 1/(2u), got x={x}")
    w = x * u
    v = w * (3.0 - 2.0 * w)
    return 1.0 / (1.0 + math.sqrt(1.0 - v))


def sqrt_theta_bound(n: int, u: float) -> float:
    """Guaranteed bound on ``|theta|`` where ``1 + theta = sqrt(1 + theta_n)``."""
    if n * u > 0.5:
        raise ValueError(f"sqrt_theta_bound requires n*u <= 1/2, got n={n}")
    return gamma(alpha(n, u) * n, u)


def _as_power_of_two_exponent(u: float) -> int:
    p = round(-math.log2(u))
    if 2.0 ** -p != u:
        raise ValueError(f"unit roundoff {u!r} is not a power of two")
    return p


def floor_half_criterion(n: int, u: float) -> bool:
    """Whether ``sqrt(1 + theta_n)`` admits the bound ``gamma(floor(n/2)+1, u)``.

    Tests ``(3 - 2*n*u) * (floor(n/2)+1)**2 * u <= 2 + floor(n/2) - ceil(n/2)``
    exactly, in integer arithmetic.  The right-hand side is 2 for even ``n``
    and 1 for odd ``n``, so the first failures appear on odd ``n``; the
    criterion is monotone within each parity class but not overall.
    """
    if n < 1:
        raise ValueError(f"floor_half_criterion requires n >= 1, got {n}")
    if n * u > 0.5:
        raise ValueError(f"floor_half_criterion requires n*u <= 1/2, got n={n}")
    p = _as_power_of_two_exponent(u)
    m = n // 2 + 1
    rhs = 2 - (n & 1)
    return (3 * (1 << p) - 2 * n) * m * m <= rhs * (1 << (2 * p))


def first_failing_n(u: float) -> int:
    """Smallest ``n`` rejected by :func:`floor_half_criterion`.

    The first failure is an odd ``n`` (the even side has an extra unit of
    slack), and within odd ``n`` the criterion flips from holding to
    failing exactly once, so an expanding search plus bisection is exact.
    """
    lo, hi = 1, 3
    while floor_half_criterion(hi, u):
        lo, hi = hi, min(2 * hi + 1, int(0.5 / u))
    # smallest failing odd n in (lo, hi]
    while hi - lo > 2:
        mid = ((lo + hi) // 2) | 1
        if floor_half_criterion(mid, u):
            lo = mid
        else:
            hi = mid
    return hi


def small_n_table(n_max: int, u: float) -> list[tuple[int, float, float, float]]:
    """Rows ``(n, gamma(alpha*n), gamma(n/2), gamma(floor(n/2)+1))``."""
    if n_max * u > 0.5:
        raise ValueError(f"small_n_table requires n_max*u <= 1/2, got {n_max}")
    rows = []
    for n in range(1, n_max + 1):
        rows.append((n,
                     gamma(alpha(n, u) * n, u),
                     gamma(n / 2.0, u),
                     gamma(n // 2 + 1, u)))
    return rows


SMALL_N_CSV_HEADER = "n,gamma_alpha_n,gamma_half_n,gamma_floor_half_plus1"


def small_n_table_csv(n_max: int, u: float) -> Iterator[str]:
    """CSV lines for the bound-comparison table, 17 significant digits."""
    yield SMALL_N_CSV_HEADER
    for n, g_a, g_h, g_f in small_n_table(n_max, u):
        yield f"{n},{g_a:.16e},{g_h:.16e},{g_f:.16e}"
