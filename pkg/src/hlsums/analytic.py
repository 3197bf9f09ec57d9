"""Deterministic analytic quantities for the smoothed orbit-count
second moment: the A/B kernels, the S0/T0/F coordinates, turning-point
factors y1/y2, stationary-phase amplitudes, dyadic-grid region
predicates, shift constants, and the oscillatory cutoff transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .smoothweights import _leggauss, psi0


def default_grid(big_x: float) -> Tuple[int, ...]:
    """Integer grid 3 = a_1 < ... < a_I < 1+sqrt(X+2) <= a_{I+1} < 2+sqrt(X+2)
    with a_{i+1} <= 3a_i/2 and the gap to 3+sqrt(X+2) at most halving."""
    if big_x <= 4:
        raise ValueError("grid needs X > 4")
    s = math.sqrt(big_x + 2.0)
    low = 1.0 + s
    grid = [3]
    while True:
        a = grid[-1]
        nxt = min(3 * a // 2, math.floor((a + 3.0 + s) / 2.0))
        if nxt <= a:
            raise AssertionError("grid stalled")  # unreachable for X > 4
        if nxt >= low:
            grid.append(min(nxt, math.ceil(low)))
            return tuple(grid)
        grid.append(nxt)


@dataclass(frozen=True)
class AnalyticContext:
    """Everything a region predicate needs: the radius X, difference
    scale d, smoothing time tau, difference order J, the dyadic grid,
    and the small exponents (delta, delta0, alpha, beta1)."""

    big_x: float
    d: float
    tau: float
    big_j: int
    grid: Tuple[int, ...]
    delta: float = 0.01
    delta0: float = 0.005
    alpha: float = 0.01
    beta1: float = 0.05

    def __post_init__(self):
        x = self.big_x
        if x <= 4:
            raise ValueError("X must exceed 4")
        if not (x ** (2.0 / 3.0) - 1e-9 <= self.d <= x**0.99 + 1e-9):
            raise ValueError("d must lie in [X^(2/3), X^(99/100)]")
        if not 1.0 <= self.tau <= 2.0:
            raise ValueError("tau must lie in [1, 2]")
        if self.big_j < 1:
            raise ValueError("J must be a positive integer")
        if min(self.delta, self.delta0, self.alpha, self.beta1) <= 0:
            raise ValueError("exponent parameters must be positive")
        g = self.grid
        s = math.sqrt(x + 2.0)
        if g[0] != 3 or any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError("grid must start at 3 and increase")
        if any(2 * b > 3 * a for a, b in zip(g, g[1:])):
            raise ValueError("grid grows faster than 3/2")
        if any(3.0 + s - a > 2.0 * (3.0 + s - b) for a, b in zip(g, g[1:])):
            raise ValueError("gap to 3+sqrt(X+2) must at most halve per step")
        if not (g[-2] < 1.0 + s <= g[-1] < 2.0 + s):
            raise ValueError("last grid point must be the unique one in [1+sqrt(X+2), 2+sqrt(X+2))")


def make_context(
    big_x: float,
    d: float | None = None,
    tau: float = 1.5,
    big_j: int = 2,
    **exponents,
) -> AnalyticContext:
    if d is None:
        d = big_x ** (5.0 / 7.0)
    return AnalyticContext(big_x, d, tau, big_j, default_grid(big_x), **exponents)


def ab_funcs(s: float, t: float) -> Tuple[float, float]:
    """A = sqrt((1+S^2)(1+T^2)) - ST and B = sqrt((1+S^2)(1+T^2)) + ST."""
    if s < 0 or t < 0:
        raise ValueError("ab_funcs expects nonnegative arguments")
    root = math.sqrt((1.0 + s * s) * (1.0 + t * t))
    return root - s * t, root + s * t


def a_minus_one_stable(s: float, t: float) -> float:
    """A(S,T) - 1 evaluated without cancellation:
    (S-T)^2 / (sqrt((1+S^2)(1+T^2)) + ST + 1)."""
    root = math.sqrt((1.0 + s * s) * (1.0 + t * t))
    return (s - t) ** 2 / (root + s * t + 1.0)


@dataclass(frozen=True)
class STPoint:
    s0: float
    t0: float
    big_f: float


def s0_of(ctx: AnalyticContext, j: int, t: int) -> float:
    """sqrt((X - j*d*tau - 2)/(t^2 - 4) - 1)."""
    if t <= 2:
        raise ValueError("trace parameter must exceed 2")
    rad = (ctx.big_x - j * ctx.d * ctx.tau - 2.0) / (t * t - 4.0) - 1.0
    if rad < 0:
        raise ValueError("negative radicand in S0/T0")
    return math.sqrt(rad)


def s0t0f(
    ctx: AnalyticContext, j1: int, j2: int, t1: int, t2: int, f: int
) -> STPoint:
    s0 = s0_of(ctx, j1, t1)
    t0 = s0_of(ctx, j2, t2)
    big_f = abs(f) / (math.sqrt(t1 * t1 - 4.0) * math.sqrt(t2 * t2 - 4.0))
    return STPoint(s0, t0, big_f)


def y1(p: STPoint) -> float:
    """sqrt((B-F)(A+F)) / (T0 + S0*F); defined for F <= B."""
    a, b = ab_funcs(p.s0, p.t0)
    if p.big_f > b:
        raise ValueError("y1 requires F <= B")
    den = p.t0 + p.s0 * p.big_f
    if den == 0.0:
        raise ValueError("vanishing denominator in y1")
    return math.sqrt((b - p.big_f) * (a + p.big_f)) / den


def y2(p: STPoint) -> float:
    """sqrt((B+F)(A-F)) / |T0 - S0*F|; defined for F <= A, T0 != S0*F."""
    a, b = ab_funcs(p.s0, p.t0)
    if p.big_f > a:
        raise ValueError("y2 requires F <= A")
    den = p.t0 - p.s0 * p.big_f
    if den == 0.0:
        raise ValueError("y2 requires T0 != S0*F")
    return math.sqrt((b + p.big_f) * (a - p.big_f)) / abs(den)


def phi_cubic_model(w: float, s0: float) -> float:
    """Small-argument model of the pluggable kernel transform:
    (1 + S0^2) w^3 / 3."""
    return (1.0 + s0 * s0) * w**3 / 3.0


def _check_trace_range(big_x: float, t: int) -> None:
    if not 2 < t < math.sqrt(big_x):
        raise ValueError("trace must satisfy 2 < t < sqrt(X)")


def amplitude_ax(big_x: float, t1: int, t2: int) -> float:
    """Stationary amplitude for the B-edge contribution."""
    _check_trace_range(big_x, t1)
    _check_trace_range(big_x, t2)
    r1 = math.sqrt(big_x - t1 * t1)
    r2 = math.sqrt(big_x - t2 * t2)
    prefix = r1 * big_x / (3.0 * t1**3)
    bracket = math.sqrt(2.0 * big_x / (t1 * t2)) / (
        r2 / t2 + (r1 / t1) * ((big_x + r1 * r2) / (t1 * t2))
    )
    return prefix * bracket**3


def amplitude_bx(big_x: float, t1: int, t2: int) -> float:
    """Stationary amplitude for the A-edge contribution; needs t1 != t2."""
    _check_trace_range(big_x, t1)
    _check_trace_range(big_x, t2)
    if t1 == t2:
        raise ValueError("amplitude_bx requires t1 != t2")
    r1 = math.sqrt(big_x - t1 * t1)
    r2 = math.sqrt(big_x - t2 * t2)
    prefix = big_x * r1 / 3.0
    bracket = math.sqrt(2.0 * t1 * t2) * (r1 + r2) / (abs(t1 * t1 - t2 * t2) * math.sqrt(big_x))
    return prefix * bracket**3


def amplitude_cx(big_x: float, t1: int, t2: int, alpha: float) -> float:
    """sgn(t1-t2) * B_X * psi0(|t1-t2| / X^(1/2-alpha)); zero whenever the
    cutoff vanishes (in particular at t1 = t2)."""
    cutoff = psi0(abs(t1 - t2) / big_x ** (0.5 - alpha))
    if cutoff == 0.0:
        return 0.0
    sign = 1.0 if t1 > t2 else -1.0
    return sign * amplitude_bx(big_x, t1, t2) * cutoff


def _try_s0(ctx, j, t):
    try:
        return s0_of(ctx, j, t)
    except ValueError:
        return None


def region_member(
    ctx: AnalyticContext,
    i: int,
    j1: int,
    j2: int,
    t1: int,
    t2: int,
    f: int,
    which: str,
) -> bool:
    """Membership in the dyadic-cell triple sets.

    "U" uses the B-window; "V" and "W" use the A-window with opposite
    trace orderings.  ``i`` indexes the grid interval [a_i, a_{i+1});
    domain failures (negative radicands, cells past sqrt(X)) are simply
    non-membership.
    """
    if which not in ("U", "V", "W"):
        raise ValueError("which must be 'U', 'V' or 'W'")
    if not 0 <= i < len(ctx.grid) - 1:
        raise ValueError("grid interval index out of range")
    a_i = ctx.grid[i]
    a_next = ctx.grid[i + 1]
    if not (a_i <= t1 <= a_next - 1 and a_i <= t2 <= a_next - 1):
        return False
    if t1 * t1 <= 4 or t2 * t2 <= 4:
        return False
    big_f = abs(f) / (math.sqrt(t1 * t1 - 4.0) * math.sqrt(t2 * t2 - 4.0))
    if not big_f > 1.0:
        return False
    s0_j1 = _try_s0(ctx, j1, t1)
    t0_0 = _try_s0(ctx, 0, t2)
    t0_j2 = _try_s0(ctx, j2, t2)
    if s0_j1 is None or t0_0 is None or t0_j2 is None:
        return False
    x = ctx.big_x
    xd = x**ctx.delta
    if which == "U":
        _, b_hi = ab_funcs(s0_j1, t0_j2)
        _, b_lo = ab_funcs(s0_j1, t0_0)
        return b_lo - (ctx.d / a_i**2) * xd < big_f <= b_hi
    if x - a_i * a_i <= 0:
        return False
    a_hi, _ = ab_funcs(s0_j1, t0_j2)
    a_lo, _ = ab_funcs(s0_j1, t0_0)
    window = a_lo - (ctx.d * abs(t2 - t1) / (a_i * (x - a_i * a_i))) * xd < big_f <= a_hi
    if not window:
        return False
    gap = (ctx.d * a_i / x) * x**ctx.delta0
    if which == "V":
        return t1 - t2 > gap
    return t2 - t1 > gap


def c_shifts(
    ctx: AnalyticContext, i: int, j1: int, j2: int, t1: int, t2: int
) -> Tuple[float, float]:
    """Shift constants entering the oscillatory transform windows:
    differences of the B (resp. A) kernels between j2 and 0, minus the
    window slack, in units of d/sqrt((t1^2-4)(t2^2-4))."""
    if not 0 <= i < len(ctx.grid) - 1:
        raise ValueError("grid interval index out of range")
    a_i = ctx.grid[i]
    x = ctx.big_x
    if x - a_i * a_i <= 0:
        raise ValueError("cell lies past sqrt(X)")
    s0_j1 = s0_of(ctx, j1, t1)
    t0_0 = s0_of(ctx, 0, t2)
    t0_j2 = s0_of(ctx, j2, t2)
    scale = math.sqrt((t1 * t1 - 4.0) * (t2 * t2 - 4.0)) / ctx.d
    xd = x**ctx.delta
    a_0, b_0 = ab_funcs(s0_j1, t0_0)
    a_j, b_j = ab_funcs(s0_j1, t0_j2)
    c1 = (b_0 - (ctx.d / a_i**2) * xd - b_j) * scale
    c2 = (a_0 - (ctx.d * abs(t2 - t1) / (a_i * (x - a_i * a_i))) * xd - a_j) * scale
    return c1, c2


def oscillatory_h(
    beta1: float, shift: float, freq: float, big_x: float, order: int = 16
) -> complex:
    """integral over y > 0 of e(y*freq) y^(3/2) psi0(X^beta1 * y)
    (1 - psi0(y + shift)) dy.

    The integrand is supported in [X^-beta1 / 2, 1 - shift]; panels are
    kept shorter than a quarter oscillation period.
    """
    if beta1 <= 0 or big_x <= 1:
        raise ValueError("oscillatory_h needs beta1 > 0 and X > 1")
    lo = 0.5 * big_x**-beta1
    hi = 1.0 - shift
    if hi <= lo:
        return 0j
    width = min((hi - lo) / 8.0, 1.0 / (4.0 * abs(freq) + 1.0))
    panels = max(8, math.ceil((hi - lo) / width))
    gx, gw = _leggauss(order)
    total = 0j
    step = (hi - lo) / panels
    for k in range(panels):
        a = lo + k * step
        mid = a + 0.5 * step
        ys = mid + 0.5 * step * gx
        vals = (
            np.exp(2j * math.pi * freq * ys)
            * ys**1.5
            * psi0(big_x**beta1 * ys)
            * (1.0 - psi0(ys + shift))
        )
        total += 0.5 * step * np.sum(gw * vals)
    return complex(total)
