"""Hyperbolic circle problem for the modular group.

Orbit counting N(z, X) = #{g : 4u(gz, z) + 2 <= X} with per-|trace|
tallies, an exhaustive box-scan oracle, smoothed multi-difference
counts, and local L2 error statistics over the fundamental domain.

Points of the upper half plane are complex numbers with positive
imaginary part.  Group elements are integer 4-tuples (a, b, c, d) of
determinant one; opposite pairs are identified (the count is over the
projective group), normalized so the first nonzero of (c, d, a) is
positive.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

from .smoothweights import _leggauss, eta0

Mat = Tuple[int, int, int, int]

# Enumeration bounds are slackened by this factor and every candidate is
# re-verified against the exact inequality: bounds only prune.
K_SAFE = 4.0


def u_dist(z: complex, w: complex) -> float:
    """u(z, w) = |z - w|^2 / (4 Im z Im w); 1 + 2u = cosh(distance)."""
    dz = z - w
    return (dz.real * dz.real + dz.imag * dz.imag) / (4.0 * z.imag * w.imag)


def mobius(g: Mat, z: complex) -> complex:
    a, b, c, d = g
    return (a * z + b) / (c * z + d)


def psl2_normalize(g: Mat) -> Mat:
    """Representative of {g, -g} with the first nonzero of (c, d, a) positive."""
    a, b, c, d = g
    if a * d - b * c != 1:
        raise ValueError("not a determinant-one matrix")
    for v in (c, d, a):
        if v != 0:
            return g if v > 0 else (-a, -b, -c, -d)
    raise ValueError("zero matrix")


@dataclass
class CountResult:
    total: int
    by_abs_trace: Dict[int, int] = field(default_factory=dict)

    def check(self) -> None:
        assert sum(self.by_abs_trace.values()) == self.total


def _qualifies(g: Mat, z: complex, big_x: float) -> bool:
    return 4.0 * u_dist(mobius(g, z), z) + 2.0 <= big_x


def _scan_matrices(z: complex, big_x: float):
    """Yield one representative per projective group element inside the
    orbit ball, using the translate structure of fixed (c, d) columns."""
    if big_x < 2.0:
        raise ValueError("count_orbit requires X >= 2")
    x, y = z.real, z.imag
    r2 = big_x - 2.0
    # c = 0: translations z -> z + b, trace 2
    bmax = int(math.floor(y * math.sqrt(r2))) + 2
    for b in range(-bmax, bmax + 1):
        g = (1, b, 0, 1)
        if _qualifies(g, z, big_x):
            yield g
    cmax = int(math.ceil(math.sqrt(big_x * K_SAFE) / y)) + 1
    for c in range(1, cmax + 1):
        # |cz + d|^2 <= X * K_SAFE prunes d
        lim = big_x * K_SAFE - c * c * y * y
        if lim < 0:
            continue
        half = math.sqrt(lim)
        dlo = int(math.floor(-c * x - half)) - 1
        dhi = int(math.ceil(-c * x + half)) + 1
        for d in range(dlo, dhi + 1):
            if math.gcd(c, d) != 1:
                continue
            a0 = pow(d % c, -1, c) if c > 1 else 0
            b0 = (a0 * d - 1) // c
            w0 = mobius((a0, b0, c, d), z)
            # the family (a0 + t*c, b0 + t*d) maps z to w0 + t
            denom2 = (c * x + d) ** 2 + (c * y) ** 2
            rad2 = r2 * y * y / denom2 - (w0.imag - y) ** 2
            if rad2 < -1e-9:
                continue
            rad = math.sqrt(max(rad2, 0.0))
            tlo = int(math.floor(x - w0.real - rad)) - 1
            thi = int(math.ceil(x - w0.real + rad)) + 1
            for t in range(tlo, thi + 1):
                g = (a0 + t * c, b0 + t * d, c, d)
                if _qualifies(g, z, big_x):
                    yield g


def count_orbit(z: complex, big_x: float) -> CountResult:
    """N(z, X) with per-|trace| tallies.

    Enumerates c = 0 translations directly and, for c >= 1, solves the
    admissible translate range of each coprime column (c, d) exactly;
    every candidate is verified against the defining inequality.
    """
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half plane")
    tally: Dict[int, int] = {}
    total = 0
    for a, b, c, d in _scan_matrices(z, big_x):
        tr = abs(a + d)
        tally[tr] = tally.get(tr, 0) + 1
        total += 1
    return CountResult(total, tally)


def orbit_radii(z: complex, big_x: float) -> np.ndarray:
    """Sorted multiset of the values 4u(gz, z) + 2 <= X over the
    projective group; N(z, V) = #{radii <= V} for any V <= X."""
    vals = [4.0 * u_dist(mobius(g, z), z) + 2.0 for g in _scan_matrices(z, big_x)]
    return np.sort(np.array(vals))


def count_orbit_naive(z: complex, big_x: float, entry_bound: int) -> CountResult:
    """Independent oracle: exhaustive scan of all determinant-one integer
    matrices with entries bounded by entry_bound (projective classes)."""
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half plane")
    tally: Dict[int, int] = {}
    total = 0
    if big_x < 2.0:
        return CountResult(0, {})
    bb = int(entry_bound)
    # c = 0: a = d = 1 after normalization
    for b in range(-bb, bb + 1):
        if _qualifies((1, b, 0, 1), z, big_x):
            tally[2] = tally.get(2, 0) + 1
            total += 1
    avals = np.arange(-bb, bb + 1, dtype=np.int64)
    aa, dd = np.meshgrid(avals, avals, indexing="ij")
    num = aa * dd - 1
    for c in range(1, bb + 1):
        mask = num % c == 0
        bmat = np.zeros_like(num)
        bmat[mask] = num[mask] // c
        mask &= np.abs(bmat) <= bb
        if not mask.any():
            continue
        wnum = aa[mask] * z + bmat[mask]
        wden = c * z + dd[mask]
        w = wnum / wden
        uu = np.abs(w - z) ** 2 / (4.0 * z.imag * w.imag)
        near = 4.0 * uu + 2.0 <= big_x + 1e-6
        for a, b, d in zip(aa[mask][near], bmat[mask][near], dd[mask][near]):
            g = (int(a), int(b), c, int(d))
            if _qualifies(g, z, big_x):
                tr = abs(g[0] + g[3])
                tally[tr] = tally.get(tr, 0) + 1
                total += 1
    return CountResult(total, tally)


def suggest_entry_bound(z: complex, big_x: float) -> int:
    """A generous entry box for the naive oracle at (z, X)."""
    x, y = z.real, z.imag
    s = math.sqrt(max(big_x, 4.0))
    scale = max(1.0 / y, y, 1.0 + abs(x))
    return int(math.ceil(3.0 * s * scale)) + 2


def m_sum(t: int, x: float, z: complex) -> int:
    """Number of projective classes of trace-t matrices with u(gz, z) <= x."""
    if t <= 2:
        raise ValueError("m_sum requires t > 2")
    if x <= 0:
        return 0
    return count_orbit(z, 4.0 * x + 2.0).by_abs_trace.get(t, 0)


def _binomial(n: int, k: int) -> int:
    return math.comb(n, k)


def smoothed_difference(
    count_fn: Callable[[float], float],
    jumps: Sequence[float],
    big_x: float,
    d: float,
    big_j: int,
    weight: Callable = eta0,
    order: int = 20,
) -> float:
    """sum_j (-1)^j C(J,j) int_1^2 weight(tau) count_fn(X - j*d*tau) dtau.

    ``jumps`` lists argument values where count_fn is discontinuous; the
    inner integral is split exactly at the induced breakpoints, so only
    smooth weight integrals are quadratured.
    """
    gx, gw = _leggauss(order)
    max_width = 1.0 / 32.0
    total = 0.0
    for j in range(big_j + 1):
        coeff = (-1) ** j * _binomial(big_j, j)
        cuts = {1.0, 2.0}
        if j > 0:
            for v in jumps:
                tau = (big_x - v) / (j * d)
                if 1.0 < tau < 2.0:
                    cuts.add(tau)
        pts = sorted(cuts)
        acc = 0.0
        for lo, hi in zip(pts[:-1], pts[1:]):
            if hi - lo < 1e-15:
                continue
            # subdivide for the smooth weight; count_fn is sampled at the
            # quadrature nodes, exact for both piecewise-constant and
            # polynomial integrands
            pieces = max(1, math.ceil((hi - lo) / max_width))
            for k in range(pieces):
                a = lo + (hi - lo) * k / pieces
                b = lo + (hi - lo) * (k + 1) / pieces
                half = 0.5 * (b - a)
                nodes = 0.5 * (a + b) + half * gx
                wvals = weight(nodes)
                fvals = np.array([count_fn(big_x - j * d * t) for t in nodes])
                acc += half * float(np.sum(gw * wvals * fvals))
        total += coeff * acc
    return total


def smoothed_count(
    z: complex, big_x: float, d: float, big_j: int, weight: Callable = eta0
) -> float:
    """The J-fold smoothed difference of N(z, .) at scale d.

    Requires X - 2*J*d > 2 so every shifted argument stays above the
    orbit threshold.
    """
    if big_j < 0:
        raise ValueError("J must be nonnegative")
    if big_x - 2.0 * big_j * d <= 2.0:
        raise ValueError("smoothed_count requires X - 2*J*d > 2")
    radii = orbit_radii(z, big_x)

    def count_fn(v: float) -> float:
        return float(bisect_right(radii, v))

    return smoothed_difference(count_fn, radii.tolist(), big_x, d, big_j, weight)


def local_l2(
    region: Tuple[float, float, float, float], big_x: float, grid: int
) -> float:
    """Midpoint-rule estimate of (int over the region of
    (N(z,X) - 3X)^2 dmu)^(1/2) with dmu = dx dy / y^2.

    The rectangle (x0, x1, y0, y1) must lie inside the closed standard
    fundamental domain: |x| <= 1/2 and |z| >= 1.
    """
    x0, x1, y0, y1 = region
    if not (x0 < x1 and 0 < y0 < y1):
        raise ValueError("degenerate region")
    if x0 < -0.5 - 1e-12 or x1 > 0.5 + 1e-12:
        raise ValueError("region leaves |Re z| <= 1/2")
    xm = 0.0 if x0 <= 0.0 <= x1 else min(abs(x0), abs(x1))
    if xm * xm + y0 * y0 < 1.0 - 1e-12:
        raise ValueError("region dips below |z| = 1")
    if grid < 1:
        raise ValueError("grid must be positive")
    dx = (x1 - x0) / grid
    dy = (y1 - y0) / grid
    acc = 0.0
    for i in range(grid):
        xm_i = x0 + (i + 0.5) * dx
        for j in range(grid):
            ym_j = y0 + (j + 0.5) * dy
            n_val = count_orbit(complex(xm_i, ym_j), big_x).total
            err = n_val - 3.0 * big_x
            acc += err * err / (ym_j * ym_j) * dx * dy
    return math.sqrt(acc)


def write_error_scan(
    rows: Sequence[Tuple[float, float, float, int]], path: str
) -> None:
    """CSV export with header x,y,X,N,err (err = N - 3X)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "X", "N", "err"])
        for x, y, big_x, n_val in rows:
            w.writerow([repr(x), repr(y), repr(big_x), n_val, repr(n_val - 3.0 * big_x)])
