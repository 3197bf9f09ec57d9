"""Smoothed Salie-sum averages over arithmetic progressions of moduli,
dyadic cancellation scans, and the four-parameter boxed Salie sum.

The scan kernel is (1/C) * sum over c in [C, 2C] with c = r (mod L) and
K | c of f(c) T(m, inv(L)*n; c) e(sqrt(mn) * alpha / c).  Admissible
moduli are merged into a single progression by the Chinese remainder
theorem, factored in bulk by a sieve over the segment, and evaluated by
the closed-form Salie path.

Parallel evaluation is deterministic: the progression is cut into
fixed-size chunks, each chunk is summed with compensated accumulation,
and chunk partials are combined in index order, so results are
bit-identical for any worker count.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arith import primes_up_to
from .expsums import KahanComplex, e_real, salie_direct, _salie_fast_rec
from .smoothweights import BumpSpec

CHUNK = 1 << 16


@dataclass(frozen=True)
class ConjectureParams:
    """One smoothed average: modulus class (L, K, r), twist (m, n),
    phase range alpha in [-B, B], dyadic window [C, 2C], and weight."""

    m: int
    n: int
    big_l: int
    big_k: int
    r: int
    big_c: float
    alpha: float = 0.0
    b_bound: float = 1.0
    weight: Optional[BumpSpec] = None

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if self.big_l < 2 or self.big_l % 2:
            raise ValueError("L must be even and positive")
        if self.big_k < 1 or self.r < 1:
            raise ValueError("K and r must be positive")
        if math.gcd(self.big_l, self.big_k * self.r) != 1:
            raise ValueError("requires gcd(L, K*r) = 1")
        if self.big_c < 1:
            raise ValueError("requires C >= 1")
        if self.b_bound <= 0 or abs(self.alpha) > self.b_bound:
            raise ValueError("alpha must lie in [-B, B]")
        if self.weight is None:
            object.__setattr__(self, "weight", BumpSpec("dyadic", {"C": float(self.big_c)}))

    def progression(self) -> Tuple[int, int]:
        """(first admissible c >= C, step): c = r (mod L), K | c."""
        step = self.big_l * self.big_k
        inv = pow(self.big_l % self.big_k, -1, self.big_k) if self.big_k > 1 else 0
        c0 = (self.r + self.big_l * ((-self.r) * inv % self.big_k)) % step
        lo = math.ceil(self.big_c)
        c0 += step * max(0, math.ceil((lo - c0) / step))
        return c0, step


@dataclass(frozen=True)
class ScanRecord:
    big_c: float
    sum_re: float
    sum_im: float
    abs_sum: float
    terms: int
    seconds: float

    def __post_init__(self):
        assert self.terms >= 0
        assert abs(self.abs_sum - math.hypot(self.sum_re, self.sum_im)) <= 1e-12 * (
            1.0 + self.abs_sum
        )


def batch_factor(values: np.ndarray) -> List[Tuple[Tuple[int, int], ...]]:
    """Factor every entry of an integer array by shared trial division;
    cofactors surviving all primes up to sqrt(max) are prime."""
    if len(values) == 0:
        return []
    work = values.astype(np.int64).copy()
    if np.any(work < 1):
        raise ValueError("batch_factor needs positive integers")
    factors: List[List[Tuple[int, int]]] = [[] for _ in range(len(work))]
    vmax = int(work.max())
    for p in primes_up_to(math.isqrt(vmax) + 1):
        idx = np.nonzero(work % p == 0)[0]
        if len(idx) == 0:
            continue
        sub = work[idx]
        exps = np.zeros(len(idx), dtype=np.int64)
        alive = sub % p == 0
        while alive.any():
            sub[alive] //= p
            exps[alive] += 1
            alive &= sub % p == 0
        work[idx] = sub
        for i, e in zip(idx, exps):
            factors[int(i)].append((p, int(e)))
    for i in np.nonzero(work > 1)[0]:
        factors[int(i)].append((int(work[int(i)]), 1))
    return [tuple(f) for f in factors]


def _chunk_sum(params: ConjectureParams, i0: int, i1: int) -> Tuple[complex, int, float]:
    """Partial sum over admissible moduli with indices [i0, i1); pure in
    its arguments, so identical for any worker layout."""
    c0, step = params.progression()
    cs = c0 + step * np.arange(i0, i1, dtype=np.int64)
    cs = cs[cs <= 2.0 * params.big_c]
    if len(cs) == 0:
        return 0j, 0, 0.0
    weights = np.array([params.weight(float(c)) for c in cs])
    live = np.nonzero(weights != 0.0)[0]
    if len(live) == 0:
        return 0j, 0, 0.0
    facs = batch_factor(cs[live])
    acc = KahanComplex()
    envelope = 0.0
    sq = math.sqrt(params.m * params.n)
    terms = 0
    for k, i in enumerate(live):
        c = int(cs[i])
        w = float(weights[i])
        n_arg = pow(params.big_l % c, -1, c) * params.n % c
        tval = _salie_fast_rec(params.m % c, n_arg, c, facs[k])
        term = w * tval * e_real(sq * params.alpha / c)
        acc.add(term)
        dcount = 1
        for _, e in facs[k]:
            dcount *= e + 1
        envelope += abs(w) * dcount * math.sqrt(c) * math.sqrt(math.gcd(params.m, params.n, c))
        terms += 1
    return acc.value(), terms, envelope


def _chunk_worker(args):
    params, i0, i1 = args
    return _chunk_sum(params, i0, i1)


@dataclass(frozen=True)
class ConjectureResult:
    value: complex
    terms: int
    envelope: float
    seconds: float


def conjecture_sum_detailed(params: ConjectureParams, workers: int = 1) -> ConjectureResult:
    t_start = time.perf_counter()
    c0, step = params.progression()
    hi = 2.0 * params.big_c
    count = max(0, math.floor((hi - c0) / step) + 1) if c0 <= hi else 0
    chunks = [(params, i, min(i + CHUNK, count)) for i in range(0, count, CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with get_context("fork").Pool(workers) as pool:
            partials = pool.map(_chunk_worker, chunks, chunksize=1)
    else:
        partials = [_chunk_worker(ch) for ch in chunks]
    total = 0j
    terms = 0
    envelope = 0.0
    for value, n_terms, env in partials:  # fixed combination order
        total += value
        terms += n_terms
        envelope += env
    return ConjectureResult(
        total / params.big_c, terms, envelope, time.perf_counter() - t_start
    )


def conjecture_sum(params: ConjectureParams, workers: int = 1) -> complex:
    """The normalized average; see the module docstring for the kernel."""
    return conjecture_sum_detailed(params, workers).value


def conjecture_sum_direct(params: ConjectureParams) -> complex:
    """Independent oracle: same enumeration, but every Salie sum is done
    by direct term-by-term summation."""
    c0, step = params.progression()
    acc = KahanComplex()
    sq = math.sqrt(params.m * params.n)
    c = c0
    while c <= 2.0 * params.big_c:
        w = params.weight(float(c))
        if w != 0.0:
            n_arg = pow(params.big_l % c, -1, c) * params.n % c
            acc.add(w * salie_direct(params.m % c, n_arg, c) * e_real(sq * params.alpha / c))
        c += step
    return acc.value() / params.big_c


def dyadic_scan(
    base: ConjectureParams, cs: Sequence[float], workers: int = 1
) -> Tuple[List[ScanRecord], float, float]:
    """Evaluate the average over a dyadic ladder of window sizes.

    Returns (records, slope, residual) where the slope is the
    least-squares exponent of log(C * |sum|) against log C; under
    square-root-cancellation heuristics it should hover near zero after
    the 1/C normalization removes the trivial growth.
    """
    if any(b <= a for a, b in zip(cs, cs[1:])):
        raise ValueError("window sizes must increase")
    records = []
    for big_c in cs:
        p = ConjectureParams(
            base.m, base.n, base.big_l, base.big_k, base.r, float(big_c),
            base.alpha, base.b_bound, BumpSpec("dyadic", {"C": float(big_c)}),
        )
        res = conjecture_sum_detailed(p, workers)
        records.append(
            ScanRecord(
                float(big_c), res.value.real, res.value.imag,
                abs(res.value), res.terms, res.seconds,
            )
        )
    xs = np.log([r.big_c for r in records])
    ys = np.array(
        [math.log(max(r.big_c * r.abs_sum, 1e-300)) for r in records]
    )
    coef, residuals, _, _ = np.linalg.lstsq(
        np.stack([xs, np.ones_like(xs)], axis=1), ys, rcond=None
    )
    resid = float(residuals[0]) if len(residuals) else 0.0
    return records, float(coef[0]), resid


# ---------------------------------------------------------------------------
# the boxed four-parameter sum


def default_statement_weight(a: float, big_m: float, big_c: float) -> Callable:
    """Product of dyadic bumps on [a,2a] x [a,2a] x [M,2M] x [C,2C]."""
    bt = BumpSpec("dyadic", {"C": float(a)})
    bm = BumpSpec("dyadic", {"C": float(big_m)})
    bc = BumpSpec("dyadic", {"C": float(big_c)})
    return lambda t1, t2, m, c: bt(t1) * bt(t2) * bm(m) * bc(c)


@dataclass(frozen=True)
class StatementParams:
    """Box data for the four-fold sum: modulus structure (K, u) with
    L = 4u^2, residues r1..r4 mod u, dyadic box scales (a, M, C), the
    orbit radius X entering the phase, and the phase sign kappa."""

    big_k: int
    u: int
    r1: int
    r2: int
    r3: int
    r4: int
    big_c: float
    a: float
    big_m: float
    big_x: float
    kappa: int
    g: Optional[Callable] = None
    max_terms: int = 100_000_000

    def __post_init__(self):
        if self.u < 4 or self.u % 4:
            raise ValueError("u must be a positive multiple of 4")
        if self.big_k < 1 or math.gcd(self.big_k, 4 * self.u * self.u) != 1:
            raise ValueError("requires gcd(K, L) = 1 with L = 4u^2")
        if math.gcd(self.r4, self.u) != 1:
            raise ValueError("requires gcd(r4, u) = 1")
        if self.kappa not in (-1, 1):
            raise ValueError("kappa must be -1 or +1")
        if min(self.big_c, self.a, self.big_m) < 1:
            raise ValueError("box scales must be >= 1")
        if self.big_x <= 4.0 * self.a * self.a:
            raise ValueError("requires X > 4a^2 so the phase stays real")
        if self.g is None:
            object.__setattr__(
                self, "g", default_statement_weight(self.a, self.big_m, self.big_c)
            )

    @property
    def big_l(self) -> int:
        return 4 * self.u * self.u


def _progression_range(lo: float, hi: float, residue: int, modulus: int) -> range:
    start = math.ceil(lo)
    start += (residue - start) % modulus
    return range(start, math.floor(hi) + 1, modulus)


def statement_sum(params: StatementParams) -> complex:
    """sum over the box of g * phase * T((t1^2-4)m^2, inv(L)(t2^2-4); c)
    with t1 = r1, t2 = r2, m = r3, c = r4 (mod u), K | t1^2-4 and K | c,
    phase e(m (X + kappa*sqrt(X-(t1^2-4))*sqrt(X-(t2^2-4))) / (c u))."""
    u = params.u
    t1s = [
        t for t in _progression_range(params.a, 2.0 * params.a, params.r1, u)
        if t > 2 and (t * t - 4) % params.big_k == 0
    ]
    t2s = [t for t in _progression_range(params.a, 2.0 * params.a, params.r2, u) if t > 2]
    ms = list(_progression_range(params.big_m, 2.0 * params.big_m, params.r3, u))
    cs = [
        c for c in _progression_range(params.big_c, 2.0 * params.big_c, params.r4, u)
        if c % params.big_k == 0
    ]
    total_terms = len(t1s) * len(t2s) * len(ms) * len(cs)
    if total_terms > params.max_terms:
        raise ValueError(f"term budget exceeded: {total_terms} > {params.max_terms}")
    if total_terms == 0:
        return 0j
    big_l = params.big_l
    acc = KahanComplex()
    for c in cs:
        fac = batch_factor(np.array([c]))[0]
        linv = pow(big_l % c, -1, c)
        salie_memo: Dict[Tuple[int, int], complex] = {}
        for t2 in t2s:
            n_arg = linv * (t2 * t2 - 4) % c
            r2x = math.sqrt(params.big_x - (t2 * t2 - 4))
            for t1 in t1s:
                m_base = (t1 * t1 - 4) % c
                r1x = math.sqrt(params.big_x - (t1 * t1 - 4))
                phase_num = params.big_x + params.kappa * r1x * r2x
                for m in ms:
                    w = params.g(float(t1), float(t2), float(m), float(c))
                    if w == 0.0:
                        continue
                    m_arg = m_base * m * m % c
                    key = (m_arg, n_arg)
                    tval = salie_memo.get(key)
                    if tval is None:
                        tval = _salie_fast_rec(m_arg, n_arg, c, fac)
                        salie_memo[key] = tval
                    acc.add(w * tval * e_real(m * phase_num / (c * u)))
    return acc.value()
